"""Finite groups acting by signed permutation matrices on R^N.

Two families are needed: the generalized quaternion group of order 4n acting
on R^n through its dihedral quotient (epsilon cycles the coordinates, j
reverses them), and cyclic groups acting by coordinate permutations for the
small worked fixtures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactlin import Matrix, Vec, determinant


@dataclass(frozen=True)
class GroupElement:
    word: tuple[int, int]  # (k, jflag) meaning eps^k * j^jflag
    matrix: Matrix

    def __repr__(self):
        k, j = self.word
        if j == 0:
            return "1" if k == 0 else f"eps^{k}"
        return f"eps^{k} j" if k else "j"


def _perm_matrix(images: dict[int, int], n: int) -> Matrix:
    """Matrix sending e_i -> e_{images[i]} (1-based indices)."""
    rows = [[0] * n for _ in range(n)]
    for i in range(1, n + 1):
        rows[images[i] - 1][i - 1] = 1
    return Matrix(rows)


@dataclass
class ActionGroup:
    """A fully enumerated group of signed-permutation actions."""

    elements: list[GroupElement]
    ambient_dim: int
    generators: list[GroupElement]
    law: str          # "quaternion" or "cyclic"
    modulus: int      # word exponent modulus (2n for quaternion, m for cyclic)
    _by_word: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._by_word = {g.word: g for g in self.elements}

    @property
    def order(self) -> int:
        return len(self.elements)

    def identity(self) -> GroupElement:
        return self._by_word[(0, 0)]

    def by_word(self, k: int, jflag: int = 0) -> GroupElement:
        return self._by_word[(k % self.modulus, jflag)]

    def mul(self, g: GroupElement, h: GroupElement) -> GroupElement:
        k1, d1 = g.word
        k2, d2 = h.word
        if self.law == "cyclic":
            return self.by_word(k1 + k2, 0)
        # eps^k j eps^m = eps^(k-m) j, and j j = eps^n
        if d1 == 0:
            k, d = k1 + k2, d2
        else:
            k, d = k1 - k2, 1 + d2
        if d == 2:
            k, d = k + self.modulus // 2, 0
        return self.by_word(k, d)

    def inv(self, g: GroupElement) -> GroupElement:
        k, d = g.word
        if self.law == "cyclic" or d == 0:
            return self.by_word(-k, 0)
        # (eps^k j)^-1 = eps^(k-n) j
        return self.by_word(k - self.modulus // 2, 1)

    def power(self, g: GroupElement, m: int) -> GroupElement:
        out = self.identity()
        step = g if m >= 0 else self.inv(g)
        for _ in range(abs(m)):
            out = self.mul(out, step)
        return out


def quaternion_on_Wn(n: int) -> ActionGroup:
    """Order-4n generalized quaternion group acting on R^n.

    eps maps e_i to e_{i mod n + 1} and j maps e_i to e_{n-i+1}; the central
    element eps^n acts as the identity (the action factors through the
    dihedral quotient of order 2n).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    eps_m = _perm_matrix({i: i % n + 1 for i in range(1, n + 1)}, n)
    j_m = _perm_matrix({i: n - i + 1 for i in range(1, n + 1)}, n)
    elements = []
    acc = Matrix.identity(n)
    powers = []
    for k in range(2 * n):
        powers.append(acc)
        acc = eps_m.mul(acc)
    for k in range(2 * n):
        elements.append(GroupElement((k, 0), powers[k]))
    for k in range(2 * n):
        elements.append(GroupElement((k, 1), powers[k].mul(j_m)))
    group = ActionGroup(elements, n, [], "quaternion", 2 * n)
    group.generators = [group.by_word(1, 0), group.by_word(0, 1)]
    return group


def _perm_order(images: tuple[int, ...]) -> int:
    n = len(images)
    seen = [False] * n
    order = 1
    for i in range(n):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = images[j] - 1
            length += 1
        lcm = order * length
        from math import gcd
        order = lcm // gcd(order, length)
    return order


def cyclic_shift_group(m: int, N: int, shift_spec: tuple[int, ...]) -> ActionGroup:
    """Cyclic group of order m whose generator sends e_i to e_{shift_spec[i-1]}."""
    if sorted(shift_spec) != list(range(1, N + 1)):
        raise ValueError("shift_spec must be a permutation of 1..N")
    order = _perm_order(tuple(shift_spec))
    if m % order != 0:
        raise ValueError(f"permutation order {order} does not divide {m}")
    gen = _perm_matrix({i: shift_spec[i - 1] for i in range(1, N + 1)}, N)
    elements = []
    acc = Matrix.identity(N)
    for k in range(m):
        elements.append(GroupElement((k, 0), acc))
        acc = gen.mul(acc)
    group = ActionGroup(elements, N, [], "cyclic", m)
    group.generators = [group.by_word(1)]
    return group


def det_character(g: GroupElement) -> int:
    """Determinant of the action matrix; always +1 or -1 here."""
    d = determinant(g.matrix)
    if d not in (1, -1):
        raise ValueError(f"action matrix of {g} has determinant {d}")
    return int(d)


def act(g: GroupElement, v: Vec) -> Vec:
    if g.matrix.cols != len(v):
        raise ValueError("vector dimension does not match the action")
    return g.matrix.matvec(v)
