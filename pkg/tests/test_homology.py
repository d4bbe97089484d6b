from fractions import Fraction

import pytest

from fanpart.arrangement import make_subspace
from fanpart.exactlin import Matrix, vec
from fanpart.homology import (SimplicialComplex, UnsupportedArrangement,
                              boundary_matrix, complex_from_facets,
                              crosscut_complex, order_complex,
                              reduced_homology, verify_lemma16,
                              verify_no_homology_above_top, zz_basis)

from link_oracle import union_homology_rank


def two_points():
    return complex_from_facets([(1,), (2,)])


def triangle_boundary():
    return complex_from_facets([(1, 2), (2, 3), (1, 3)])


def test_reduced_homology_s0():
    h = reduced_homology(two_points(), 0)
    assert h.rank == 1
    assert h.torsion == []
    assert h.generator_reps and sorted(h.generator_reps[0]) == [-1, 1]


def test_reduced_homology_empty():
    empty = SimplicialComplex((), ())
    assert reduced_homology(empty, 0).rank == 0
    assert reduced_homology(empty, 2).rank == 0
    assert reduced_homology(empty, -1).rank == 1


def test_reduced_homology_circle():
    # hand chain complex: 0 -> Z^3 -> Z^3 -> 0 with rank-2 boundary
    h = reduced_homology(triangle_boundary(), 1)
    assert h.rank == 1
    assert reduced_homology(triangle_boundary(), 0).rank == 0


def test_reduced_homology_rp2_torsion():
    # minimal 6-vertex triangulation of the projective plane
    facets = [(1, 2, 5), (1, 2, 6), (1, 3, 4), (1, 3, 6), (1, 4, 5),
              (2, 3, 4), (2, 3, 5), (2, 4, 6), (3, 5, 6), (4, 5, 6)]
    cx = complex_from_facets(facets)
    h1 = reduced_homology(cx, 1)
    assert h1.rank == 0
    assert h1.torsion == [2]
    assert reduced_homology(cx, 2).rank == 0


def test_boundary_squares_to_zero():
    for cx in (triangle_boundary(),
               complex_from_facets([(1, 2, 3, 4), (2, 3, 4, 5)])):
        for d in range(0, cx.dim + 1):
            bd = boundary_matrix(cx, d)
            up = boundary_matrix(cx, d + 1)
            if bd.cols and up.cols:
                prod = bd.mul(up)
                assert all(x == 0 for row in prod.entries for x in row)


def test_euler_characteristic_consistency():
    cx = complex_from_facets([(1, 2, 3), (3, 4), (4, 5), (5, 1)])
    chi_cells = sum((-1) ** d * len(cx.faces(d)) for d in range(cx.dim + 1))
    chi_homology = 1 + sum(
        (-1) ** d * reduced_homology(cx, d).rank for d in range(cx.dim + 1))
    assert chi_cells == chi_homology


def test_order_complex_of_maximal_is_empty(fixture_data):
    data = fixture_data("z8")
    poset = data["poset"]
    for m in poset.maximal_node_ids:
        assert order_complex(poset, m).is_empty()


def test_order_complex_z4_wall_is_s0(fixture_data):
    data = fixture_data("z4")
    poset = data["poset"]
    walls = [nd for nd in poset.nodes if nd.dim == 2]
    assert len(walls) == 2
    for nd in walls:
        cx = order_complex(poset, nd.index)
        assert len(cx.vertices) == 2
        assert reduced_homology(cx, 0).rank == 1


def test_crosscut_matches_order_complex(fixture_data, main_data):
    posets = [fixture_data("z8")["poset"], fixture_data("z4")["poset"],
              main_data(6, 1, 2)["poset"]]
    for poset in posets:
        top = max(poset.nodes[m].dim for m in poset.maximal_node_ids)
        for nd in poset.nodes:
            if nd.index in poset.maximal_node_ids:
                continue
            deg = top - 1 - nd.dim
            a = reduced_homology(order_complex(poset, nd.index), deg)
            c = reduced_homology(crosscut_complex(poset, nd.index), deg)
            assert (a.rank, a.torsion) == (c.rank, c.torsion)


def test_zz_rank_z8(fixture_data):
    zz = fixture_data("z8")["zz"]
    assert zz.rank == 2
    assert len(zz.top_nodes) == 2
    assert not zz.walls


def test_zz_rank_z4(fixture_data):
    zz = fixture_data("z4")["zz"]
    assert zz.rank == 6
    assert len(zz.top_nodes) == 4
    assert sum(len(w.elements) - 1 for w in zz.walls) == 2


def test_zz_degree_bookkeeping(fixture_data, main_data):
    for data in (fixture_data("z4"), main_data(6, 1, 2)):
        zz = data["zz"]
        for gen in zz.generators:
            node_dim = zz.poset.nodes[gen.node].dim
            if gen.kind == "top":
                assert node_dim == zz.top_dim
                assert len(gen.orientation_basis) == node_dim
            else:
                assert node_dim == zz.top_dim - 1
                assert len(gen.orientation_basis) == node_dim


def test_zz_rank_matches_link_oracle_z8(fixture_data):
    # independent geometric model: order complex of the covector cells of
    # the link, homology by exact sparse elimination
    z8_rows = [
        [[1, 1, 0, 0, 0, 0, 0, 0], [0, 0, 1, 1, 0, 0, 0, 0],
         [0, 0, 0, 0, 1, 1, 0, 0], [0, 0, 0, 0, 0, 0, 1, 1]],
        [[0, 1, 1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 1, 0, 0, 0],
         [0, 0, 0, 0, 0, 1, 1, 0], [1, 0, 0, 0, 0, 0, 0, 1]],
    ]
    assert union_homology_rank(z8_rows, 8, 4) == fixture_data("z8")["zz"].rank


def test_zz_rank_matches_link_oracle_z4(fixture_data):
    B1 = [1, 1, 1, 1, 0, 0, 0, 0]
    B2 = [0, 0, 0, 0, 1, 1, 1, 1]

    def e(i):
        v = [0] * 8
        v[i - 1] = 1
        return v

    def pair(i, j):
        v = [0] * 8
        v[i - 1] = 1
        v[j - 1] = 1
        return v

    z4_rows = [
        [e(1), e(5), B1, B2, pair(3, 7)],
        [e(2), e(6), B1, B2, pair(4, 8)],
        [e(3), e(7), B1, B2, pair(1, 5)],
        [e(4), e(8), B1, B2, pair(2, 6)],
    ]
    assert union_homology_rank(z4_rows, 8, 3) == fixture_data("z4")["zz"].rank


@pytest.mark.parametrize("n,a,b,expected", [
    (6, 1, 2, 15), (8, 1, 3, 20), (8, 2, 2, 18), (6, 2, 1, 3)])
def test_main_case_ranks(main_data, n, a, b, expected):
    data = main_data(n, a, b)
    assert "zz" in data, f"unsupported: {data.get('zz_error')}"
    assert data["zz"].rank == expected


def test_main_case_31_unsupported(main_data):
    data = main_data(8, 3, 1)
    assert "zz_error" in data
    assert isinstance(data["zz_error"], UnsupportedArrangement)


@pytest.mark.parametrize("n,a,b", [(6, 1, 2), (8, 2, 2), (8, 1, 3)])
def test_lemma16_vanishing(main_data, n, a, b):
    assert verify_lemma16(main_data(n, a, b)["poset"], n)


def test_lemma16_fails_for_31(main_data):
    # the b = 1, a = 3 seed hyperplane degenerates and creates deep nodes
    # with genuine lower homology
    assert not verify_lemma16(main_data(8, 3, 1)["poset"], 8)


def test_no_homology_above_top(fixture_data, main_data):
    for data in (fixture_data("z8"), fixture_data("z4"), main_data(6, 1, 2)):
        assert verify_no_homology_above_top(data["poset"])


def test_zz_wall_pages_structure(main_data):
    zz = main_data(6, 1, 2)["zz"]
    poset = zz.poset
    for w in zz.walls:
        assert len(w.elements) == 5
        halves = [e for e in w.elements
                  if poset.nodes[e].subspace.inequalities]
        assert len(halves) == 4
        full = [e for e in w.elements if e not in halves]
        assert len(full) == 1
        # the full element carries both pages, the halves one each
        assert (full[0], 1) in w.rays and (full[0], -1) in w.rays
        for e in halves:
            assert (e, w.rep_side[e]) in w.rays
            assert (e, -w.rep_side[e]) not in w.rays


def test_action_permutes_generator_nodes(fixture_data):
    data = fixture_data("z4")
    zz, poset, group = data["zz"], data["poset"], data["group"]
    for g in group.elements:
        for gen in zz.generators:
            img = poset.act_node(g, gen.node)
            assert any(h.node == img and h.kind == gen.kind
                       for h in zz.generators)
