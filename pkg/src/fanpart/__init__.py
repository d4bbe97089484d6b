"""Exact equivariant-arrangement obstruction computations for 3-fan
partitions of two measures on the sphere."""

__version__ = "0.1.0"
