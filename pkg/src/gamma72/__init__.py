"""Exact lattice tools for the 72-dimensional lattice Barnes (x) Leech over Z[alpha]."""

from __future__ import annotations

from .catalog import build_barnes, build_e8, build_gamma, build_leech, load_leech_structure
from .enumeration import coset_short_vectors, kissing_number, minimum, short_vectors
from .lattice import IntegerLattice, dual, is_even, is_unimodular, read_gram, write_gram

__all__ = [
    "IntegerLattice", "build_barnes", "build_e8", "build_gamma", "build_leech", "coset_short_vectors",
    "dual", "is_even", "is_unimodular", "kissing_number", "load_leech_structure", "minimum",
    "read_gram", "short_vectors", "write_gram",
]
__version__ = "0.1.0"
