from __future__ import annotations

from fractions import Fraction

import pytest

from gamma72 import _linalg as la
from gamma72.lattice import (IntegerLattice, LatticeError, coordinates_in, dual, is_even, is_unimodular,
                             orthogonal_sum, read_gram, rescale, scaled_sublattice, sublattice_index,
                             write_gram)


def test_e8_invariants(e8):
    assert e8.rank == 8 and e8.det == 1
    assert is_even(e8) and is_unimodular(e8)


def test_a2_dual():
    a2 = IntegerLattice([[2, -1], [-1, 2]])
    d = dual(a2)
    assert a2.det == 3 and d.det == Fraction(1, 3)
    assert not is_unimodular(a2)
    assert dual(d).gram == a2.gram


def test_rejects_bad_gram():
    with pytest.raises(LatticeError):
        IntegerLattice([[1, 2], [2, 1]])
    with pytest.raises(LatticeError):
        IntegerLattice([[2, 1], [0, 2]])


def test_basis_must_match_gram():
    with pytest.raises(LatticeError):
        IntegerLattice([[2]], basis=[[1, 0]], ambient_gram=[[1, 0], [0, 1]])


def test_sublattice_index_and_coordinates(e8):
    two = scaled_sublattice(e8, 2)
    assert two.det == 2 ** 16
    z = IntegerLattice.from_basis([[1, 0], [0, 1]])
    sub = IntegerLattice.from_basis([[2, 0], [1, 3]])
    assert sublattice_index(z, sub) == 6
    assert coordinates_in(z, [[3, -2]]) == [[3, -2]]
    assert coordinates_in(z, [[Fraction(1, 2), 0]]) is None


def test_sum_and_rescale(e8):
    s = orthogonal_sum(e8, e8)
    assert s.rank == 16 and s.det == 1
    r = rescale(e8, Fraction(1, 2))
    assert r.det == Fraction(1, 256)


def test_gram_file_round_trip(tmp_path):
    L = IntegerLattice([[Fraction(3, 2), Fraction(1, 2)], [Fraction(1, 2), 2]])
    p = tmp_path / "x.gram"
    write_gram(L, p)
    assert p.read_text() == "2\n3/2 1/2\n1/2 2\n"
    assert read_gram(p).gram == L.gram


def test_gram_file_errors(tmp_path):
    p = tmp_path / "bad.gram"
    p.write_text("2\n1 0\n")
    with pytest.raises(LatticeError):
        read_gram(p)
    p.write_text("1\nx\n")
    with pytest.raises(LatticeError):
        read_gram(p)


def test_hnf_and_kernel():
    rows = [[2, 4, 6], [1, 1, 1], [3, 5, 7]]
    h = la.hnf(rows)
    assert len(h) == 2
    k = la.left_kernel(rows)
    assert len(k) == 1
    assert all(sum(c * r[j] for c, r in zip(k[0], rows)) == 0 for j in range(3))
    assert la.int_det([[2, 1], [1, 2]]) == 3
