from __future__ import annotations

from fractions import Fraction

import pytest

from gamma72.enumeration import kissing_number, minimum
from gamma72.hermitian import find_structure
from gamma72.lattice import IntegerLattice, is_even, is_unimodular
from gamma72.polarization import (F2QuadSpace, InvariantFailure, NotEvenUnimodular, Polarization,
                                  WNotAdmissible, construction_I, f2_coordinates, f2_echelon, f2_rank,
                                  isotropic_complement_pair, mod2_space, neighbor_2,
                                  polarization_from_structure, preimages, sublattice, symplectic_basis,
                                  witt_defect)


def test_f2_helpers():
    vs = [0b011, 0b110, 0b101]
    assert f2_rank(vs) == 2
    assert len(f2_echelon(vs)) == 2
    basis = [0b001, 0b011, 0b111]
    r = f2_coordinates(basis, 3)
    # e_j = sum of basis vectors selected by r[j]
    for j in range(3):
        acc = 0
        for i in range(3):
            if r[j] >> i & 1:
                acc ^= basis[i]
        assert acc == 1 << j


def test_e8_mod2_space(e8):
    sp = mod2_space(e8)
    assert sp.dim == 8 and sp.is_nondegenerate()
    iso = sum(1 for x in sp.elements() if x and sp.q(x) == 0)
    assert iso == 135
    assert witt_defect(sp) == 0
    assert len(symplectic_basis(sp)) == 4


def test_witt_defect_planes():
    hyp = F2QuadSpace.from_forms([0, 0], [[0, 1], [1, 0]])
    aniso = F2QuadSpace.from_forms([1, 1], [[0, 1], [1, 0]])
    assert witt_defect(hyp) == 0
    assert witt_defect(aniso) == 1


def test_mod2_needs_even_unimodular():
    with pytest.raises(NotEvenUnimodular):
        mod2_space(IntegerLattice([[2, 1], [1, 2]]))


@pytest.mark.parametrize("seed", [0, 1, 7])
def test_polarizations_of_e8(e8, seed):
    space = mod2_space(e8)
    U, V = isotropic_complement_pair(space, seed)
    assert len(U) == len(V) == 4
    pol = preimages(space, U, V)
    for w in ("M", "N"):
        h = pol.half(w)
        assert is_even(h) and is_unimodular(h)
        assert h.rank == 8


def test_polarization_rejects_overlap(e8):
    space = mod2_space(e8)
    U, _ = isotropic_complement_pair(space, 0)
    pol = preimages(space, U, isotropic_complement_pair(space, 0)[1])
    with pytest.raises(InvariantFailure):
        Polarization(pol.L, pol.M, pol.M)


def test_structure_polarization_gives_leech(e8):
    sp = find_structure(e8, seed=0)
    pol = polarization_from_structure(e8, sp)
    C = construction_I(pol, 3)
    assert C.rank == 24 and C.det == 1
    assert kissing_number(C) == (4, 196560)


def test_construction_small_k(e8):
    pol = polarization_from_structure(e8, find_structure(e8, seed=0))
    C1 = construction_I(pol, 1)
    assert C1.det == 1 and minimum(C1) == 2
    C2 = construction_I(pol, 2)
    assert C2.rank == 16 and is_even(C2) and is_unimodular(C2)


def test_leech_polarization(leech_pol):
    for w in ("M", "N"):
        h = leech_pol.half(w)
        assert kissing_number(h) == (4, 196560)


def test_neighbor_d2_example():
    from gamma72 import _linalg as la
    M = IntegerLattice.from_basis([[2, 0], [0, 2]])
    N = neighbor_2(M, [1, 1])
    assert N.det == M.det
    assert la.hnf(la.to_int_rows(N.basis)) == [[1, 1], [0, 4]]


def test_neighbor_of_e8(e8):
    from gamma72.enumeration import short_vectors
    L = IntegerLattice(e8.gram, basis=[[int(i == j) for j in range(8)] for i in range(8)],
                       ambient_gram=e8.gram)
    vs = short_vectors(L, 8).vectors
    v = next(r for r in vs if L.norm(r) == 8 and any(int(x) % 2 for x in r))
    N = neighbor_2(L, [Fraction(int(x), 2) for x in v])
    assert is_even(N) and is_unimodular(N)
    with pytest.raises(WNotAdmissible):
        neighbor_2(L, [Fraction(1, 4)] + [0] * 7)


def test_neighbor_rejects_w_in_m():
    M = IntegerLattice.from_basis([[2, 0], [0, 2]])
    with pytest.raises(WNotAdmissible):
        neighbor_2(M, [2, 0])


def test_sublattice_ambient(e8):
    S = sublattice(e8, [[2 if i == j else 0 for j in range(8)] for i in range(8)])
    assert S.det == 4 ** 8
