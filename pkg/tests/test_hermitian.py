from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from gamma72 import _linalg as la
from gamma72 import catalog
from gamma72.hermitian import (S_GAMMA, InvalidWitness, RankTooLarge, StructurePair, barnes, build_galois_block,
                               find_galois_isometry, find_structure, format_structure, galois_conjugate,
                               hermitian_automorphisms, hermitian_dual, hermitian_from_structure,
                               hermitian_tensor, parse_structure, same_module, shipped_galois_isometry, structure_of,
                               trace_dual_check, trace_lattice, validate_structure)
from gamma72.lattice import LatticeError, is_even, is_unimodular
from gamma72.zalpha import ALPHA, ZAlpha


def test_barnes_gram():
    P = barnes()
    assert P.rank == 3 and P.is_integral
    assert all(P.hgram[i][i] == 2 for i in range(3))


def test_barnes_trace_determinants():
    P = barnes()
    assert trace_lattice(P, 1).det == 7 ** 3
    L = trace_lattice(P, S_GAMMA)
    assert L.det == Fraction(7 ** 3, 7 ** 6)


def test_barnes_self_dual():
    P = barnes()
    D = hermitian_dual(P)
    assert same_module(P, D)
    assert trace_dual_check(P, 1)


def test_conjugate_swaps_alpha():
    P = barnes()
    C = galois_conjugate(P)
    assert all(C.hgram[i][j] == P.hgram[i][j].conj() for i in range(3) for j in range(3))


def test_barnes_automorphisms():
    order, gens = hermitian_automorphisms(barnes())
    assert order == 336
    L = trace_lattice(barnes(), 1)
    F = np.array(la.to_int_rows(L.gram))
    for g in gens:
        assert np.array_equal(g @ F @ g.T, F)


def test_automorphisms_rank_limit():
    P = hermitian_tensor(barnes(), barnes())
    with pytest.raises(RankTooLarge):
        hermitian_automorphisms(P)


def test_tensor_determinant():
    T = hermitian_tensor(barnes(), barnes())
    assert T.rank == 9
    # det of L(P, 1) is 7^rank * N(det h) with N(det h) = 1 here
    assert trace_lattice(T, 1).det == 7 ** 9


def test_e8_structure_round_trip(e8):
    sp = find_structure(e8, seed=0)
    assert validate_structure(sp)
    P = hermitian_from_structure(e8, sp, S_GAMMA)
    assert P.rank == 4
    g = [list(r) for r in P.zbasis]
    A = [list(r) for r in sp.A]
    X = []
    for r in g:
        X.append(r)
        X.append([sum(r[k] * A[k][j] for k in range(8)) for j in range(8)])
    assert trace_lattice(P, S_GAMMA).gram == e8.transform(X).gram


def test_structure_of_barnes_tensor_leech_like():
    sp = structure_of(barnes(), 1)
    assert validate_structure(sp)


def test_validate_rejects_bad_pairs(e8):
    sp = find_structure(e8, seed=1)
    A = [list(r) for r in sp.A]
    A[0][0] += 1
    assert not validate_structure(StructurePair(sp.F, A))


def test_structure_file(e8, tmp_path):
    sp = find_structure(e8, seed=2)
    text = format_structure(sp)
    assert text.count("STRUCTURE") == 1
    assert parse_structure(text).A == sp.A
    bad = text.replace("STRUCTURE", "STRUCTUR")
    with pytest.raises(LatticeError):
        parse_structure(bad)
    lines = text.splitlines()
    k = lines.index("STRUCTURE") + 1
    row = lines[k + 1].split()
    row[0] = str(int(row[0]) + 2)
    lines[k + 1] = " ".join(row)
    with pytest.raises(LatticeError):
        parse_structure("\n".join(lines) + "\n")


def test_leech_structure(leech_sp):
    L = leech_sp.lattice()
    assert is_even(L) and is_unimodular(L)
    assert abs(la.int_det(leech_sp.A)) == 2 ** 12
    P = hermitian_from_structure(L, leech_sp, S_GAMMA)
    assert P.rank == 12 and P.is_integral


def test_galois_isometry_e8(e8):
    sp = find_structure(e8, seed=0)
    Y = find_galois_isometry(e8, sp)
    X = build_galois_block(sp, Y)
    assert X.shape == (24, 24)
    with pytest.raises(InvalidWitness):
        build_galois_block(sp, np.eye(8, dtype=np.int64))


def test_hermitian_form_recovery():
    # h(x, y) from tr h(x, y) and tr h(alpha x, y)
    P = barnes()
    h = P.hgram[0][1]
    tr = h.trace(), (ALPHA * h).trace()
    a, b = Fraction(tr[0]), Fraction(tr[1])
    assert ZAlpha((3 * a + b) / 7, (a - 2 * b) / 7) == h


def test_galois_isometry_leech_data(leech_sp):
    L = leech_sp.lattice()
    Y = find_galois_isometry(L, leech_sp)
    assert np.array_equal(Y, shipped_galois_isometry(leech_sp))
    assert np.array_equal(Y @ np.array(leech_sp.F) @ Y.T, np.array(leech_sp.F))
    X = build_galois_block(leech_sp, Y)
    assert X.shape == (72, 72)
    bad = Y.copy()
    bad[[0, 1]] = bad[[1, 0]]
    with pytest.raises(InvalidWitness):
        build_galois_block(leech_sp, bad)


def test_galois_data_rejects_other_structure():
    other = catalog.load_leech_structure(catalog.data_path("leech_structure_b6_40320.txt"))
    assert shipped_galois_isometry(other) is None
