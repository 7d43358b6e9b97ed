from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from gamma72.decomposition import (BlockSplit, StructureMismatch, check_Iw, dual_relation, in_gamma,
                                   lift_minimal, same_mod_K2, sample_minimal, split, verify_decomposition)
from gamma72.enumeration import coset_short_vectors, short_vectors
from gamma72.hermitian import find_structure
from gamma72.lattice import IntegerLattice
from gamma72.polarization import construction_I, polarization_from_structure


@pytest.fixture(scope="module")
def leech24(e8):
    pol = polarization_from_structure(e8, find_structure(e8, seed=0))
    return construction_I(pol, 3)


@pytest.fixture(scope="module")
def small_bundle(leech24):
    return split(leech24, 8, method="direct")


def test_block_count_matches_enumeration(leech24):
    bs = BlockSplit(leech24, 8)
    assert bs.count(4) == short_vectors(leech24, 4, collect=False).count_by_norm
    assert bs.minimum() == 4


def test_block_coset_count(leech24):
    bs = BlockSplit(leech24, 16)
    rng = random.Random(1)
    for _ in range(2):
        t = [Fraction(rng.randrange(2), 2) for _ in range(24)]
        shift = [sum((t[i] * leech24.basis[i][j] for i in range(24)), Fraction(0)) for j in range(24)]
        exp = coset_short_vectors(leech24, t, 4, collect=False).count_by_norm
        exp.pop(Fraction(0), None)
        assert bs.count(4, shift=shift) == exp


def test_block_split_needs_orthogonal_blocks():
    L = IntegerLattice.from_basis([[1, 0], [0, 1]], [[2, 1], [1, 2]])
    with pytest.raises(StructureMismatch):
        BlockSplit(L, 1)


def test_small_split(leech24, small_bundle):
    b = small_bundle
    assert b.K1.rank == 8 and b.K2.rank == 16
    assert b.index_K == b.index_I
    assert b.index_K ** 2 == b.K1.det * b.K2.det
    assert dual_relation(b.K1, b.I1) and dual_relation(b.K2, b.I2)
    fast = split(leech24, 8)
    assert fast.minima == b.minima


def test_small_lifts_and_Iw(small_bundle):
    b = small_bundle
    for v in sample_minimal(b, 4, seed=0):
        w = lift_minimal(b, v)
        assert in_gamma(b, list(v) + list(w))
        assert same_mod_K2(b, w, lift_minimal(b, v, seed=3, reduce=False))
        r1 = check_Iw(b, w)
        r2 = check_Iw(b, w, method="direct")
        assert (r1.passed, r1.norm4) == (r2.passed, r2.norm4)


def test_lift_rejects_non_minimal(small_bundle):
    v = np.zeros(8, dtype=np.int64)
    with pytest.raises(ValueError):
        lift_minimal(small_bundle, v)


def test_gamma_split(bundle):
    assert bundle.index_K == bundle.index_I == 2 ** 24
    assert bundle.minima == {"I1": 2, "K1": 8, "I2": 4, "K2": 8}
    assert dual_relation(bundle.K1, bundle.I1) and dual_relation(bundle.K2, bundle.I2)


def test_gamma_Iw(bundle):
    assert check_Iw(bundle, np.zeros(48, dtype=np.int64)).passed
    for v in sample_minimal(bundle, 2, seed=11):
        w = lift_minimal(bundle, v)
        assert same_mod_K2(bundle, w, lift_minimal(bundle, v, seed=5, reduce=False))
        r = check_Iw(bundle, w)
        assert r.passed and r.norm4 == 0


def test_verify_checkpoints(bundle, tmp_path):
    recs = verify_decomposition(bundle, sample=2, seed=1, checkpoint=tmp_path)
    assert len(recs) == 2 and all(r.passed for r in recs)
    again = verify_decomposition(bundle, sample=2, seed=1, checkpoint=tmp_path)
    assert [r.line() for r in again] == [r.line() for r in recs]
