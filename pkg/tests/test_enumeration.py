from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from conftest import random_gram, random_shift
from oracle import brute_coset, brute_short

from gamma72.enumeration import (BudgetExceeded, coset_short_vectors, kissing_number, minimum, prepare,
                                 short_vectors)
from gamma72.lattice import IntegerLattice


def test_e8_theta(e8):
    rep = short_vectors(e8, 8, collect=False)
    assert rep.count_by_norm == {2: 240, 4: 2160, 6: 6720, 8: 17520}
    assert kissing_number(e8) == (2, 240)


def test_leech_self_check(leech):
    assert minimum(leech) == 4
    rep = short_vectors(leech, 4, collect=False)
    assert rep.count(2) == 0 and rep.count(4) == 196560


def test_reduction_is_unimodular(e8):
    prep = prepare(e8)
    assert abs(round(np.linalg.det(prep.T.astype(float)))) == 1
    assert np.array_equal(prep.T @ prep.Tinv, np.eye(8, dtype=np.int64))


def test_representatives_one_per_sign(e8):
    rep = short_vectors(e8, 2)
    vs = {tuple(v) for v in rep.vectors}
    assert len(vs) == 120
    assert not any(tuple(-np.array(v)) in vs for v in vs)


def test_coset_symmetry(e8):
    rng = random.Random(5)
    for _ in range(5):
        t = random_shift(rng, 8)
        a = coset_short_vectors(e8, t, 4, collect=False).count_by_norm
        b = coset_short_vectors(e8, [-x for x in t], 4, collect=False).count_by_norm
        assert a == b


def test_deep_hole_of_e8(e8):
    # the half-integral class of a norm-4 vector holds 16 vectors of norm 1
    v = short_vectors(e8, 4).vectors
    x = next(r for r in v if e8.norm(r) == 4)
    rep = coset_short_vectors(e8, [Fraction(int(a), 2) for a in x], 1)
    assert rep.count(1) == 16


def test_budget_and_resume(e8):
    with pytest.raises(BudgetExceeded) as e:
        short_vectors(e8, 8, budget=50, collect=False)
    st = e.value.report.state
    full = short_vectors(e8, 8, collect=False, resume=st)
    assert full.total == 26640


def test_state_file_round_trip(e8, tmp_path):
    from gamma72.enumeration import EnumerationState
    with pytest.raises(BudgetExceeded) as e:
        short_vectors(e8, 6, budget=40)
    p = tmp_path / "st.npz"
    e.value.report.state.save(p)
    rep = short_vectors(e8, 6, resume=EnumerationState.load(p))
    assert rep.total == 9120 and len(rep.vectors) == 4560


def test_rational_gram():
    L = IntegerLattice([[Fraction(1, 2), 0], [0, Fraction(3, 2)]])
    assert short_vectors(L, 2, collect=False).count_by_norm == {Fraction(1, 2): 2, Fraction(3, 2): 2,
                                                                 Fraction(2): 6}


@pytest.mark.parametrize("seed", range(10))
def test_matches_oracle(seed):
    rng = random.Random(seed)
    L = random_gram(rng, rng.randint(4, 6))
    b = Fraction(max(L.gram[i][i] for i in range(L.rank)))
    exp = brute_short(L, b)
    rep = short_vectors(L, b)
    got = {tuple(int(x) for x in v) for v in rep.vectors}
    got |= {tuple(-x for x in v) for v in got}
    assert got == exp
    t = random_shift(rng, L.rank)
    assert set(coset_short_vectors(L, t, b).points()) == brute_coset(L, t, b)
