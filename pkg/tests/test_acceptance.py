"""Acceptance criteria 1 to 11, one test each.

Each test prints a single line ``criterion N: PASS|FAIL  detail``; the
lines are repeated in the terminal summary.
"""

from __future__ import annotations

import random
import time
from fractions import Fraction

from conftest import random_gram, random_shift
from oracle import box_size, brute_coset, brute_short

from gamma72 import catalog
from gamma72.census import (DESIGN_TABLE, N_CLASSES, _norm8_of, check_24A1, cross_check, design_counts,
                            leech_class_counts, norm6_census, norm8_assembly, w2_set, w3_set)
from gamma72.decomposition import verify_decomposition
from gamma72.enumeration import coset_short_vectors, minimum, short_vectors
from gamma72.hermitian import (barnes, find_structure, hermitian_automorphisms, hermitian_dual, same_module,
                               trace_lattice, validate_structure)
from gamma72.lattice import is_even, is_unimodular
from gamma72.polarization import construction_I, polarization_from_structure


def test_criterion_01_closed_form(criterion):
    t = time.perf_counter()
    rep = norm8_assembly(0)
    dt = time.perf_counter() - t
    want = {(8, 0, 0): 589680, (4, 4, 0): 28304640, (3, 3, 2): 4830658560, (4, 2, 2): 1358622720}
    ok = rep.type_counts == want and rep.kissing == 6218175600 and dt < 1
    criterion(1, ok, f"type counts {list(rep.type_counts.values())} sum {rep.kissing} in {dt:.4f}s")


def test_criterion_02_design_table(criterion, leech_pol, table):
    solved = design_counts()
    X = _norm8_of(leech_pol, "M")
    idx = random.Random(2).sample(range(N_CLASSES), 32)
    direct = [design_counts(True, leech_pol, table.representatives[i], X) for i in idx]
    ok = solved == DESIGN_TABLE and all(d == solved for d in direct)
    criterion(2, ok, f"moment solution {solved}; direct path agrees on {sum(d == solved for d in direct)}/32 w")


def test_criterion_03_leech(criterion):
    L = catalog.build_leech()
    n4 = short_vectors(L, 4, collect=False).count(4)
    c = leech_class_counts(L)
    rest = Fraction(2 ** 24 - 1) - Fraction(c["norm4"], 2) - Fraction(c["norm6"], 2)
    n8 = 48 * rest
    ok = (is_even(L) and is_unimodular(L) and minimum(L) == 4 and n4 == 196560
          and n8.denominator == 1 and n8 % 48 == 0)
    criterion(3, ok, f"even unimodular min 4, |L4| = {n4}, |L6| = {c['norm6']}, |L8| = {n8}")


def test_criterion_04_w_sets(criterion, leech_pol, table):
    idx = random.Random(4).sample(range(N_CLASSES), 32)
    good = 0
    for i in idx:
        w = table.representatives[i]
        W2 = w2_set(leech_pol, w)
        check_24A1(leech_pol, w, W2)
        if len(W2) == 48 and len(w3_set(leech_pol, w)) == 4096:
            good += 1
    criterion(4, good == 32, f"|W2| = 48 with 24A1 and |W3| = 4096 on {good}/32 sampled classes")


def test_criterion_05_class_table(criterion, table):
    ok = len(table) == 4095 and table.frames.shape[1] == 48
    criterion(5, ok, f"{len(table)} classes, each an orthogonal frame of {table.frames.shape[1]} norm-8 vectors")


def test_criterion_06_gamma(criterion, leech_sp):
    t = time.perf_counter()
    gb = catalog.build_gamma(full=True)
    dt = time.perf_counter() - t
    G, C = gb.tensor, gb.construction
    ok = (validate_structure(leech_sp) and G.rank == C.rank == 72 and G.det == C.det == 1
          and is_even(G) and is_unimodular(G) and is_even(C) and is_unimodular(C))
    criterion(6, ok, f"tensor and Construction I routes: dim 72, det {G.det} = {C.det}, even unimodular, "
                     f"{dt:.1f}s")


def test_criterion_07_barnes(criterion):
    P = barnes()
    order, _ = hermitian_automorphisms(P)
    det = trace_lattice(P, 1).det
    selfdual = same_module(P, hermitian_dual(P))
    ok = order == 336 and det == 343 and selfdual
    criterion(7, ok, f"|Aut| = {order}, det L(P_b, 1) = {det}, P_b = P_b* {selfdual}")


def test_criterion_08_e8_analogue(criterion, e8):
    mins = []
    for _ in range(2):
        sp = find_structure(e8, seed=0)
        C = construction_I(polarization_from_structure(e8, sp), 3)
        assert C.rank == 24 and is_even(C) and is_unimodular(C)
        mins.append(minimum(C))
    criterion(8, mins[0] == mins[1], f"L(M,N,3) from E8 is 24-dim even unimodular, minimum {mins[0]} "
                                     f"in both runs")


def test_criterion_09_decomposition(criterion, bundle):
    recs = verify_decomposition(bundle, sample=64, seed=9)
    ok = (bundle.index_K == bundle.index_I == 2 ** 24
          and bundle.minima == {"I1": 2, "I2": 4, "K1": 8, "K2": 8}
          and len(recs) == 64 and all(r.passed for r in recs))
    minima = " ".join(f"{k}={v}" for k, v in sorted(bundle.minima.items()))
    criterion(9, ok, f"indices 2^24, minima {minima}, "
                     f"I(w) clean for {sum(r.passed for r in recs)}/{len(recs)} lifted w")


def test_criterion_10_census(criterion, leech_pol, census_data):
    sample = norm6_census(leech_pol, 32, seed=10, data=census_data)
    full = norm6_census(leech_pol, data=census_data)
    pairs = cross_check(census_data, 1000, seed=10)
    ok = (sample.b6 == 0 and full.complete and full.b6 == 0
          and full.enumerated_422 == full.type_counts[(4, 2, 2)])
    criterion(10, ok, f"32-class slice b6 = {sample.b6}; full census over {full.classes_done} classes "
                      f"b6 = {full.b6}, enumerated (4,2,2) = {full.enumerated_422}; "
                      f"fast path matches coset enumeration on {pairs} pairs")


def test_criterion_11_oracle(criterion):
    rng = random.Random(11)
    done = agree = 0
    while done < 120:
        n = rng.randint(4, 8)
        L = random_gram(rng, n)
        b = Fraction(max(L.gram[i][i] for i in range(n)))
        t = random_shift(rng, n)
        while box_size(L, b, t) > 300_000 or box_size(L, b) > 300_000:
            b -= 1
        done += 1
        rep = short_vectors(L, b)
        got = {tuple(int(x) for x in v) for v in rep.vectors}
        got |= {tuple(-x for x in v) for v in got}
        same = got == brute_short(L, b) and sum(rep.count_by_norm.values()) == len(got)
        same &= set(coset_short_vectors(L, t, b).points()) == brute_coset(L, t, b)
        agree += same
    criterion(11, agree == done, f"short and coset enumeration match the box oracle on {agree}/{done} "
                                 f"random lattices of dimension 4-8")
