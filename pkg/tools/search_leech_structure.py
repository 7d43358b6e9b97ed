"""Random walk over Z[alpha]-structures on 24-dimensional even unimodular
lattices via A-compatible Kneser 2-neighbours.

Every lattice without roots that the walk meets is the Leech lattice; for
each such structure the number b6 of norm-6 vectors of the 72-dimensional
lattice L(M, N, 3) is computed with the fast census.  Structures with
b6 = 0 are written out in the structure file format.

usage: python tools/search_leech_structure.py OUT.txt [--seed S] [--steps N] [--collect DIR]

Moves are chosen to kill roots: x is a random solution of the F2 system
(r, xA) odd over a random maximal consistent set of roots r.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

import numpy as np

from gamma72 import _linalg as la
from gamma72.catalog import build_e8
from gamma72.census import fast_b6
from gamma72.enumeration import short_vectors
from gamma72.hermitian import StructurePair, find_structure, validate_structure, write_structure
from gamma72.lattice import IntegerLattice
from gamma72._kernels import lll_gram


def block_diag(*ms):
    n = sum(len(m) for m in ms)
    out = np.zeros((n, n), dtype=np.int64)
    k = 0
    for m in ms:
        m = np.asarray(m, dtype=np.int64)
        out[k:k + len(m), k:k + len(m)] = m
        k += len(m)
    return out


def root_vectors(F):
    rep = short_vectors(IntegerLattice(F.tolist()), 2)
    return rep.vectors


def killing_vector(F, A, roots, rng):
    """Random x mod 2 with (r, xA) odd for a random maximal consistent set of
    roots r; such roots do not survive in the neighbour."""
    n = len(F)
    # (r, xA) = x (A F r^T), so each root gives the linear form A F r^T mod 2
    forms = (roots @ F @ A.T) % 2
    order = list(range(len(roots)))
    rng.shuffle(order)
    pivots = {}  # pivot bit -> (mask, rhs)
    for i in order:
        m = int(sum(1 << j for j in range(n) if forms[i, j]))
        rhs = 1
        for bit in sorted(pivots, reverse=True):
            if m >> bit & 1:
                pm, pr = pivots[bit]
                m ^= pm
                rhs ^= pr
        if m == 0:
            continue  # dependent on earlier roots
        pivots[m.bit_length() - 1] = (m, rhs)
    for _ in range(1000):
        x = 0
        for j in range(n):
            if j not in pivots and rng.random() < 0.5:
                x |= 1 << j
        for bit in sorted(pivots):
            m, rhs = pivots[bit]
            if bin(x & m & ~(1 << bit)).count("1") % 2 != rhs:
                x |= 1 << bit
        xv = np.array([(x >> j) & 1 for j in range(n)], dtype=np.int64)
        if (xv @ F @ xv) % 4 == 0 and np.any((xv @ A) % 2):
            return xv
    return None


def neighbour(F, A, rng, x=None):
    n = len(F)
    while x is None:
        x = np.array([rng.randint(0, 1) for _ in range(n)], dtype=np.int64)
        if (x @ F @ x) % 4 != 0 or np.all((x @ A) % 2 == 0):
            x = None
    w = x @ A
    par = (F @ w) % 2           # (e_i, w) mod 2
    odd = np.flatnonzero(par)
    j0 = odd[0]
    gens = []
    for i in range(n):
        e = np.zeros(n, dtype=np.int64)
        e[i] = 1
        if par[i]:
            e[j0] += 1  # e_i + e_j0, or 2 e_j0 when i = j0
        gens.append(2 * e)
    gens.append(w)
    basis2 = np.array(la.hnf([g.tolist() for g in gens], modulus=4), dtype=object)
    assert basis2.shape == (n, n)
    Bq = basis2  # 2 * new basis, in old coordinates
    Fo = la.int_array(F.tolist())
    F2 = Bq.dot(Fo).dot(Bq.T)
    assert all(x % 4 == 0 for x in F2.flat)
    Fn = np.array((F2 // 4).tolist(), dtype=np.int64)
    Ao = la.int_array(A.tolist())
    An = la.matmul(la.matmul(Bq.tolist(), Ao.tolist()), la.rational_inverse(Bq.tolist()))
    An = np.array(la.to_int_rows(An), dtype=np.int64)
    red, T = lll_gram(Fn, 0.99)
    Tinv = np.rint(np.linalg.inv(T.astype(float))).astype(np.int64)
    assert np.array_equal(Tinv @ T, np.eye(n, dtype=np.int64))
    return red, T @ An @ Tinv


def roots(F):
    return short_vectors(IntegerLattice(F.tolist()), 2, collect=False).count(2)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("out")
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--steps", type=int, default=20000)
    ap.add_argument("--tries", type=int, default=6)
    ap.add_argument("--collect", help="directory for one structure per b6 value met on the way")
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    e8 = build_e8()
    sp8 = find_structure(e8, seed=args.seed)
    F = block_diag(sp8.F, sp8.F, sp8.F)
    A = block_diag(sp8.A, sp8.A, sp8.A)
    r = roots(F)
    seen = {}
    t0 = time.time()
    for step in range(args.steps):
        cands = []
        R = root_vectors(F) if r else None
        for _ in range(args.tries):
            x = killing_vector(F, A, R, rng) if r else None
            Fn, An = neighbour(F, A, rng, x)
            cands.append((roots(Fn), rng.random(), Fn, An))
        cands.sort(key=lambda c: (c[0], c[1]))
        # mostly greedy, sometimes a random move to escape local minima
        pick = cands[0] if rng.random() < 0.8 else rng.choice(cands)
        r, _, F, A = pick
        if r == 0:
            sp = StructurePair(F.tolist(), A.tolist())
            assert validate_structure(sp)
            b6 = fast_b6(sp)
            seen[b6] = seen.get(b6, 0) + 1
            print(f"[{time.time() - t0:7.0f}s] step {step}: Leech structure, b6 = {b6}  seen={seen}",
                  flush=True)
            if args.collect:
                Path(args.collect).mkdir(parents=True, exist_ok=True)
                dest = Path(args.collect) / f"leech_b6_{b6}.txt"
                if not dest.exists():
                    write_structure(sp, dest)
            if b6 == 0:
                write_structure(sp, args.out)
                print("found b6 = 0 structure ->", args.out)
                return 0
            # jump away so the walk does not keep revisiting the same class
            for _ in range(3):
                F, A = neighbour(F, A, rng)
        elif step % 50 == 0:
            print(f"[{time.time() - t0:7.0f}s] step {step}: roots {r}", flush=True)
    return 1


if __name__ == "__main__":
    sys.exit(main())
