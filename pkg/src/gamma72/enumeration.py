"""Short vectors, coset (CVP-style) enumeration and minima.

All counts are exact: the float Cholesky data only guides the search
(with the radius inflated by a relative 1e-9), and every candidate is
accepted or rejected by an exact integer norm computation.

Convention for ``short_vectors``: the enumeration visits one vector of each
pair {v, -v} (the one whose last nonzero reduced coordinate is positive),
``vectors`` holds those representatives and ``count_by_norm`` counts both
signs.  ``coset_short_vectors`` lists every vector of the coset.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, lcm
from typing import Sequence

import numpy as np

from . import _kernels as K
from .lattice import IntegerLattice, LatticeError

RADIUS_EPS = 1e-9
UNLIMITED = 1 << 62


class BudgetExceeded(RuntimeError):
    """Node budget exhausted; ``report`` holds the partial result."""

    def __init__(self, report: "ShortVectorReport"):
        super().__init__(f"node budget exhausted after {report.nodes} nodes")
        self.report = report


@dataclass
class EnumerationState:
    x: np.ndarray
    dx: np.ndarray
    ddx: np.ndarray
    c: np.ndarray
    rho: np.ndarray
    k: np.ndarray
    hist: np.ndarray
    chunks: list = field(default_factory=list)
    nodes: int = 0
    started: bool = False

    @classmethod
    def fresh(cls, n: int, hist_size: int) -> "EnumerationState":
        return cls(np.zeros(n, np.int64), np.zeros(n, np.int64), np.zeros(n, np.int64),
                   np.zeros(n), np.zeros(n + 1), np.zeros(1, np.int64),
                   np.zeros(hist_size, np.int64))

    def save(self, path) -> None:
        vecs = np.concatenate(self.chunks) if self.chunks else np.zeros((0, len(self.x)), np.int64)
        np.savez(path, x=self.x, dx=self.dx, ddx=self.ddx, c=self.c, rho=self.rho, k=self.k,
                 hist=self.hist, vecs=vecs, nodes=np.array([self.nodes]),
                 started=np.array([self.started]))

    @classmethod
    def load(cls, path) -> "EnumerationState":
        z = np.load(path)
        st = cls(z["x"], z["dx"], z["ddx"], z["c"], z["rho"], z["k"], z["hist"])
        if len(z["vecs"]):
            st.chunks = [z["vecs"]]
        st.nodes = int(z["nodes"][0])
        st.started = bool(z["started"][0])
        return st


@dataclass
class ShortVectorReport:
    bound: Fraction
    count_by_norm: dict[Fraction, int]
    vectors: np.ndarray | None
    complete: bool
    shift: tuple[Fraction, ...] | None = None
    nodes: int = 0
    state: EnumerationState | None = None

    @property
    def total(self) -> int:
        return sum(self.count_by_norm.values())

    def count(self, norm) -> int:
        return self.count_by_norm.get(Fraction(norm), 0)

    def points(self) -> list[tuple[Fraction, ...]]:
        """Coset vectors as exact coordinates (shift + integral part)."""
        if self.vectors is None:
            raise ValueError("report was produced in count-only mode")
        if self.shift is None:
            return [tuple(Fraction(int(a)) for a in row) for row in self.vectors]
        return [tuple(s + int(a) for s, a in zip(self.shift, row)) for row in self.vectors]

    def numerators(self) -> tuple[np.ndarray, int]:
        """(den * vectors as int64 rows, den) for coset reports."""
        if self.vectors is None:
            raise ValueError("report was produced in count-only mode")
        if self.shift is None:
            return self.vectors, 1
        den = lcm(*(s.denominator for s in self.shift))
        t = np.array([int(s * den) for s in self.shift], dtype=np.int64)
        return t[None, :] + den * self.vectors, den


@dataclass
class Prepared:
    gram: np.ndarray      # integral scaled Gram of the input basis
    scale: int            # gram = scale * exact Gram
    T: np.ndarray         # reduced basis = T @ input basis
    Tinv: np.ndarray
    reduced: np.ndarray
    D: np.ndarray
    U: np.ndarray


def _int_gram(L: IntegerLattice) -> tuple[np.ndarray, int]:
    ints, d = L._scaled
    g = np.array(ints, dtype=np.int64)
    if np.abs(g).max() > 1 << 40:
        raise LatticeError("Gram entries too large for the int64 enumeration kernel")
    return g, d


def reduce_basis(L: IntegerLattice, quality: float = 0.99) -> tuple[IntegerLattice, np.ndarray]:
    """LLL-reduce L.  Returns (reduced lattice, T) with reduced = T * basis."""
    g, d = _int_gram(L)
    red, T = K.lll_gram(g, quality)
    _check_unimodular(T)
    if not np.array_equal(T @ g @ T.T, red):
        raise LatticeError("LLL transform failed exact verification")
    out = L.transform(T.tolist(), label=L.label)
    return out, T


def _check_unimodular(T: np.ndarray) -> None:
    from ._linalg import int_det
    if abs(int_det(T.tolist())) != 1:
        raise LatticeError("LLL transform is not unimodular")


def prepare(L: IntegerLattice, quality: float = 0.99) -> Prepared:
    cached = L.__dict__.get("_prepared")
    if cached is not None:
        return cached
    g, d = _int_gram(L)
    red, T = K.lll_gram(g, quality)
    if not np.array_equal(T @ g @ T.T, red):
        raise LatticeError("LLL transform failed exact verification")
    Tinv_f = np.linalg.inv(T.astype(float))
    Tinv = np.rint(Tinv_f).astype(np.int64)
    if not np.array_equal(Tinv @ T, np.eye(len(T), dtype=np.int64)):
        raise LatticeError("LLL transform is not unimodular")
    R = np.linalg.cholesky(red.astype(float)).T
    D = np.diag(R) ** 2
    U = R / np.diag(R)[:, None]
    prep = Prepared(g, d, T, Tinv, red, D, U)
    object.__setattr__(L, "_prepared", prep)
    return prep


def _run(prep: Prepared, t_red: Sequence[Fraction] | None, bound: Fraction, *,
         symmetric: bool, collect: bool, budget: int | None,
         state: EnumerationState | None) -> tuple[EnumerationState, int]:
    n = len(prep.reduced)
    if t_red is None:
        tden = 1
        tnum = np.zeros(n, np.int64)
    else:
        tden = lcm(*(Fraction(x).denominator for x in t_red))
        tnum = np.array([int(Fraction(x) * tden) for x in t_red], dtype=np.int64)
    t = tnum / tden
    scaled = bound * prep.scale * tden * tden
    bound_scaled = floor(scaled)
    R = float(bound * prep.scale) * (1 + RADIUS_EPS) + RADIUS_EPS
    if state is None:
        state = EnumerationState.fresh(n, bound_scaled + 1)
    cap = 4096 if collect else 0
    out = np.empty((cap, n), dtype=np.int64)
    remaining = UNLIMITED if budget is None else budget
    status = K.ENUM_BUDGET
    while True:
        status, n_out, nodes = K.enumerate_kernel(
            prep.reduced, prep.D, prep.U, t, tnum, np.int64(tden), np.int64(bound_scaled), R,
            symmetric, collect, out, 0, remaining, state.x, state.dx, state.ddx, state.c,
            state.rho, state.k, state.hist, not state.started)
        state.started = True
        state.nodes += nodes
        remaining -= nodes
        if n_out:
            state.chunks.append(out[:n_out].copy())
        if status == K.ENUM_FULL:
            if len(out) < 1 << 20:
                out = np.empty((2 * len(out), n), dtype=np.int64)
            continue
        return state, status


def _finish(prep: Prepared, state: EnumerationState, status: int, bound: Fraction,
            collect: bool, mult: int, tden: int) -> ShortVectorReport:
    counts: dict[Fraction, int] = {}
    denom = prep.scale * tden * tden
    for v, c in enumerate(state.hist):
        if c:
            counts[Fraction(v, denom)] = int(c) * mult
    vectors = None
    if collect:
        vectors = _sorted_chunks(state, len(prep.reduced)) @ prep.T
    return ShortVectorReport(bound, dict(sorted(counts.items())), vectors,
                             status == K.ENUM_DONE, None, state.nodes,
                             None if status == K.ENUM_DONE else state)


def _sorted_chunks(state: EnumerationState, n: int) -> np.ndarray:
    red = np.concatenate(state.chunks) if state.chunks else np.zeros((0, n), np.int64)
    if len(red):
        red = red[np.lexsort(red.T[::-1])]
    return red


def short_vectors(L: IntegerLattice, bound, *, budget: int | None = None, collect: bool = True,
                  resume: EnumerationState | None = None) -> ShortVectorReport:
    """All nonzero v in L with (v,v) <= bound."""
    bound = Fraction(bound)
    if bound < 0:
        raise ValueError("bound must be non-negative")
    prep = prepare(L)
    state, status = _run(prep, None, bound, symmetric=True, collect=collect,
                         budget=budget, state=resume)
    rep = _finish(prep, state, status, bound, collect, 2, 1)
    if not rep.complete:
        raise BudgetExceeded(rep)
    return rep


def coset_short_vectors(L: IntegerLattice, t: Sequence, bound, *, budget: int | None = None,
                        collect: bool = True,
                        resume: EnumerationState | None = None) -> ShortVectorReport:
    """All v in t + L with (v,v) <= bound; t is given in L's basis coordinates.

    ``vectors`` rows are the integral parts x with v = shift + x, where
    ``shift`` is t reduced to [0,1) coordinatewise.
    """
    bound = Fraction(bound)
    if bound < 0:
        raise ValueError("bound must be non-negative")
    prep = prepare(L)
    t = [Fraction(x) for x in t]
    if len(t) != L.rank:
        raise ValueError("shift has the wrong length")
    shift = tuple(x - floor(x) for x in t)
    # shift expressed in reduced coordinates: t' = shift T^-1.
    Tinv = prep.Tinv
    n = L.rank
    t_red = [sum((shift[i] * int(Tinv[i, j]) for i in range(n) if shift[i]), Fraction(0))
             for j in range(n)]
    t_red_frac = [x - floor(x) for x in t_red]
    z = np.array([int(floor(x)) for x in t_red], dtype=np.int64)
    state, status = _run(prep, t_red_frac, bound, symmetric=False, collect=collect,
                         budget=budget, state=resume)
    tden = lcm(*(x.denominator for x in t_red_frac)) if t_red_frac else 1
    rep = _finish(prep, state, status, bound, False, 1, tden)
    if collect:
        # reduced vector = t'_frac + x' = shift T^-1 - z + x'; original = shift + (x' - z) T.
        rep.vectors = (_sorted_chunks(state, n) - z) @ prep.T
    rep.shift = shift
    if not rep.complete:
        raise BudgetExceeded(rep)
    return rep


def minimum(L: IntegerLattice) -> Fraction:
    """Exact minimum, certified by an empty enumeration strictly below the
    first reduced basis vector's norm (or by the shorter vectors found)."""
    prep = prepare(L)
    b0 = Fraction(int(prep.reduced[0, 0]), prep.scale)
    below = b0 - Fraction(1, prep.scale)
    if below < 0:
        return b0
    rep = short_vectors(L, below, collect=False)
    if rep.count_by_norm:
        return min(rep.count_by_norm)
    return b0


def kissing_number(L: IntegerLattice) -> tuple[Fraction, int]:
    m = minimum(L)
    return m, short_vectors(L, m, collect=False).count(m)
