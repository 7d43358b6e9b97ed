"""The orthogonal 24 + 48 decomposition of Gamma.

Gamma is given with a basis in L^3 (coordinates w.r.t. a basis of L in
each block) and ambient Gram (1/2) diag(F, F, F).  pi projects onto the
first block.  K1 = Gamma in the first block, K2 = Gamma in the last two,
I1 = pi(Gamma), I2 = (1 - pi)(Gamma), so that K1 + K2 <= Gamma <= I1 + I2.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _linalg as la
from .enumeration import coset_short_vectors, minimum, prepare, short_vectors
from .lattice import IntegerLattice, LatticeError, dual


class StructureMismatch(LatticeError):
    pass


class NoLift(LatticeError):
    pass


def _int_basis(X: IntegerLattice) -> np.ndarray:
    if X.basis is None or any(x.denominator != 1 for r in X.basis for x in r):
        raise StructureMismatch("lattice needs an integral basis in L^k coordinates")
    return np.array([[int(x) for x in r] for r in X.basis], dtype=object)


def _sub_ambient(amb, lo: int, hi: int):
    return [list(r[lo:hi]) for r in amb[lo:hi]]


def _from_rows(rows, amb, label) -> IntegerLattice:
    B = np.array(rows, dtype=object)
    ints, d = la.scaled_integer(amb)
    G = B.dot(ints).dot(B.T)
    gram = [[Fraction(int(x), d) for x in r] for r in G]
    return IntegerLattice(gram, basis=[list(map(int, r)) for r in rows], ambient_gram=amb,
                          label=label, _check=False)._validated()


@dataclass
class DecompositionBundle:
    gamma: IntegerLattice
    K1: IntegerLattice
    K2: IntegerLattice
    I1: IntegerLattice
    I2: IntegerLattice
    index_K: int
    index_I: int
    n1: int
    minima: dict[str, Fraction] = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"index_gamma_over_K1_K2: {self.index_K}", f"index_I1_I2_over_gamma: {self.index_I}"]
        out += [f"min_{k}: {v}" for k, v in sorted(self.minima.items())]
        return out


def split(gamma: IntegerLattice, n1: int = 24, *, minima: bool = True,
          method: str = "blocks") -> DecompositionBundle:
    """Split Gamma along the first ``n1`` ambient coordinates.

    Minima of the 48-dimensional parts go through their inner 24 + 24
    block structure (``method="blocks"``) or direct enumeration.
    """
    if gamma.ambient_gram is None or gamma.basis is None:
        raise StructureMismatch("Gamma must carry an ambient basis")
    B = _int_basis(gamma)
    n = B.shape[1]
    amb = gamma.ambient_gram
    if any(amb[i][j] != 0 for i in range(n1) for j in range(n1, n)):
        raise StructureMismatch("ambient Gram is not block diagonal at the split")
    first = B[:, :n1]
    rest = B[:, n1:]
    # K2: combinations with vanishing first block; K1: vanishing rest
    c2 = la.left_kernel(first.tolist())
    c1 = la.left_kernel(rest.tolist())
    K1_rows = [r[:n1] for r in la.hnf((np.array(c1, dtype=object).dot(B)).tolist())]
    K2_rows = [r[n1:] for r in la.hnf((np.array(c2, dtype=object).dot(B)).tolist())]
    I1_rows = la.hnf(first.tolist())
    I2_rows = la.hnf(rest.tolist())
    a1, a2 = _sub_ambient(amb, 0, n1), _sub_ambient(amb, n1, n)
    K1 = _from_rows(K1_rows, a1, "K1")
    K2 = _from_rows(K2_rows, a2, "K2")
    I1 = _from_rows(I1_rows, a1, "I1")
    I2 = _from_rows(I2_rows, a2, "I2")
    idx_K = _index(K1.det * K2.det, gamma.det)
    idx_I = _index(gamma.det, I1.det * I2.det)
    out = DecompositionBundle(gamma, K1, K2, I1, I2, idx_K, idx_I, n1)
    if minima:
        for name in ("I1", "K1", "I2", "K2"):
            X = getattr(out, name)
            if method == "blocks" and X.rank > n1:
                out.minima[name] = block_minimum(X, X.rank // 2)
            else:
                out.minima[name] = minimum(X)
    return out


def _index(big_det: Fraction, small_det: Fraction) -> int:
    r = Fraction(big_det) / Fraction(small_det)
    if r.denominator != 1:
        raise StructureMismatch("index is not integral")
    from math import isqrt
    s = isqrt(r.numerator)
    if s * s != r.numerator:
        raise StructureMismatch("determinant ratio is not a square")
    return s


def dual_relation(K: IntegerLattice, I: IntegerLattice) -> bool:
    """I = K^# inside the common span (same module, compared via ambient coordinates)."""
    D = dual(K)
    from .lattice import coordinates_in
    return coordinates_in(I, D.basis) is not None and coordinates_in(D, I.basis) is not None


def _solve_integral(rows: np.ndarray, target) -> list[int] | None:
    """Integral c with c @ rows = target, or None."""
    m = [list(map(int, r)) for r in rows] + [[-int(x) for x in target]]
    kern = la.left_kernel(m)
    # kernel vectors (c, t) satisfy c @ rows = t * target; we need t = 1
    h = la.hnf([[k[-1]] + k[:-1] for k in kern])
    if h and h[0][0] == 1:
        return h[0][1:]
    return None


def _scrambled(B: np.ndarray, seed: int) -> np.ndarray:
    """B under a random unimodular row transformation (seed 0: unchanged)."""
    if not seed:
        return B
    rng = random.Random(seed)
    B = B.copy()
    n = len(B)
    for _ in range(4 * n):
        i, j = rng.sample(range(n), 2)
        B[i] = B[i] + rng.choice((-1, 1)) * B[j]
    return B


def lift_minimal(bundle: DecompositionBundle, v, *, seed: int = 0,
                 reduce: bool = True) -> np.ndarray:
    """Some w in I2 with v + w in Gamma; v is a minimal vector of I1 in
    first-block coordinates.  w is reduced modulo K2 by Babai rounding.
    ``seed`` scrambles the basis of Gamma first, giving an independent solution."""
    v = [int(x) for x in v]
    if not any(v):
        raise ValueError("v must be nonzero")
    n1 = bundle.n1
    amb = bundle.I1.ambient_gram
    nv = sum(Fraction(v[i]) * amb[i][j] * v[j] for i in range(n1) for j in range(n1))
    if nv != bundle.minima.get("I1", nv) or nv == 0:
        raise ValueError("v must be a minimal vector of I1")
    B = _scrambled(_int_basis(bundle.gamma), seed)
    c = _solve_integral(B[:, :n1], v)
    if c is None:
        raise NoLift("v is not the projection of a vector of Gamma")
    w = np.array([int(x) for x in np.array(c, dtype=object).dot(B)[n1:]], dtype=np.int64)
    return reduce_mod(bundle.K2, w) if reduce else w


def same_mod_K2(bundle: DecompositionBundle, w1, w2) -> bool:
    from .lattice import coordinates_in
    d = [int(a) - int(b) for a, b in zip(w1, w2)]
    return not any(d) or coordinates_in(bundle.K2, [d]) is not None


def reduce_mod(K: IntegerLattice, w: np.ndarray) -> np.ndarray:
    """w minus a nearby vector of K (Babai rounding on the reduced basis)."""
    prep = prepare(K)
    Kb = np.array([[int(x) for x in r] for r in K.basis], dtype=np.int64)
    red = prep.T @ Kb
    c = la.solve_left(red.tolist(), [Fraction(int(x)) for x in w])
    if c is None:
        raise NoLift("w is not in the span of K2")
    # nearest plane on the reduced basis via the float GSO data
    n = len(c)
    x = [float(t) for t in c]
    k = [0] * n
    U = prep.U
    for i in range(n - 1, -1, -1):
        s = x[i]
        for j in range(i + 1, n):
            s += U[i, j] * (x[j] - k[j])
        k[i] = int(round(s))
    return w - np.array(k, dtype=np.int64) @ red


def in_gamma(bundle: DecompositionBundle, vec) -> bool:
    from .lattice import coordinates_in
    return coordinates_in(bundle.gamma, [[int(x) for x in vec]]) is not None


@dataclass
class IwResult:
    passed: bool
    norm4: int
    w: tuple[int, ...]


def check_Iw(bundle: DecompositionBundle, w, *, method: str = "blocks",
             budget: int | None = None) -> IwResult:
    """I(w) = K2 u (w + K2) has no vectors of norm <= 4.

    ``method="blocks"`` counts w + K2 through the inner 24 + 24 split of
    the second block; ``"direct"`` runs one 48-dimensional enumeration.
    """
    w = np.asarray(w, dtype=np.int64)
    wt = tuple(int(x) for x in w)
    K2 = bundle.K2
    mK2 = bundle.minima.get("K2")
    if mK2 is None:
        mK2 = bundle.minima["K2"] = block_minimum(K2, K2.rank // 2)
    if mK2 <= 4:
        return IwResult(False, -1, wt)
    if not w.any():
        return IwResult(True, 0, wt)
    if method == "blocks":
        bs = bundle.__dict__.get("_k2split")
        if bs is None:
            bs = bundle.__dict__["_k2split"] = BlockSplit(K2, K2.rank // 2)
        cnt = sum(bs.count(4, shift=[Fraction(int(x)) for x in w]).values())
    elif method == "direct":
        c = la.solve_left(K2.basis, [Fraction(int(x)) for x in w])
        if c is None:
            raise NoLift("w is not in the span of K2")
        cnt = coset_short_vectors(K2, c, 4, collect=False, budget=budget).total
    else:
        raise ValueError(f"unknown method {method!r}")
    return IwResult(cnt == 0, cnt, wt)


def sample_minimal(bundle: DecompositionBundle, k: int, seed: int = 0) -> list[np.ndarray]:
    """k distinct minimal vectors of I1 (first-block coordinates), seeded."""
    rep = short_vectors(bundle.I1, bundle.minima.get("I1") or minimum(bundle.I1))
    Ib = np.array([[int(x) for x in r] for r in bundle.I1.basis], dtype=np.int64)
    vecs = rep.vectors @ Ib
    rng = random.Random(seed)
    idx = rng.sample(range(len(vecs)), min(k, len(vecs)))
    return [vecs[i] for i in idx]


# -- exact counting through an inner block decomposition ----------------------------
#
# Let X live in an ambient space split orthogonally into blocks a and b, with
# projections Pa, Pb and intersections Ja = X cap a, Jb = X cap b.  Every
# vector (u, v) of a coset s + X with |u|^2 + |v|^2 <= bound has |u|^2 <= bound/2
# or |v|^2 <= bound/2.  So it suffices to enumerate the short side u in the
# coset s_a + Pa and, for each u, the partners v in one coset of Jb (and
# symmetrically), which keeps all enumerations in half the dimension.

class _Side:
    def __init__(self, B: np.ndarray, lo: int, hi: int, amb, label: str):
        self.lo, self.hi = lo, hi
        own = B[:, lo:hi]
        other = np.concatenate([B[:, :lo], B[:, hi:]], axis=1)
        self.amb = _sub_ambient(amb, lo, hi)
        self.P = _from_rows(la.hnf(own.tolist()), self.amb, f"P{label}")
        k = la.left_kernel(other.tolist())
        self.J = _from_rows([r[lo:hi] for r in la.hnf(np.array(k, dtype=object).dot(B).tolist())],
                            self.amb, f"J{label}")
        Pb = [[int(x) for x in r] for r in self.P.basis]
        lifts = []
        for p in Pb:
            c = _solve_integral(own, p)
            if c is None:
                raise StructureMismatch("projection basis vector has no lift")
            lifts.append(np.array(c, dtype=object).dot(B))
        self.lifts = np.array(lifts, dtype=object)
        self.P_inv = la.rational_inverse(self.P.basis)
        self.J_inv = la.rational_inverse(self.J.basis)


def _coords(inv, t) -> list[Fraction]:
    n = len(inv)
    return [sum((t[i] * inv[i][j] for i in range(n) if t[i]), Fraction(0)) for j in range(n)]


class BlockSplit:
    def __init__(self, X: IntegerLattice, na: int):
        B = _int_basis(X)
        n = B.shape[1]
        amb = X.ambient_gram
        if any(amb[i][j] != 0 for i in range(na) for j in range(na, n)):
            raise StructureMismatch("ambient Gram is not block diagonal at the split")
        self.X, self.na, self.n = X, na, n
        self.a = _Side(B, 0, na, amb, "a")
        self.b = _Side(B, na, n, amb, "b")

    def _half(self, side: _Side, other: _Side, s, bound: Fraction, strict: bool):
        """Pairs with the norm on ``side`` <= bound/2 (< bound/2 if strict)."""
        lo, hi = side.lo, side.hi
        sa = [s[i] for i in range(lo, hi)]
        c = _coords(side.P_inv, sa)
        rep = coset_short_vectors(side.P, c, bound / 2)
        out: dict[Fraction, int] = {}
        if rep.vectors is None or not len(rep.vectors):
            return out
        shift = rep.shift
        for row in rep.vectors:
            k = [shift[i] + int(row[i]) for i in range(len(row))]
            nu = side.P.norm(k)
            if strict and nu == bound / 2:
                continue
            # u - s_side has integral P-coordinates k - c; lift them to X
            d = [k[i] - c[i] for i in range(len(k))]
            if any(x.denominator != 1 for x in d):
                raise StructureMismatch("coset vector is not congruent to the shift")
            lift = np.array([int(x) for x in d], dtype=object).dot(side.lifts)
            t = [s[i] + lift[i] for i in range(other.lo, other.hi)]
            # lift carries u - s_side on this side; the other side gets its partner coset
            hb = coset_short_vectors(other.J, _coords(other.J_inv, t), bound - nu,
                                     collect=False).count_by_norm
            for y, cy in hb.items():
                if strict and y <= bound / 2:
                    continue  # counted from the other side
                out[nu + y] = out.get(nu + y, 0) + cy
        return out

    def count(self, bound, shift=None) -> dict[Fraction, int]:
        """Norm histogram of the nonzero vectors of (shift + X) with norm <= bound."""
        bound = Fraction(bound)
        s = [Fraction(0)] * self.n if shift is None else [Fraction(x) for x in shift]
        h1 = self._half(self.a, self.b, s, bound, False)
        h2 = self._half(self.b, self.a, s, bound, True)
        total = dict(h1)
        for k, v in h2.items():
            total[k] = total.get(k, 0) + v
        total.pop(Fraction(0), None)
        return dict(sorted(total.items()))

    def minimum(self) -> Fraction:
        """Exact minimum: a block vector gives an upper bound m, and the
        count strictly below m decides."""
        m = min(minimum(self.a.J), minimum(self.b.J))
        scale = la.common_denominator(self.X.gram)
        h = self.count(m - Fraction(1, scale))
        return min(h) if h else m


def block_minimum(X: IntegerLattice, na: int) -> Fraction:
    return BlockSplit(X, na).minimum()


# -- verification driver -------------------------------------------------------

def minimal_I1(bundle: DecompositionBundle) -> np.ndarray:
    """One vector of each pair +-v of minimal vectors of I1, in a fixed order."""
    m = bundle.minima.get("I1") or minimum(bundle.I1)
    rep = short_vectors(bundle.I1, m)
    Ib = np.array([[int(x) for x in r] for r in bundle.I1.basis], dtype=np.int64)
    return rep.vectors[rep.vectors.any(axis=1)] @ Ib


@dataclass
class DecompRecord:
    index: int
    w: tuple[int, ...]
    passed: bool
    norm4: int

    def line(self) -> str:
        return f"w_{self.index}: {' '.join(map(str, self.w))} | passed={str(self.passed).lower()} norm4={self.norm4}"


def verify_decomposition(bundle: DecompositionBundle, *, sample: int | None = 64, seed: int = 0,
                         checkpoint: str | Path | None = None,
                         max_units: int | None = None) -> list[DecompRecord]:
    """check_Iw on lifts of minimal vectors of I1.

    ``sample=None`` runs all of them (one per sign pair).  Each unit is
    stored as ``unit_{index:06d}.json`` under ``checkpoint`` and reused on
    resume; results are memoised on the reduced representative of w mod K2.
    """
    vecs = minimal_I1(bundle)
    idx = list(range(len(vecs)))
    if sample is not None:
        idx = sorted(random.Random(seed).sample(idx, min(sample, len(idx))))
    ckdir = Path(checkpoint) if checkpoint else None
    if ckdir:
        ckdir.mkdir(parents=True, exist_ok=True)
    memo: dict[tuple[int, ...], IwResult] = {}
    out = []
    for i in idx:
        if max_units is not None and len(out) >= max_units:
            break
        path = ckdir / f"unit_{i:06d}.json" if ckdir else None
        if path is not None and path.exists():
            try:
                d = json.loads(path.read_text())
                rec = DecompRecord(i, tuple(d["w"]), bool(d["passed"]), int(d["norm4"]))
            except (ValueError, KeyError, TypeError) as e:
                raise LatticeError(f"corrupt checkpoint {path}: {e}") from None
        else:
            w = lift_minimal(bundle, vecs[i])
            key = tuple(int(x) for x in w)
            r = memo.get(key)
            if r is None:
                r = memo[key] = check_Iw(bundle, w)
            rec = DecompRecord(i, key, r.passed, r.norm4)
            if path is not None:
                tmp = path.with_suffix(".tmp")
                tmp.write_text(json.dumps({"w": list(rec.w), "passed": rec.passed, "norm4": rec.norm4}))
                os.replace(tmp, path)
        out.append(rec)
    return out
