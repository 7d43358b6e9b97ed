"""Counting vectors of norm 6 and 8 in L(M, N, 3) for a polarization of Leech.

Conventions: (.,.) is the form of the Leech lattice (minimum 4), Q = (.,.)/2.
A class of Lambda/2Lambda is encoded by the parity mask of its coordinates.

Two ways to run the norm-6 census are provided.  ``generic`` follows the
textbook loop: for every class w of N/2Lambda and ordered pair (x, y) in
W2(w)^2, enumerate the coset w + x + y + 2Lambda up to norm 8.  ``fast`` uses
that a class of Lambda/2Lambda has minimum 4 exactly when it contains one
of the 196560 minimal vectors, so the coset enumeration becomes a table
lookup on parity masks.  The two agree on every pair that is cross-checked.
"""

from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from pathlib import Path

import numpy as np

from . import _kernels as K
from . import _linalg as la
from .enumeration import coset_short_vectors, short_vectors
from .lattice import IntegerLattice, scaled_sublattice
from .polarization import InvariantFailure, Polarization, f2_coordinates

LEECH_KISSING = 196560
N_CLASSES = 4095
FRAME = 48
DESIGN_TABLE = (46488, 78848, 47216, 18944, 4536, 512, 16)


class CheckpointCorrupt(RuntimeError):
    pass


class SingularSystem(ArithmeticError):
    pass


# -- helpers -------------------------------------------------------------------

def _int_rows(X: IntegerLattice) -> np.ndarray:
    return np.array([[int(x) for x in r] for r in X.basis], dtype=np.int64)


def _gram(pol: Polarization) -> np.ndarray:
    return pol.L.int_gram()


def codes(vectors: np.ndarray) -> np.ndarray:
    return K.class_codes(np.ascontiguousarray(vectors, dtype=np.int64))


def _mask_bits(masks: np.ndarray, n: int) -> np.ndarray:
    return ((masks[:, None] >> np.arange(n)) & 1).astype(np.int64)


def _pack(bits: np.ndarray) -> np.ndarray:
    return (bits.astype(np.int64) << np.arange(bits.shape[1])).sum(axis=1)


class Splitting:
    """Lambda/2Lambda = U + V with U = M/2Lambda, V = N/2Lambda.

    ``key(c)`` is the V-component of c written in the basis of V; it
    identifies the class of c modulo M (0 means c lies in M).
    """

    def __init__(self, pol: Polarization):
        n = pol.dim
        self.n = n
        self.U = pol.U()
        self.V = pol.V()
        h = n // 2
        if len(self.U) != h or len(self.V) != h:
            raise InvariantFailure("M/2L and N/2L must both have dimension n/2")
        inv = f2_coordinates(self.U + self.V, n)
        self._R = _mask_bits(np.array(inv, dtype=np.int64), n)  # row j: coefficients of e_j
        self.h = h

    def key(self, masks) -> np.ndarray:
        masks = np.atleast_1d(np.asarray(masks, dtype=np.int64))
        coef = (_mask_bits(masks, self.n) @ self._R) & 1
        return _pack(coef[:, self.h:])

    def v_class(self, key: int) -> int:
        """The element of V with the given key."""
        out = 0
        for i, v in enumerate(self.V):
            if key >> i & 1:
                out ^= v
        return out


# -- class table -------------------------------------------------------------------

@dataclass
class ClassTable:
    """The 4095 nonzero classes of N/2Lambda with their frames of 48 norm-8
    vectors (coordinates in the basis of Lambda)."""

    codes: np.ndarray
    frames: np.ndarray

    def __len__(self) -> int:
        return len(self.codes)

    @property
    def representatives(self) -> np.ndarray:
        return self.frames[:, 0, :]


def _norm8_of(pol: Polarization, which: str) -> np.ndarray:
    X = pol.M if which == "M" else pol.N
    rep = short_vectors(X, 8)
    if rep.count_by_norm != {Fraction(8): LEECH_KISSING}:
        raise InvariantFailure(f"{which} should have exactly {LEECH_KISSING} vectors of norm <= 8, "
                               f"found {rep.count_by_norm}")
    half = rep.vectors @ _int_rows(X)
    return np.concatenate([half, -half])


def class_table(pol: Polarization) -> ClassTable:
    vecs = _norm8_of(pol, "N")
    c = codes(vecs)
    order = np.argsort(c, kind="stable")
    c, vecs = c[order], vecs[order]
    uniq, starts, counts = np.unique(c, return_index=True, return_counts=True)
    if len(uniq) != N_CLASSES or 0 in uniq:
        raise InvariantFailure(f"expected {N_CLASSES} nonzero classes, found {len(uniq)}")
    if np.any(counts != FRAME):
        raise InvariantFailure("a class of N/2L does not contain exactly 48 norm-8 vectors")
    frames = vecs.reshape(N_CLASSES, FRAME, -1)
    G = _gram(pol)
    for f in frames:
        check_frame(f, G)
    return ClassTable(uniq, frames)


def check_frame(frame: np.ndarray, G: np.ndarray, norm: int = 8) -> None:
    """48 vectors +-k_1..+-k_24 with (k_i, k_j) = norm * delta_ij."""
    P = frame @ G @ frame.T
    if not np.all(np.isin(P, (-norm, 0, norm))):
        raise InvariantFailure("frame vectors are not pairwise orthogonal")
    if np.any(np.diag(P) != norm) or np.any((P != 0).sum(axis=1) != 2):
        raise InvariantFailure("frame is not of the form +-k_1, ..., +-k_24")


def leech_class_counts(L: IntegerLattice) -> dict[str, int]:
    """|L4|, |L6| by enumeration and |L8| from the class count identity
    |L4|/2 + |L6|/2 + |L8|/48 = 2^24 - 1."""
    rep = short_vectors(L, 6, collect=False)
    a4, a6 = rep.count(4), rep.count(6)
    rest = 2 ** 24 - 1 - a4 // 2 - a6 // 2
    return {"norm4": a4, "norm6": a6, "norm8": 48 * rest, "classes8": rest,
            "nodes": rep.nodes}


# -- W sets ----------------------------------------------------------------------------

def _m_coords(pol: Polarization, v) -> list[Fraction]:
    c = la.solve_left(pol.M.basis, [Fraction(int(x)) for x in v])
    if c is None:
        raise ValueError("vector is not in the span of M")
    return c


def _coset_vectors(pol: Polarization, w, bound) -> tuple[np.ndarray, np.ndarray]:
    """Vectors v in w + M with (v, v) <= bound, in Lambda coordinates, and their norms."""
    rep = coset_short_vectors(pol.M, _m_coords(pol, w), bound)
    num, den = rep.numerators()
    Mb = _int_rows(pol.M)
    v = num @ Mb
    if np.any(v % den):
        raise InvariantFailure("coset vectors are not in Lambda")
    v //= den
    G = _gram(pol)
    return v, np.einsum("ij,jk,ik->i", v, G, v)


def w2_set(pol: Polarization, w) -> np.ndarray:
    """W2(w) = {x in M : Q(x + w) = 2}, as rows x."""
    v, nrm = _coset_vectors(pol, w, 4)
    return v[nrm == 4] - np.asarray(w, dtype=np.int64)


def w3_set(pol: Polarization, w) -> np.ndarray:
    """W3(w) = {x in M : Q(x + w) = 3}."""
    v, nrm = _coset_vectors(pol, w, 6)
    return v[nrm == 6] - np.asarray(w, dtype=np.int64)


def check_24A1(pol: Polarization, w, W2: np.ndarray) -> None:
    """{x + w} must be 24 pairs of orthogonal norm-4 vectors."""
    if len(W2) != FRAME:
        raise InvariantFailure(f"|W2(w)| = {len(W2)}, expected 48")
    check_frame(W2 + np.asarray(w, dtype=np.int64), _gram(pol), norm=4)


# -- design counts ------------------------------------------------------------------

def design_moments(n: int = 24, size: int = LEECH_KISSING, r2: int = 64, t: int = 11) -> list[Fraction]:
    """sum_x (x, w)^(2k), 2k <= t, for a spherical t-design of ``size``
    points on a sphere in R^n, with |x|^2 |w|^2 = r2.

    The average of (x, w)^(2k) over the sphere is
    (1*3*...*(2k-1)) / (n (n+2) ... (n+2k-2)) * r2^k.
    """
    out = []
    for k in range(t // 2 + 1):
        num = prod(range(1, 2 * k, 2))
        den = prod(n + 2 * j for j in range(k))
        out.append(Fraction(size * num, den) * r2 ** k)
    return out


def solve_design_counts(odd_total: int = 2048 * 48, imax: int = 6) -> tuple[int, ...]:
    """n_0..n_imax from the design moments and the parity equation."""
    moments = design_moments()
    rows = []
    rhs = []
    for k, m in enumerate(moments):
        rows.append([Fraction(i ** (2 * k)) for i in range(imax + 1)])
        rhs.append(m)
    rows.append([Fraction(i % 2) for i in range(imax + 1)])
    rhs.append(Fraction(odd_total))
    if len(rows) != imax + 1:
        raise SingularSystem("wrong number of equations")
    if la.rational_det(rows) == 0:
        raise SingularSystem("moment system is singular")
    inv = la.rational_inverse(rows)
    sol = [sum((inv[i][j] * rhs[j] for j in range(len(rhs))), Fraction(0)) for i in range(imax + 1)]
    if any(x.denominator != 1 or x < 0 for x in sol):
        raise SingularSystem(f"non-integral solution {sol}: a moment constant is wrong")
    return tuple(int(x) for x in sol)


def design_counts_direct(pol: Polarization, w, X: np.ndarray | None = None) -> tuple[int, ...]:
    """n_i = #{x in M : (x, x) = 8, (x, w) = +-i} by direct summation."""
    if X is None:
        X = _norm8_of(pol, "M")
    ip = np.abs(X @ _gram(pol) @ np.asarray(w, dtype=np.int64))
    if ip.max() > 6:
        raise InvariantFailure("inner product larger than 6 between norm-8 vectors")
    return tuple(int(c) for c in np.bincount(ip, minlength=7))


def design_counts(direct: bool = False, pol: Polarization | None = None, w=None,
                  X: np.ndarray | None = None) -> tuple[int, ...]:
    if direct:
        if pol is None or w is None:
            raise ValueError("the direct path needs a polarization and w")
        return design_counts_direct(pol, w, X)
    return solve_design_counts()


# -- norm 6 / norm 8 census ------------------------------------------------------

@dataclass
class CensusReport:
    b6: int
    type_counts: dict[tuple[int, int, int], int]
    provenance: str = "formula"
    classes_done: int = N_CLASSES
    complete: bool = True
    bad_pairs: int = 0
    enumerated_422: int | None = None
    per_class: dict[int, tuple[int, int]] = field(default_factory=dict)

    @property
    def kissing(self) -> int:
        return sum(self.type_counts.values())

    def lines(self) -> list[str]:
        out = [f"b6: {self.b6}", f"provenance: {self.provenance}",
               f"classes_done: {self.classes_done}", f"complete: {str(self.complete).lower()}"]
        for t, c in self.type_counts.items():
            out.append(f"type_{t[0]}_{t[1]}_{t[2]}: {c}")
        out.append(f"kissing: {self.kissing}")
        if self.enumerated_422 is not None:
            out.append(f"enumerated_4_2_2: {self.enumerated_422}")
        return out


def norm8_assembly(b6: int) -> CensusReport:
    if b6 < 0:
        raise ValueError("b6 must be non-negative")
    counts = {
        (8, 0, 0): LEECH_KISSING * 3,
        (4, 4, 0): LEECH_KISSING * 48 * 3,
        (3, 3, 2): N_CLASSES * 48 * 2048 * 2 * 2 * 3,
        (4, 2, 2): N_CLASSES * 48 ** 3 * 3 - 72 * b6,
    }
    return CensusReport(b6, counts)


class CensusData:
    """Everything the class loop needs, computed once per polarization."""

    def __init__(self, pol: Polarization, minimal: np.ndarray | None = None):
        self.pol = pol
        self.split = Splitting(pol)
        if minimal is None:
            rep = short_vectors(pol.L, 4)
            if rep.count(4) != LEECH_KISSING or rep.count(2):
                raise InvariantFailure("parent lattice is not Leech-like")
            half = rep.vectors
            minimal = np.concatenate([half, -half])
        self.minimal = minimal
        self.codes = codes(minimal)
        self.is4 = np.zeros(1 << pol.dim, dtype=bool)
        self.is4[self.codes] = True
        keys = self.split.key(self.codes)
        order = np.argsort(keys, kind="stable")
        k, cnt = np.unique(keys[order], return_counts=True)
        if 0 in k or len(k) != N_CLASSES or np.any(cnt != FRAME):
            raise InvariantFailure("minimal vectors do not split into 4095 cosets of M with 48 each")
        self._by_key = {int(key): order[i * FRAME:(i + 1) * FRAME] for i, key in enumerate(k)}

    def class_keys(self) -> list[int]:
        return list(range(1, N_CLASSES + 1))

    def class_code(self, key: int) -> int:
        return self.split.v_class(key)

    def class_lift(self, key: int) -> np.ndarray:
        """0/1 vector in the class of N/2L with this key."""
        c = self.class_code(key)
        return np.array([(c >> i) & 1 for i in range(self.pol.dim)], dtype=np.int64)

    def coset_minimal(self, key: int) -> np.ndarray:
        """The 48 minimal vectors s with s in w + M for the class w of given key."""
        return self.minimal[self._by_key[key]]

    def bad_pairs(self, key: int) -> int:
        c = self.codes[self._by_key[key]]
        x = c[:, None] ^ c[None, :] ^ self.class_code(key)
        return int(self.is4[x].sum())


def _generic_pair(two_L: IntegerLattice, v: np.ndarray) -> dict[Fraction, int]:
    """Norm counts of the coset v + 2L up to 8 (v in L coordinates)."""
    t = [Fraction(int(x), 2) for x in v]
    return coset_short_vectors(two_L, t, 8, collect=False).count_by_norm


def generic_pair_counts(data: CensusData, key: int, pairs, two_L=None) -> tuple[int, int]:
    """(bad pairs, (4,2,2) contributions) for the listed ordered pairs,
    by coset enumeration in 2L."""
    two_L = two_L or scaled_sublattice(data.pol.L, 2)
    S = data.coset_minimal(key)
    w = data.class_lift(key)
    bad = 0
    n422 = 0
    for i, j in pairs:
        # w + x + y = s_i + s_j - w; any lift of the class of w works modulo 2L
        v = S[i] + S[j] - w
        counts = _generic_pair(two_L, v)
        if counts.get(Fraction(4)):
            if counts[Fraction(4)] != 2:
                raise InvariantFailure("a class of minimum 4 must contain exactly 2 vectors")
            bad += 1
        else:
            if counts.get(Fraction(8)) != 48 or len(counts) != 1:
                raise InvariantFailure(f"expected a frame of 48 norm-8 vectors, got {counts}")
            n422 += 48
    return bad, n422


def _checkpoint_file(directory: Path, key: int) -> Path:
    return directory / f"class_{key:04d}.json"


def _read_checkpoint(path: Path, key: int) -> tuple[int, int]:
    try:
        d = json.loads(path.read_text())
        if d["key"] != key:
            raise ValueError("key mismatch")
        return int(d["bad"]), int(d["n422"])
    except (ValueError, KeyError, TypeError) as e:
        raise CheckpointCorrupt(f"{path}: {e}") from None


def norm6_census(pol: Polarization, sample: int | None = None, *, seed: int = 0,
                 checkpoint: str | Path | None = None, method: str = "fast",
                 data: CensusData | None = None, max_classes: int | None = None) -> CensusReport:
    """b6 of L(M, N, 3) and the enumerated count of type (4,2,2) vectors.

    ``sample`` restricts the loop to that many random classes (seeded).
    With ``checkpoint`` one file per class is written and existing files are
    reused.  ``max_classes`` stops early (report.complete is then False).
    """
    data = data or CensusData(pol)
    keys = data.class_keys()
    if sample is not None:
        keys = sorted(random.Random(seed).sample(keys, sample))
    ckdir = Path(checkpoint) if checkpoint else None
    if ckdir:
        ckdir.mkdir(parents=True, exist_ok=True)
    two_L = scaled_sublattice(pol.L, 2) if method == "generic" else None
    all_pairs = [(i, j) for i in range(FRAME) for j in range(FRAME)]
    bad = n422 = 0
    per_class: dict[int, tuple[int, int]] = {}
    done = 0
    for key in keys:
        if max_classes is not None and done >= max_classes:
            break
        path = _checkpoint_file(ckdir, key) if ckdir else None
        if path is not None and path.exists():
            b, c = _read_checkpoint(path, key)
        elif method == "fast":
            b = data.bad_pairs(key)
            c = 48 * (FRAME * FRAME - b)
        elif method == "generic":
            b, c = generic_pair_counts(data, key, all_pairs, two_L)
        else:
            raise ValueError(f"unknown method {method!r}")
        if path is not None and not path.exists():
            tmp = path.with_suffix(".tmp")
            tmp.write_text(json.dumps({"key": key, "bad": b, "n422": c}))
            os.replace(tmp, path)
        per_class[key] = (b, c)
        bad += b
        n422 += c
        done += 1
    b6 = 2 * bad
    complete = sample is None and done == N_CLASSES
    rep = norm8_assembly(b6)
    rep.provenance = f"enumeration ({method})"
    rep.classes_done = done
    rep.complete = complete
    rep.bad_pairs = bad
    # the loop fixes the position of the norm-8 entry; three positions in total
    rep.enumerated_422 = 3 * n422
    rep.per_class = per_class
    if complete and rep.enumerated_422 != rep.type_counts[(4, 2, 2)]:
        raise InvariantFailure("enumerated (4,2,2) count differs from the closed form")
    return rep


def cross_check(data: CensusData, n_pairs: int = 1000, seed: int = 0) -> int:
    """Compare fast and generic classification on random (class, pair) samples.
    Returns the number of pairs checked; raises on disagreement."""
    rng = random.Random(seed)
    two_L = scaled_sublattice(data.pol.L, 2)
    for _ in range(n_pairs):
        key = rng.randint(1, N_CLASSES)
        i, j = rng.randrange(FRAME), rng.randrange(FRAME)
        g_bad, _ = generic_pair_counts(data, key, [(i, j)], two_L)
        c = data.codes[data._by_key[key]]
        f_bad = int(data.is4[c[i] ^ c[j] ^ data.class_code(key)])
        if g_bad != f_bad:
            raise InvariantFailure(f"fast and generic census disagree on class {key}, pair {(i, j)}")
    return n_pairs


def fast_b6(sp, minimal: np.ndarray | None = None) -> int:
    """b6 of L(alpha L, beta L, 3) for a Z[alpha]-structure on a Leech-like lattice."""
    from .polarization import polarization_from_structure
    L = sp.lattice()
    pol = polarization_from_structure(L, sp)
    return norm6_census(pol, data=CensusData(pol, minimal)).b6
