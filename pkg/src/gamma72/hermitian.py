"""Hermitian Z[alpha]-lattices, their trace lattices and Z[alpha]-structures
on integral lattices.

Hermitian forms are linear in the first argument.  On a Z-lattice with
Gram F, a structure is a matrix A with A F A^T = 2F and F A^T F^-1 = 1 - A;
alpha then acts on row vectors by right multiplication with A.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from math import lcm
from pathlib import Path

import numpy as np

from . import _linalg as la
from . import zalpha as za
from .enumeration import short_vectors
from .lattice import IntegerLattice, LatticeError, format_gram, is_even, parse_matrix
from .zalpha import ALPHA, BETA, ONE, SQRT_M7, ZERO, ZAlpha

S_TRACE = Fraction(1)        # L(P, h): plain trace form
S_GAMMA = Fraction(1, 7)     # the normalisation used for Leech and Gamma


class NonIntegralResult(LatticeError):
    pass


class DimensionMismatch(LatticeError):
    pass


class NotFound(RuntimeError):
    """Search budget exhausted or search space empty."""


class InvalidWitness(LatticeError):
    pass


class RankTooLarge(ValueError):
    pass


class NoFreeBasis(RuntimeError):
    pass


def _freeze(m):
    return tuple(tuple(ZAlpha.coerce(x) for x in row) for row in m)


@dataclass(frozen=True, eq=False)
class HermitianLattice:
    """Free Z[alpha]-lattice given by the Hermitian Gram matrix of a basis.

    ``basis`` optionally gives the basis in coordinates of an ambient
    Q(alpha)-space with Hermitian Gram ``ambient``.
    """

    hgram: tuple
    basis: tuple | None = None
    ambient: tuple | None = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "hgram", _freeze(self.hgram))
        if self.basis is not None:
            object.__setattr__(self, "basis", _freeze(self.basis))
            object.__setattr__(self, "ambient", _freeze(self.ambient))
        h = self.hgram
        r = len(h)
        if any(len(row) != r for row in h):
            raise LatticeError("Hermitian Gram must be square")
        for i in range(r):
            if not h[i][i].is_rational:
                raise LatticeError("diagonal entries must be rational")
            for j in range(i):
                if h[i][j] != h[j][i].conj():
                    raise LatticeError("Gram matrix is not Hermitian")
        g = _trace_gram(h, S_TRACE)
        d = la.common_denominator(g)
        _, minors = la.bareiss(la.to_int_rows([[x * d for x in row] for row in g]))
        if len(minors) < 2 * r or any(m <= 0 for m in minors):
            raise LatticeError("Hermitian form is not positive definite")

    @property
    def rank(self) -> int:
        return len(self.hgram)

    @property
    def is_integral(self) -> bool:
        return all(x.is_integral for row in self.hgram for x in row)

    def __eq__(self, other):
        return isinstance(other, HermitianLattice) and self.hgram == other.hgram

    def __hash__(self):
        return hash(self.hgram)

    def __repr__(self):
        return f"HermitianLattice(rank={self.rank}, label={self.label!r})"


@dataclass(frozen=True, eq=False)
class StructurePair:
    F: tuple
    A: tuple

    def __post_init__(self):
        object.__setattr__(self, "F", tuple(tuple(int(x) for x in r) for r in self.F))
        object.__setattr__(self, "A", tuple(tuple(int(x) for x in r) for r in self.A))

    @property
    def dim(self) -> int:
        return len(self.F)

    def lattice(self, label: str = "") -> IntegerLattice:
        return IntegerLattice(self.F, label=label)

    def B(self) -> list[list[int]]:
        n = self.dim
        return [[int(i == j) - self.A[i][j] for j in range(n)] for i in range(n)]


# -- constructions ----------------------------------------------------------

def half_standard_form(n: int):
    return [[ZAlpha(Fraction(1, 2)) if i == j else ZERO for j in range(n)] for i in range(n)]


def gram_in_ambient(basis, ambient):
    return za.mat_mul(za.mat_mul(basis, ambient), za.conj_transpose(basis))


def barnes() -> HermitianLattice:
    """P_b = <(1,1,alpha), (0,beta,beta), (0,0,2)> with half the standard form."""
    basis = [[ONE, ONE, ALPHA], [ZERO, BETA, BETA], [ZERO, ZERO, ZAlpha(2)]]
    amb = half_standard_form(3)
    return HermitianLattice(gram_in_ambient(basis, amb), basis=basis, ambient=amb, label="Barnes")


def _trace_gram(h, s):
    r = len(h)
    powers = (ONE, ALPHA)
    g = [[Fraction(0)] * (2 * r) for _ in range(2 * r)]
    for i in range(r):
        for j in range(r):
            for p in range(2):
                for q in range(2):
                    g[2 * i + p][2 * j + q] = s * (powers[p] * powers[q].conj() * h[i][j]).trace()
    return g


def trace_lattice(P: HermitianLattice, s=S_TRACE, *, assert_integral: bool = False) -> IntegerLattice:
    """Z-lattice on (b_1, alpha b_1, ..., b_r, alpha b_r) with form s*trace(h)."""
    s = Fraction(s)
    g = _trace_gram(P.hgram, s)
    if assert_integral and not la.is_integral(g):
        raise NonIntegralResult(f"s*trace(h) is not integral for s={s}")
    label = f"L({P.label},{s})" if P.label else ""
    return IntegerLattice(g, label=label)


def alpha_action(rank: int) -> list[list[int]]:
    """Matrix of alpha on the trace-lattice basis (b, alpha b) per summand."""
    n = 2 * rank
    A = [[0] * n for _ in range(n)]
    for i in range(rank):
        A[2 * i][2 * i + 1] = 1
        A[2 * i + 1][2 * i] = -2
        A[2 * i + 1][2 * i + 1] = 1
    return A


def structure_of(P: HermitianLattice, s=S_GAMMA) -> StructurePair:
    L = trace_lattice(P, s, assert_integral=True)
    return StructurePair(la.to_int_rows(L.gram), alpha_action(P.rank))


def hermitian_tensor(P1: HermitianLattice, P2: HermitianLattice) -> HermitianLattice:
    h1, h2 = P1.hgram, P2.hgram
    r1, r2 = len(h1), len(h2)
    h = [[h1[i][k] * h2[j][l] for k in range(r1) for l in range(r2)]
         for i in range(r1) for j in range(r2)]
    label = f"{P1.label}(x){P2.label}" if P1.label or P2.label else ""
    return HermitianLattice(h, label=label)


def galois_conjugate(P: HermitianLattice) -> HermitianLattice:
    h = [[x.conj() for x in row] for row in P.hgram]
    basis = amb = None
    if P.basis is not None:
        basis = [[x.conj() for x in row] for row in P.basis]
        amb = [[x.conj() for x in row] for row in P.ambient]
    return HermitianLattice(h, basis=basis, ambient=amb, label=f"conj({P.label})")


# -- duality ----------------------------------------------------------------

def hermitian_dual(P: HermitianLattice) -> HermitianLattice:
    """P* = {v : h(v, P) in Z[alpha]} on the dual basis (Gram H^-1).

    The returned ``basis`` is expressed in P's ambient space when P has one,
    else in coordinates of P's basis.
    """
    inv = za.inverse(P.hgram)
    if P.basis is not None:
        basis, amb = za.mat_mul(inv, P.basis), P.ambient
    else:
        basis, amb = inv, P.hgram
    return HermitianLattice(inv, basis=basis, ambient=amb, label=f"dual({P.label})")


def _coords_over(basis, vectors):
    """Q(alpha)-coordinates of vectors with respect to basis rows (square case)."""
    inv = za.inverse(basis)
    return za.mat_mul(vectors, inv)


def same_module(P: HermitianLattice, Q: HermitianLattice) -> bool:
    """Whether P and Q span the same Z[alpha]-module of their common ambient."""
    pb = P.basis if P.basis is not None else [[ONE if i == j else ZERO for j in range(P.rank)]
                                              for i in range(P.rank)]
    qb = Q.basis if Q.basis is not None else pb
    if len(pb) != len(pb[0]) or len(qb) != len(pb):
        raise DimensionMismatch("same_module needs full-rank bases of one ambient")
    c1 = _coords_over(pb, qb)
    c2 = _coords_over(qb, pb)
    return all(x.is_integral for row in c1 + c2 for x in row)


def _qalpha_rows_to_z(rows) -> list[list[Fraction]]:
    out = []
    for row in rows:
        r = []
        for x in row:
            r += [x.a, x.b]
        out.append(r)
    return out


def trace_dual_check(P: HermitianLattice, s=S_TRACE) -> bool:
    """dual(L(P, s*tr h)) == (1/(s*sqrt(-7))) P* as Z-lattices in Q P."""
    s = Fraction(s)
    L = trace_lattice(P, s)
    r = P.rank
    # dual basis of L, coordinates w.r.t. (b_i, alpha b_i)
    dual_coords = la.rational_inverse(L.gram)
    lam = ONE / (SQRT_M7 * s)
    pstar = za.inverse(P.hgram)  # dual basis coordinates (C = H^-1)
    twisted = []
    for row in pstar:
        for p in (ONE, ALPHA):
            twisted.append([lam * p * x for x in row])
    tw = _qalpha_rows_to_z(twisted)
    a = la.matmul(dual_coords, la.rational_inverse(tw))
    b = la.matmul(tw, la.rational_inverse(dual_coords))
    return la.is_integral(a) and la.is_integral(b) and len(tw) == 2 * r


# -- structures on Z-lattices -------------------------------------------------

def _mat(m) -> np.ndarray:
    return la.int_array(m)


def validate_structure(sp: StructurePair) -> bool:
    F, A = _mat(sp.F), _mat(sp.A)
    n = F.shape[0]
    if F.shape != (n, n) or A.shape != (n, n) or n % 2:
        raise DimensionMismatch("F and A must be square of equal even size")
    I = _mat(la.identity(n))
    if not np.array_equal(A.dot(F).dot(A.T), 2 * F):
        return False
    # F A^T F^-1 = 1 - A  <=>  F A^T = (1 - A) F
    if not np.array_equal(F.dot(A.T), (I - A).dot(F)):
        return False
    return bool(np.array_equal(A.dot(A) - A + 2 * I, 0 * I))


def find_structure(L: IntegerLattice, budget: int = 1_000_000, seed: int = 0) -> StructurePair:
    """Search a Z[alpha]-structure on an even lattice of odd determinant.

    Backtracks over the images a_i = b_i A of a reduced basis: a_i must
    satisfy (a_i, a_j) = 2 F_ij and (a_i, b_j) + (b_i, a_j) = F_ij, which
    together force A^2 - A + 2 = 0 (S = 2A - 1 is then an F-skew square
    root of -7 with S = 1 mod 2).
    """
    if L.rank % 2:
        raise ValueError("rank must be even")
    if not is_even(L) or L.det.numerator % 2 == 0:
        raise ValueError("lattice must be even with odd determinant")
    from .enumeration import reduce_basis
    red, T = reduce_basis(L)
    F = red.int_gram()
    n = L.rank
    rng = random.Random(seed)
    cand = {}
    for norm in sorted({2 * int(F[i, i]) for i in range(n)}):
        v = short_vectors(red, norm).vectors
        vv = np.concatenate([v, -v])
        norms = np.einsum("ij,jk,ik->i", vv, F, vv)
        cand[norm] = vv[norms == norm]
    per_level = []
    for i in range(n):
        c = cand[2 * int(F[i, i])]
        cf = c @ F
        keep = cf[:, i] == F[i, i] // 2
        c, cf = c[keep], cf[keep]
        order = list(range(len(c)))
        rng.shuffle(order)
        per_level.append((c[order], cf[order]))
    chosen: list[np.ndarray] = []
    chosen_f: list[np.ndarray] = []
    nodes = 0

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == n:
            return True
        c, cf = per_level[i]
        mask = np.ones(len(c), dtype=bool)
        for j in range(i):
            mask &= cf @ chosen[j] == 2 * F[i, j]
            mask &= cf[:, j] + chosen_f[j][i] == F[i, j]
        for idx in np.flatnonzero(mask):
            nodes += 1
            if nodes > budget:
                raise NotFound("find_structure budget exhausted")
            chosen.append(c[idx])
            chosen_f.append(cf[idx])
            if rec(i + 1):
                return True
            chosen.pop()
            chosen_f.pop()
        return False

    if not rec(0):
        raise NotFound("no Z[alpha]-structure exists on this lattice")
    A_red = np.array(chosen, dtype=np.int64)
    # back to the input basis: basis_red = T basis, so A = T^-1 A_red T
    Tinv = np.rint(np.linalg.inv(T.astype(float))).astype(np.int64)
    A = Tinv @ A_red @ T
    sp = StructurePair(la.to_int_rows(L.gram), A.tolist())
    if not validate_structure(sp):
        raise AssertionError("find_structure produced an invalid pair")
    return sp


def hermitian_basis(sp: StructurePair) -> list[list[int]]:
    """Vectors g_1..g_r such that (g_1, g_1 A, ..., g_r, g_r A) is a Z-basis."""
    n = sp.dim
    r = n // 2
    A = [list(row) for row in sp.A]
    # Q(alpha)-basis f_k picked greedily from the standard basis
    fs: list[list[int]] = []
    rows: list[list[int]] = []
    for i in range(n):
        e = [int(i == j) for j in range(n)]
        eA = list(A[i])
        trial = rows + [e, eA]
        if la.int_det(la.matmul(trial, la.transpose(trial))) != 0:
            fs.append(e)
            rows = trial
        if len(fs) == r:
            break
    if len(fs) != r:
        raise NoFreeBasis("could not find a Q(alpha)-basis")
    inv = la.rational_inverse(rows)
    coeffs = []
    for i in range(n):
        e = [int(i == j) for j in range(n)]
        c = la.matmul([e], inv)[0]
        coeffs.append([ZAlpha(c[2 * k], c[2 * k + 1]) for k in range(r)])
    d = 1
    for row in coeffs:
        for x in row:
            d = lcm(d, x.a.denominator, x.b.denominator)
    H = za.hermite_rows([[x * d for x in row] for row in coeffs])
    if len(H) != r:
        raise NoFreeBasis("module reduction did not give a basis")
    basis = []
    for row in H:
        v = [Fraction(0)] * n
        for k, x in enumerate(row):
            # (a + b alpha) f_k = a f_k + b f_k A
            fk, fkA = rows[2 * k], rows[2 * k + 1]
            for j in range(n):
                v[j] += (x.a * fk[j] + x.b * fkA[j]) / d
        basis.append(v)
    ints = la.to_int_rows(basis)
    full = []
    for g in ints:
        full.append(g)
        full.append([sum(g[k] * A[k][j] for k in range(n)) for j in range(n)])
    if abs(la.int_det(full)) != 1:
        raise NoFreeBasis("reduced generators do not form a Z[alpha]-basis")
    return _shorten(sp, ints)


def _shorten(sp: StructurePair, ints: list[list[int]]) -> list[list[int]]:
    """Replace long g_k by short vectors v = +-g_k + (Z[alpha]-span of the others).

    The units of Z[alpha] are +-1, so v keeps the basis property exactly
    when its coordinates on the pair (g_k, g_k A) are (+-1, 0).
    """
    F = _mat(sp.F)
    A = _mat(sp.A)
    g = _mat(ints)
    norms = [int(x) for x in np.einsum("ij,jk,ik->i", g, F, g)]
    m = min(norms)
    if max(norms) == m:
        return ints
    rep = short_vectors(IntegerLattice(la.to_int_rows(sp.F)), m)
    vecs = rep.vectors[np.einsum("ij,jk,ik->i", rep.vectors, F.astype(np.int64), rep.vectors) == m]
    out = [list(r) for r in ints]
    for k in sorted(range(len(out)), key=lambda i: -norms[i]):
        if norms[k] == m:
            continue
        full = []
        for r in out:
            full.append(r)
            full.append([int(x) for x in _mat([r]).dot(A)[0]])
        # coordinates = vecs * full^-1, computed exactly via the adjugate scale
        inv = la.rational_inverse(full)
        d = la.common_denominator(inv)
        inv_i = np.array([[int(x * d) for x in row] for row in inv], dtype=object)
        cols = inv_i[:, 2 * k:2 * k + 2]
        c = vecs.astype(object).dot(cols)
        hit = np.flatnonzero((np.abs(c[:, 0]) == d) & (c[:, 1] == 0))
        if len(hit):
            v = vecs[hit[0]] * (1 if c[hit[0], 0] > 0 else -1)
            out[k] = [int(x) for x in v]
    full = []
    for r in out:
        full += [r, [int(x) for x in _mat([r]).dot(A)[0]]]
    if abs(la.int_det(full)) != 1:
        raise NoFreeBasis("shortened generators lost the basis property")
    return out


def hermitian_from_structure(L: IntegerLattice, sp: StructurePair, s=S_GAMMA,
                             basis: list[list[int]] | None = None) -> HermitianLattice:
    """The Hermitian lattice (L, h) with (x, y) = s * trace(h(x, y))."""
    s = Fraction(s)
    if tuple(tuple(int(x) for x in r) for r in L.gram) != sp.F:
        raise DimensionMismatch("structure Gram differs from the lattice Gram")
    if not validate_structure(sp):
        raise InvalidWitness("structure pair fails its identities")
    g = hermitian_basis(sp) if basis is None else basis
    F = _mat(sp.F)
    A = _mat(sp.A)
    G = _mat(g)
    xy = G.dot(F).dot(G.T)
    axy = G.dot(A).dot(F).dot(G.T)
    r = len(g)
    h = []
    for i in range(r):
        row = []
        for j in range(r):
            a = Fraction(int(xy[i, j])) / s
            b = Fraction(int(axy[i, j])) / s
            row.append(ZAlpha((3 * a + b) / 7, (a - 2 * b) / 7))
        h.append(row)
    P = HermitianLattice(h, label=f"H({L.label})" if L.label else "")
    object.__setattr__(P, "zbasis", tuple(tuple(r) for r in g))
    return P


# -- isometry searches --------------------------------------------------------

def _semilinear_search(F: np.ndarray, g: np.ndarray, A_src: np.ndarray, A_dst: np.ndarray,
                       budget: int, find_all: bool, vectors: dict | None = None):
    """Maps phi with phi(g_i) = y_i, phi(g_i A_src) = y_i A_dst preserving F.

    Returns the list of image matrices Y0 (rows y_i).
    """
    r = len(g)
    L = IntegerLattice(F.tolist())
    gA = g @ A_src
    targets = {}
    for i in range(r):
        nrm = int(g[i] @ F @ g[i])
        if nrm not in targets:
            if vectors is not None and nrm in vectors:
                vv = vectors[nrm]
            else:
                rep = short_vectors(L, nrm)
                vv = np.concatenate([rep.vectors, -rep.vectors])
                keep = np.einsum("ij,jk,ik->i", vv, F, vv) == nrm
                vv = vv[keep]
            targets[nrm] = vv
    gram_gg = g @ F @ g.T
    gram_ag = gA @ F @ g.T
    levels = []
    for i in range(r):
        c = targets[int(g[i] @ F @ g[i])]
        cA = c @ A_dst
        keep = np.einsum("ij,jk,ik->i", cA, F, c) == gram_ag[i, i]
        levels.append((c[keep], (c[keep] @ F), (cA[keep] @ F)))
    # forward checking: choosing y_i prunes every open level, and the open
    # level with the fewest survivors is branched on next
    found = []
    chosen: dict[int, int] = {}
    nodes = 0

    def prune(alive, i, y):
        yA = y @ A_dst
        out = {}
        for k, idx in alive.items():
            _, cF, cAF = levels[k]
            m = ((cF[idx] @ y == gram_gg[k, i]) & (cAF[idx] @ y == gram_ag[k, i])
                 & (cF[idx] @ yA == gram_ag[i, k]))
            if not m.any():
                return None
            out[k] = idx[m]
        return out

    def rec(alive):
        nonlocal nodes
        if not alive:
            found.append(np.array([levels[k][0][chosen[k]] for k in range(r)]))
            return not find_all
        i = min(alive, key=lambda k: len(alive[k]))
        rest = {k: v for k, v in alive.items() if k != i}
        for idx in alive[i]:
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded_(nodes)
            nxt = prune(rest, i, levels[i][0][idx])
            if nxt is None:
                continue
            chosen[i] = idx
            if rec(nxt):
                return True
            del chosen[i]
        return False

    rec({k: np.arange(len(levels[k][0])) for k in range(r)})
    return found


class BudgetExceeded_(RuntimeError):
    pass


def _full_map(g: np.ndarray, Y0: np.ndarray, A_src: np.ndarray, A_dst: np.ndarray) -> np.ndarray:
    """Integral matrix X with g_i X = y_i and (g_i A_src) X = y_i A_dst."""
    src = np.empty((2 * len(g), g.shape[1]), dtype=object)
    dst = np.empty_like(src)
    for i in range(len(g)):
        src[2 * i] = g[i]
        src[2 * i + 1] = g[i] @ A_src
        dst[2 * i] = Y0[i]
        dst[2 * i + 1] = Y0[i] @ A_dst
    X = la.matmul(la.rational_inverse(src.tolist()), dst.tolist())
    return np.array(la.to_int_rows(X), dtype=np.int64)


def hermitian_automorphisms(P: HermitianLattice, budget: int = 10_000_000,
                            s=S_TRACE) -> tuple[int, list[np.ndarray]]:
    """Order and generators of Aut_{Z[alpha]}(P), as matrices on the trace basis."""
    if P.rank > 4:
        raise RankTooLarge("hermitian_automorphisms is limited to rank <= 4")
    L = trace_lattice(P, s)
    ints, d = L._scaled
    F = np.array(ints, dtype=np.int64)
    A = np.array(alpha_action(P.rank), dtype=np.int64)
    g = np.eye(2 * P.rank, dtype=np.int64)[::2]
    try:
        maps = _semilinear_search(F, g, A, A, budget, True)
    except BudgetExceeded_ as exc:
        raise BudgetExceeded_(f"automorphism search exceeded {budget} nodes") from exc
    mats = [_full_map(g, Y0, A, A) for Y0 in maps]
    return len(mats), _generators(mats)


def _generators(elements: list[np.ndarray]) -> list[np.ndarray]:
    """A small generating set, chosen greedily."""
    if not elements:
        return []
    n = elements[0].shape[0]
    ident = np.eye(n, dtype=np.int64)
    key = lambda m: m.tobytes()
    group = {key(ident): ident}
    gens: list[np.ndarray] = []
    for e in elements:
        if key(e) in group:
            continue
        gens.append(e)
        frontier = list(group.values())
        while frontier:
            new = []
            for x in frontier:
                for gen in gens:
                    y = x @ gen
                    k = key(y)
                    if k not in group:
                        group[k] = y
                        new.append(y)
            frontier = new
        if len(group) == len(elements):
            break
    return gens


GALOIS_DATA = "leech_galois_Y.txt"


def shipped_galois_isometry(sp: StructurePair) -> np.ndarray | None:
    """The stored Y for the shipped Leech structure, or None if it does not fit sp."""
    path = resources.files("gamma72") / "data" / GALOIS_DATA
    Y, rest = parse_matrix(path.read_text().splitlines())
    if any(ln.strip() for ln in rest) or not la.is_integral(Y) or len(Y) != sp.dim:
        return None
    Y = np.array(la.to_int_rows(Y), dtype=np.int64)
    try:
        check_galois_witness(sp, Y)
    except InvalidWitness:
        return None
    return Y


def find_galois_isometry(L: IntegerLattice, sp: StructurePair, budget: int = 1_000_000,
                         basis: list[list[int]] | None = None,
                         vectors: dict | None = None, use_data: bool = True) -> np.ndarray:
    """Integral Y with Y F Y^T = F and Y A Y^-1 = 1 - A.

    In dimension 24 the stored witness is tried first (the search takes
    about ten minutes there); it is only returned after it is rechecked.
    """
    if use_data and sp.dim == 24:
        Y = shipped_galois_isometry(sp)
        if Y is not None:
            return Y
    F = _mat(sp.F).astype(np.int64)
    A = np.array(sp.A, dtype=np.int64)
    B = np.eye(sp.dim, dtype=np.int64) - A
    g = np.array(hermitian_basis(sp) if basis is None else basis, dtype=np.int64)
    # phi(x B) = phi(x) A; with g_i B = g_i - g_i A this is phi(g_i A) = phi(g_i) B
    try:
        maps = _semilinear_search(F, g, A, B, budget, False, vectors)
    except BudgetExceeded_ as exc:
        raise NotFound("Galois isometry search budget exhausted") from exc
    if not maps:
        raise NotFound("no Galois isometry exists")
    Y = _full_map(g, maps[0], A, B)
    check_galois_witness(sp, Y)
    return Y


def check_galois_witness(sp: StructurePair, Y) -> None:
    F, A = _mat(sp.F), _mat(sp.A)
    Y = _mat(np.asarray(Y).tolist())
    B = _mat(sp.B())
    if not np.array_equal(Y.dot(F).dot(Y.T), F):
        raise InvalidWitness("Y F Y^T != F")
    if not np.array_equal(Y.dot(A), B.dot(Y)):
        raise InvalidWitness("Y A Y^-1 != 1 - A")


def gamma_block_basis(sp: StructurePair) -> np.ndarray:
    """T = (1, 1, A; 0, B, B; 0, 0, 2), a basis of Gamma in L^3 coordinates
    (ambient Gram (1/2) diag(F, F, F))."""
    A = np.array(sp.A, dtype=np.int64)
    B = np.array(sp.B(), dtype=np.int64)
    one = np.eye(sp.dim, dtype=np.int64)
    Z = np.zeros_like(one)
    return np.block([[one, one, A], [Z, B, B], [Z, Z, 2 * one]])


def build_galois_block(sp: StructurePair, Y) -> np.ndarray:
    """The 3x3 block matrix (Y, -Y, AY; 0, -BY, Y; -AY, 0, Y).

    It acts on coordinates with respect to the block basis T and is checked
    to preserve the Gram matrix T (1/2) diag(F, F, F) T^T of Gamma.
    """
    check_galois_witness(sp, Y)
    A = np.array(sp.A, dtype=np.int64)
    B = np.array(sp.B(), dtype=np.int64)
    Y = np.asarray(Y, dtype=np.int64)
    Z = np.zeros_like(Y)
    X = np.block([[Y, -Y, A @ Y], [Z, -B @ Y, Y], [-A @ Y, Z, Y]])
    T = _mat(gamma_block_basis(sp).tolist())
    F3 = _mat(np.kron(np.eye(3, dtype=np.int64), np.array(sp.F, dtype=np.int64)).tolist())
    G2 = T.dot(F3).dot(T.T)  # twice the Gram of Gamma
    Xo = _mat(X.tolist())
    if not np.array_equal(Xo.dot(G2).dot(Xo.T), G2):
        raise InvalidWitness("block matrix does not preserve the Gram matrix of Gamma")
    return X


# -- structure file format ----------------------------------------------------

def format_structure(sp: StructurePair) -> str:
    return format_gram(sp.F) + "STRUCTURE\n" + format_gram(sp.A)


def parse_structure(text: str) -> StructurePair:
    lines = text.splitlines()
    F, rest = parse_matrix(lines)
    while rest and not rest[0].strip():
        rest.pop(0)
    if not rest or rest[0].strip() != "STRUCTURE":
        raise LatticeError("missing STRUCTURE separator")
    A, rest = parse_matrix(rest[1:])
    if any(ln.strip() for ln in rest):
        raise LatticeError("trailing data after structure matrix")
    if not (la.is_integral(F) and la.is_integral(A)):
        raise LatticeError("structure matrices must be integral")
    sp = StructurePair(la.to_int_rows(F), la.to_int_rows(A))
    if len(sp.F) != len(sp.A):
        raise DimensionMismatch("F and A differ in size")
    if not validate_structure(sp):
        raise InvalidWitness("structure file fails A F A^T = 2F / F-adjoint identities")
    return sp


def read_structure(path: str | Path) -> StructurePair:
    return parse_structure(Path(path).read_text())


def write_structure(sp: StructurePair, path: str | Path) -> None:
    Path(path).write_text(format_structure(sp))
