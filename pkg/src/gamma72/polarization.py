"""The quadratic space L/2L over F2, polarizations, Construction I and
Kneser 2-neighbours.

Vectors of L/2L are Python ints used as bit masks: bit i is the parity of
coordinate i in the basis of L.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import _linalg as la
from .hermitian import StructurePair, validate_structure
from .lattice import IntegerLattice, LatticeError, is_even, is_unimodular


class NotEvenUnimodular(LatticeError):
    pass


class Degenerate(ValueError):
    pass


class DefectOne(ValueError):
    pass


class InvariantFailure(LatticeError):
    pass


class WNotAdmissible(LatticeError):
    pass


def _parity(x: int) -> int:
    return bin(x).count("1") & 1


def _bits(x: int, n: int) -> list[int]:
    return [(x >> i) & 1 for i in range(n)]


def _mask(v) -> int:
    out = 0
    for i, x in enumerate(v):
        if int(x) & 1:
            out |= 1 << i
    return out


# -- F2 linear algebra on bit masks ---------------------------------------------

def f2_echelon(vectors) -> list[int]:
    """Reduced basis of the span; each basis vector owns its highest bit."""
    basis: dict[int, int] = {}
    for v in vectors:
        v = int(v)
        while v:
            h = v.bit_length() - 1
            if h not in basis:
                basis[h] = v
                break
            v ^= basis[h]
    return [basis[h] for h in sorted(basis)]


def f2_reduce(basis: list[int], v: int) -> int:
    """v reduced against an echelon basis (0 iff v is in the span)."""
    for b in sorted(basis, key=lambda x: -x.bit_length()):
        if v >> (b.bit_length() - 1) & 1:
            v ^= b
    return v


def f2_rank(vectors) -> int:
    return len(f2_echelon(vectors))


def f2_in_span(basis: list[int], v: int) -> bool:
    return f2_reduce(f2_echelon(basis), v) == 0


def f2_coordinates(basis: list[int], n: int) -> list[int]:
    """Inverse of the n x n matrix whose rows are ``basis``.

    Returns masks r_j with: bit i of r_j is the coefficient of basis[i] in e_j.
    A vector x has coefficient vector XOR_{j in x} r_j.
    """
    rows = [[basis[i], 1 << i] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][0] >> col & 1), None)
        if piv is None:
            raise ValueError("vectors are linearly dependent")
        rows[col], rows[piv] = rows[piv], rows[col]
        for r in range(n):
            if r != col and rows[r][0] >> col & 1:
                rows[r][0] ^= rows[col][0]
                rows[r][1] ^= rows[col][1]
    return [rows[j][1] for j in range(n)]


# -- the quadratic space ----------------------------------------------------------

@dataclass(frozen=True)
class F2QuadSpace:
    """(V, q) with q(x) = Q(lift x) mod 2 and b(x, y) = (lift x, lift y) mod 2.

    ``diag`` holds the bits Q(e_i) mod 2, ``rows`` the masks of b(e_i, .),
    ``upper`` the masks {j > i : b(e_i, e_j) = 1}.
    """

    dim: int
    diag: int
    rows: tuple[int, ...]
    upper: tuple[int, ...]
    lattice: IntegerLattice | None = None

    @classmethod
    def from_forms(cls, q_basis, b_matrix, lattice=None) -> "F2QuadSpace":
        n = len(b_matrix)
        rows = tuple(_mask(r) for r in b_matrix)
        upper = tuple(rows[i] & ~((1 << (i + 1)) - 1) for i in range(n))
        return cls(n, _mask(q_basis), rows, upper, lattice)

    def b(self, x: int, y: int) -> int:
        s = 0
        i = 0
        while x:
            if x & 1:
                s ^= _parity(self.rows[i] & y)
            x >>= 1
            i += 1
        return s

    def q(self, x: int) -> int:
        s = _parity(self.diag & x)
        i = 0
        y = x
        while y:
            if y & 1:
                s ^= _parity(self.upper[i] & x)
            y >>= 1
            i += 1
        return s

    def is_nondegenerate(self) -> bool:
        return f2_rank(self.rows) == self.dim

    def elements(self):
        return range(1 << self.dim)


def mod2_space(L: IntegerLattice) -> F2QuadSpace:
    if not (is_even(L) and is_unimodular(L)):
        raise NotEvenUnimodular("L/2L carries a quadratic form only for even unimodular L")
    G = L.int_gram()
    n = L.rank
    return F2QuadSpace.from_forms([int(G[i, i]) // 2 for i in range(n)],
                                  [[int(G[i, j]) for j in range(n)] for i in range(n)], L)


def _complement(space: F2QuadSpace, basis: list[int], e: int, f: int) -> list[int]:
    # projection onto <e, f>^perp for a hyperbolic pair b(e, f) = 1
    out = []
    for v in basis:
        w = v
        if space.b(w, f):
            w ^= e
        if space.b(w, e):
            w ^= f
        out.append(w)
    return f2_echelon(out)


def _span_elements(basis: list[int]):
    """Elements of the span ordered by their coefficient vectors."""
    for c in range(1, 1 << len(basis)):
        v = 0
        for i, b in enumerate(basis):
            if c >> i & 1:
                v ^= b
        yield v


def _hyperbolic_pair(space: F2QuadSpace, basis: list[int], want_isotropic: bool):
    e = None
    if want_isotropic:
        e = next((v for v in _span_elements(basis) if space.q(v) == 0), None)
        if e is None:
            raise DefectOne("subspace has no isotropic vector")
    else:
        e = basis[0]
    f = next((v for v in _span_elements(basis) if space.b(e, v)), None)
    if f is None:
        raise Degenerate("form is degenerate")
    if want_isotropic and space.q(f):
        f ^= e  # q(f + e) = q(f) + q(e) + b(e, f) = 0
    return e, f


def symplectic_basis(space: F2QuadSpace) -> list[tuple[int, int]]:
    if space.dim % 2:
        raise Degenerate("odd-dimensional space")
    basis = f2_echelon(1 << i for i in range(space.dim))
    pairs = []
    while basis:
        e, f = _hyperbolic_pair(space, basis, False)
        pairs.append((e, f))
        basis = _complement(space, basis, e, f)
    return pairs


def witt_defect(space: F2QuadSpace) -> int:
    """Arf invariant sum q(e_i) q(f_i) over a symplectic basis."""
    if not space.is_nondegenerate():
        raise Degenerate("form is degenerate")
    return sum(space.q(e) * space.q(f) for e, f in symplectic_basis(space)) % 2


def isotropic_complement_pair(space: F2QuadSpace, seed: int = 0) -> tuple[list[int], list[int]]:
    """Maximal totally isotropic U, V with U + V the whole space.

    Repeatedly takes the smallest isotropic vector (in the current basis
    order) and an isotropic partner.  ``seed`` != 0 first scrambles the
    basis of the space with a random invertible transformation.
    """
    if witt_defect(space) != 0:
        raise DefectOne("Witt defect 1: no polarization exists")
    n = space.dim
    basis = [1 << i for i in range(n)]
    if seed:
        rng = random.Random(seed)
        while True:
            cand = [rng.getrandbits(n) for _ in range(n)]
            if f2_rank(cand) == n:
                basis = cand
                break
    U: list[int] = []
    V: list[int] = []
    while basis:
        e, f = _hyperbolic_pair(space, basis, True)
        U.append(e)
        V.append(f)
        basis = _complement(space, basis, e, f)
    return U, V


# -- polarizations ------------------------------------------------------------------

def _preimage_basis(vectors: list[int], n: int) -> list[list[int]]:
    gens = [_bits(v, n) for v in vectors]
    return la.hnf(gens, modulus=2)


def sublattice(L: IntegerLattice, coords, label: str = "") -> IntegerLattice:
    """Sublattice of L given by integral coordinate rows; its ambient space
    is L's coordinate space with Gram L.gram."""
    return IntegerLattice.from_basis([list(map(int, r)) for r in coords], L.gram, label=label)


@dataclass(frozen=True)
class Polarization:
    """2L <= M, N <= L with M/2L, N/2L complementary maximal isotropic.

    M and N carry bases in L-coordinates (ambient Gram = Gram of L).
    """

    L: IntegerLattice
    M: IntegerLattice
    N: IntegerLattice

    def __post_init__(self):
        check_polarization(self)

    @property
    def dim(self) -> int:
        return self.L.rank

    def m_rows(self) -> list[list[int]]:
        return [[int(x) for x in r] for r in self.M.basis]

    def n_rows(self) -> list[list[int]]:
        return [[int(x) for x in r] for r in self.N.basis]

    def U(self) -> list[int]:
        return f2_echelon(_mask(r) for r in self.m_rows())

    def V(self) -> list[int]:
        return f2_echelon(_mask(r) for r in self.n_rows())

    def half(self, which: str) -> IntegerLattice:
        """(M, Q/2) or (N, Q/2) on the stored basis."""
        X = self.M if which == "M" else self.N
        return IntegerLattice([[x / 2 for x in r] for r in X.gram], label=f"({which},Q/2)")


def check_polarization(pol: Polarization) -> None:
    L, n = pol.L, pol.L.rank
    space = mod2_space(L)
    if n % 2:
        raise InvariantFailure("dimension must be even")
    for name, X in (("M", pol.M), ("N", pol.N)):
        if X.rank != n:
            raise InvariantFailure(f"{name} has rank {X.rank}, expected {n}")
        rows = [[int(x) for x in r] for r in X.basis]
        if any(Fraction(x).denominator != 1 for r in X.basis for x in r):
            raise InvariantFailure(f"{name} is not contained in L")
        img = f2_echelon(_mask(r) for r in rows)
        if len(img) != n // 2:
            raise InvariantFailure(f"{name}/2L has dimension {len(img)}, expected {n // 2}")
        if abs(la.int_det(rows)) != 2 ** (n // 2):
            raise InvariantFailure(f"[L:{name}] != 2^{n // 2}, so {name} does not contain 2L")
        if any(space.q(v) for v in img) or any(space.b(v, w) for v in img for w in img):
            raise InvariantFailure(f"{name}/2L is not totally isotropic")
        half = pol.half(name)
        if not (is_even(half) and is_unimodular(half)):
            raise InvariantFailure(f"({name}, Q/2) is not even unimodular")
    if f2_rank(pol.U() + pol.V()) != n:
        raise InvariantFailure("M/2L and N/2L intersect nontrivially")


def preimages(space: F2QuadSpace, U: list[int], V: list[int]) -> Polarization:
    L = space.lattice
    if L is None:
        raise ValueError("space has no source lattice")
    n = space.dim
    M = sublattice(L, _preimage_basis(U, n), "M")
    N = sublattice(L, _preimage_basis(V, n), "N")
    return Polarization(L, M, N)


def polarization_from_structure(L: IntegerLattice, sp: StructurePair) -> Polarization:
    """M = alpha L (rows of A), N = beta L (rows of 1 - A)."""
    if not validate_structure(sp):
        raise InvariantFailure("structure fails A F A^T = 2F, F A^T = (1 - A) F or A^2 - A + 2 = 0")
    if [[Fraction(x) for x in r] for r in sp.F] != [list(r) for r in L.gram]:
        raise InvariantFailure("structure Gram differs from the lattice Gram")
    M = sublattice(L, la.hnf(sp.A), "alpha L")
    N = sublattice(L, la.hnf(sp.B()), "beta L")
    return Polarization(L, M, N)


# -- Construction I ---------------------------------------------------------------

def construction_I_basis(pol: Polarization, k: int) -> list[list[int]]:
    """Basis (in L^k coordinates) of L(M, N, k)."""
    if k < 1:
        raise ValueError("k must be at least 1")
    n = pol.dim
    gens = []
    for y in pol.n_rows():
        gens.append(y * k)
    for m in pol.m_rows():
        for i in range(k - 1):
            v = [0] * (n * k)
            v[i * n:(i + 1) * n] = m
            v[(i + 1) * n:(i + 2) * n] = [-x for x in m]
            gens.append(v)
    # 2L^k is contained in the lattice, so reduce modulo 2
    return la.hnf(gens, modulus=2)


def construction_ambient(L: IntegerLattice, k: int) -> list[list[Fraction]]:
    n = L.rank
    amb = [[Fraction(0)] * (n * k) for _ in range(n * k)]
    for b in range(k):
        for i in range(n):
            for j in range(n):
                amb[b * n + i][b * n + j] = L.gram[i][j] / 2
    return amb


def construction_I(pol: Polarization, k: int, *, verify: bool = True) -> IntegerLattice:
    """L(M, N, k) with form (1/2) sum (v_i, v_i)."""
    basis = construction_I_basis(pol, k)
    if len(basis) != pol.dim * k:
        raise InvariantFailure("generators of L(M,N,k) do not have full rank")
    out = _gram_lattice(basis, construction_ambient(pol.L, k), f"L(M,N,{k})")
    if verify and not (is_even(out) and is_unimodular(out)):
        raise InvariantFailure(f"L(M,N,{k}) is not even unimodular")
    return out


def _gram_lattice(basis, amb, label) -> IntegerLattice:
    import numpy as np
    B = np.array(basis, dtype=object)
    ints, d = la.scaled_integer(amb)
    G = B.dot(ints).dot(B.T)
    gram = [[Fraction(int(x), d) for x in row] for row in G]
    return IntegerLattice(gram, basis=basis, ambient_gram=amb, label=label, _check=False)._validated()


# -- Kneser 2-neighbours ------------------------------------------------------------

def form_scale(M: IntegerLattice) -> Fraction:
    """Generator of the ideal spanned by the Gram entries of M."""
    num = 0
    den = 1
    for r in M.gram:
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
    for r in M.gram:
        for x in r:
            num = gcd(num, int(x * den))
    return Fraction(num, den)


def neighbor_2(M: IntegerLattice, w) -> IntegerLattice:
    """M^w = M_w + Zw with M_w = {m in M : (m, w) in sZ}, s the scale of M.

    ``w`` is given in M's ambient coordinates and must satisfy 2w in M and
    w not in M.  M^w must stay integral if M is, and even if M is even.
    """
    if M.basis is None:
        raise WNotAdmissible("M needs an ambient basis")
    s = form_scale(M)
    n = M.rank
    w = [Fraction(x) for x in w]
    c = la.solve_left(M.basis, w)
    if c is None:
        raise WNotAdmissible("w is not in the span of M")
    c2 = [2 * x for x in c]
    if any(x.denominator != 1 for x in c2):
        raise WNotAdmissible("2w is not in M")
    if all(x.denominator == 1 for x in c):
        raise WNotAdmissible("w lies in M")
    amb = M.ambient_gram
    aw = [sum((amb[i][j] * w[j] for j in range(len(w)) if w[j]), Fraction(0)) for i in range(len(w))]
    ww = sum((a * b for a, b in zip(w, aw)), Fraction(0))
    pairs = []
    for b in M.basis:
        p = 2 * sum((x * y for x, y in zip(b, aw)), Fraction(0)) / s
        assert p.denominator == 1  # since 2w lies in M
        pairs.append(int(p) % 2)
    odd = [i for i in range(n) if pairs[i]]
    if not odd:
        raise WNotAdmissible("(m, w) lies in sZ for all m, so M_w = M")
    if M.is_integral and ww.denominator != 1:
        raise WNotAdmissible("(w, w) is not integral")
    if is_even(M) and ww.numerator % 2:
        raise WNotAdmissible("(w, w) is odd but M is even")
    j0 = odd[0]
    gens = []
    for i in range(n):
        e = [0] * n
        e[i] = 2
        if i == j0:
            e[i] = 4
        elif pairs[i]:
            e[j0] += 2
        gens.append(e)
    gens.append([int(x) for x in c2])
    coords2 = la.hnf(gens, modulus=4)
    if len(coords2) != n:
        raise WNotAdmissible("neighbour generators are degenerate")
    coords = [[Fraction(x, 2) for x in r] for r in coords2]
    basis = la.matmul(coords, M.basis)
    out = IntegerLattice.from_basis(basis, amb, label=f"{M.label}^w")
    if out.det != M.det:
        raise WNotAdmissible("neighbour has a different determinant")
    if M.is_integral and not out.is_integral:
        raise WNotAdmissible("M^w is not integral")
    return out
