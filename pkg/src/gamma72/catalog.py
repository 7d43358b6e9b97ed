"""Built-in lattices: E8, the Leech lattice, the Barnes lattice and Gamma."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable

from . import _linalg as la
from .lattice import IntegerLattice, is_even, is_unimodular
from .zalpha import ZAlpha

# Cyclic [23,12,7] binary Golay code with generator polynomial
# g(x) = 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11 (MacWilliams-Sloane, ch. 16 sec. 2),
# extended by an overall parity bit in position 23.
GOLAY_POLY = (0, 2, 4, 5, 6, 10, 11)


class SelfCheckFailed(AssertionError):
    pass


def golay_generator() -> list[list[int]]:
    rows = []
    for shift in range(12):
        row = [0] * 24
        for e in GOLAY_POLY:
            row[e + shift] = 1
        row[23] = sum(row[:23]) % 2
        rows.append(row)
    return rows


def golay_codewords() -> list[tuple[int, ...]]:
    gen = golay_generator()
    words = []
    for bits in itertools.product((0, 1), repeat=12):
        w = [0] * 24
        for b, row in zip(bits, gen):
            if b:
                w = [x ^ y for x, y in zip(w, row)]
        words.append(tuple(w))
    return words


def golay_weight_distribution() -> dict[int, int]:
    dist: dict[int, int] = {}
    for w in golay_codewords():
        k = sum(w)
        dist[k] = dist.get(k, 0) + 1
    return dict(sorted(dist.items()))


def _check(cond: bool, what: str) -> None:
    if not cond:
        raise SelfCheckFailed(what)


def build_e8() -> IntegerLattice:
    """E8 from its Cartan matrix (Bourbaki labelling, branch node 4)."""
    edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)]
    g = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        g[i][j] = g[j][i] = -1
    L = IntegerLattice(g, label="E8")
    _check(is_even(L) and is_unimodular(L), "E8 must be even unimodular")
    return L


def leech_generators() -> list[list[int]]:
    """Generators of sqrt(8)*Leech inside Z^24."""
    gens = [[2 * x for x in row] for row in golay_generator()]
    for i in range(23):
        gens.append([4 if j == i else (-4 if j == i + 1 else 0) for j in range(24)])
    gens.append([8] + [0] * 23)
    gens.append([-3] + [1] * 23)
    return gens


def build_leech(verify: bool = True) -> IntegerLattice:
    """The Leech lattice from the extended Golay code, scaled to minimum 4."""
    basis = la.hnf(leech_generators(), modulus=8)
    amb = [[Fraction(int(i == j), 8) for j in range(24)] for i in range(24)]
    L = IntegerLattice.from_basis(basis, amb, label="Leech")
    if verify:
        from .enumeration import short_vectors
        _check(is_even(L), "Leech must be even")
        _check(is_unimodular(L), "Leech must be unimodular")
        rep = short_vectors(L, 4, collect=False)
        _check(rep.count(2) == 0, "Leech has no roots")
        _check(rep.count(4) == 196560, "Leech kissing number is 196560")
    return L


@dataclass
class CatalogEntry:
    name: str
    builder: Callable[[], object]
    expected: dict = field(default_factory=dict)


def data_path(name: str) -> Path:
    return Path(str(resources.files("gamma72") / "data" / name))


# -- Barnes and Gamma ---------------------------------------------------------

LEECH_STRUCTURE = "leech_structure.txt"


def build_barnes():
    from .hermitian import barnes, hermitian_dual, same_module, trace_lattice
    P = barnes()
    _check(P.is_integral, "Barnes Hermitian Gram must be integral")
    _check(trace_lattice(P, 1).det == 343, "L(P_b, 1) has determinant 7^3")
    _check(same_module(P, hermitian_dual(P)), "P_b is Hermitian unimodular")
    return P


def load_leech_structure(path: str | Path | None = None):
    """The shipped alpha-structure (F, A) on the Leech lattice, validated."""
    from .hermitian import read_structure, validate_structure
    sp = read_structure(data_path(LEECH_STRUCTURE) if path is None else path)
    _check(sp.dim == 24, "structure must live on a 24-dimensional lattice")
    _check(validate_structure(sp), "structure fails A F A^T = 2F, F A^T = (1 - A) F, A^2 - A + 2 = 0")
    L = sp.lattice("Leech")
    _check(is_even(L) and is_unimodular(L), "structure Gram must be even unimodular")
    return sp


def _act(c, g, A):
    """(a + b alpha) g for g in L-coordinates, alpha acting by A on rows."""
    gA = [sum(g[k] * A[k][j] for k in range(len(g))) for j in range(len(g))]
    return [c.a * x + c.b * y for x, y in zip(g, gA)]


def tensor_embedding(sp, P, Pb) -> list[list[Fraction]]:
    """Rows of trace_lattice(P (x) Pb) in L^3 coordinates.

    The tensor basis g_i (x) b_j is sent to (b_j1 g_i, b_j2 g_i, b_j3 g_i),
    followed by its alpha multiple, matching the trace-lattice ordering.
    """
    A = [list(r) for r in sp.A]
    rows = []
    for g in P.zbasis:
        for b in Pb.basis:
            for p in (ZAlpha(1), ZAlpha(0, 1)):
                v = []
                for c in b:
                    v += _act(p * c, list(g), A)
                rows.append(v)
    return rows


@dataclass
class GammaBuild:
    tensor: IntegerLattice
    construction: IntegerLattice
    swapped: IntegerLattice
    same_as_swapped: bool

    def lines(self) -> list[str]:
        return [f"gamma_dim: {self.tensor.rank}",
                f"gamma_det_tensor: {self.tensor.det}",
                f"gamma_det_construction_I: {self.construction.det}",
                f"gamma_even: {str(is_even(self.tensor)).lower()}",
                f"gamma_unimodular: {str(is_unimodular(self.tensor)).lower()}",
                f"tensor_equals_L(N,M,3): {str(self.same_as_swapped).lower()}"]


def build_gamma(structure: str | Path | None = None, *, full: bool = False):
    """Gamma = L(Leech (x) P_b, 1/7) from the shipped structure.

    Chains hermitian_from_structure, hermitian_tensor with the Barnes
    lattice and trace_lattice at s = 1/7, then cross-builds L(M, N, 3)
    from the induced polarization.  The tensor lattice is also embedded
    in L^3 and compared with L(N, M, 3) as a set.  With ``full`` a
    GammaBuild holding all three lattices is returned.
    """
    from .hermitian import S_GAMMA, hermitian_from_structure, hermitian_tensor, trace_lattice
    from .polarization import Polarization, construction_I, construction_ambient, polarization_from_structure

    sp = load_leech_structure(structure)
    L = sp.lattice("Leech")
    P = hermitian_from_structure(L, sp, S_GAMMA)
    Pb = build_barnes()
    G = trace_lattice(hermitian_tensor(P, Pb), S_GAMMA)
    _check(G.rank == 72, "Gamma must have dimension 72")
    _check(is_even(G), "Gamma must be even")
    _check(is_unimodular(G), "Gamma must be unimodular")

    emb = tensor_embedding(sp, P, Pb)
    amb = construction_ambient(L, 3)
    _check(la.matmul(la.matmul(emb, amb), la.transpose(emb)) == [list(r) for r in G.gram],
           "tensor basis embedding does not reproduce the Gram of Gamma")
    emb_int = la.to_int_rows(emb)
    G = IntegerLattice(G.gram, basis=emb_int, ambient_gram=amb, label="Gamma", _check=False)

    pol = polarization_from_structure(L, sp)
    C = construction_I(pol, 3)
    _check(C.det == G.det, "tensor and Construction I determinants differ")
    swapped = construction_I(Polarization(L, pol.N, pol.M), 3)
    same = la.hnf(emb_int) == la.hnf([[int(x) for x in r] for r in swapped.basis])
    _check(same, "tensor route differs from L(N, M, 3)")
    if full:
        return GammaBuild(G, C, swapped, same)
    return G
