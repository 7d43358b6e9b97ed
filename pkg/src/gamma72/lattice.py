"""Positive definite lattices with exact rational Gram matrices."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _linalg as la


class LatticeError(ValueError):
    """Invalid lattice data."""


class NotASublattice(LatticeError):
    pass


def _freeze(rows) -> tuple[tuple[Fraction, ...], ...]:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


@dataclass(frozen=True, eq=False)
class IntegerLattice:
    """A lattice given by the Gram matrix of a basis.

    ``basis`` (optional) expresses the basis vectors in an ambient space
    whose Gram matrix is ``ambient_gram``; the constructor checks that the
    two descriptions agree.
    """

    gram: tuple[tuple[Fraction, ...], ...]
    basis: tuple[tuple[Fraction, ...], ...] | None = None
    ambient_gram: tuple[tuple[Fraction, ...], ...] | None = None
    label: str = ""
    _check: bool = field(default=True, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "gram", _freeze(self.gram))
        n = len(self.gram)
        if n == 0 or any(len(r) != n for r in self.gram):
            raise LatticeError("Gram matrix must be square and non-empty")
        if any(self.gram[i][j] != self.gram[j][i] for i in range(n) for j in range(i)):
            raise LatticeError("Gram matrix is not symmetric")
        if self.basis is not None:
            object.__setattr__(self, "basis", _freeze(self.basis))
            if self.ambient_gram is None:
                m = len(self.basis[0])
                object.__setattr__(self, "ambient_gram", _freeze(la.identity(m)))
            else:
                object.__setattr__(self, "ambient_gram", _freeze(self.ambient_gram))
            if len(self.basis) != n:
                raise LatticeError("basis has the wrong number of rows")
        if not self._check:
            return
        minors = self.leading_minors
        if len(minors) < n or any(m <= 0 for m in minors):
            raise LatticeError("Gram matrix is not positive definite")
        if self.basis is not None:
            g = la.matmul(la.matmul(self.basis, self.ambient_gram), la.transpose(self.basis))
            if _freeze(g) != self.gram:
                raise LatticeError("basis * ambient_gram * basis^T differs from gram")

    @classmethod
    def from_basis(cls, basis, ambient_gram=None, label: str = "") -> "IntegerLattice":
        amb = la.identity(len(basis[0])) if ambient_gram is None else ambient_gram
        g = la.matmul(la.matmul(basis, amb), la.transpose(basis))
        return cls(g, basis=basis, ambient_gram=amb, label=label, _check=False)._validated()

    def _validated(self) -> "IntegerLattice":
        minors = self.leading_minors
        if len(minors) < self.rank or any(m <= 0 for m in minors):
            raise LatticeError("Gram matrix is not positive definite")
        return self

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def _scaled(self) -> tuple[list[list[int]], int]:
        arr, d = la.scaled_integer(self.gram)
        return [list(map(int, r)) for r in arr], d

    @cached_property
    def leading_minors(self) -> list[Fraction]:
        ints, d = self._scaled
        _, minors = la.bareiss(ints)
        return [Fraction(m, d ** (k + 1)) for k, m in enumerate(minors)]

    @cached_property
    def det(self) -> Fraction:
        return self.leading_minors[-1]

    @property
    def is_integral(self) -> bool:
        return self._scaled[1] == 1

    def int_gram(self) -> np.ndarray:
        """Gram as an int64 array; raises if it is not integral."""
        ints, d = self._scaled
        if d != 1:
            raise LatticeError("Gram matrix is not integral")
        return np.array(ints, dtype=np.int64)

    def norm(self, coords: Sequence) -> Fraction:
        g = self.gram
        c = [Fraction(x) for x in coords]
        return sum((c[i] * g[i][j] * c[j] for i in range(self.rank) for j in range(self.rank)
                    if c[i] and c[j]), Fraction(0))

    def inner(self, x: Sequence, y: Sequence) -> Fraction:
        g = self.gram
        return sum((Fraction(x[i]) * g[i][j] * y[j] for i in range(self.rank)
                    for j in range(self.rank) if x[i] and y[j]), Fraction(0))

    def transform(self, t: Sequence[Sequence], label: str | None = None) -> "IntegerLattice":
        """Sublattice spanned by the rows of ``t`` (coordinates in this basis)."""
        g = la.matmul(la.matmul(t, self.gram), la.transpose(t))
        basis = None if self.basis is None else la.matmul(t, self.basis)
        return IntegerLattice(g, basis=basis, ambient_gram=self.ambient_gram,
                              label=self.label if label is None else label, _check=False)._validated()

    def gram_hash(self) -> str:
        return hashlib.sha256(format_gram(self.gram).encode()).hexdigest()[:16]

    def __eq__(self, other):
        return isinstance(other, IntegerLattice) and self.gram == other.gram

    def __hash__(self):
        return hash(self.gram)

    def __repr__(self):
        return f"IntegerLattice(rank={self.rank}, det={self.det}, label={self.label!r})"


@dataclass(frozen=True)
class LatticeVector:
    coords: tuple[int, ...]
    norm: Fraction

    @classmethod
    def of(cls, lattice: IntegerLattice, coords) -> "LatticeVector":
        c = tuple(int(x) for x in coords)
        return cls(c, lattice.norm(c))


def dual(L: IntegerLattice) -> IntegerLattice:
    """The dual lattice on the dual basis (Gram G^-1)."""
    inv = la.rational_inverse(L.gram)
    basis = None
    if L.basis is not None:
        basis = la.matmul(inv, L.basis)
    return IntegerLattice(inv, basis=basis, ambient_gram=L.ambient_gram,
                          label=f"dual({L.label})" if L.label else "", _check=False)._validated()


def is_even(L: IntegerLattice) -> bool:
    return L.is_integral and all(L.gram[i][i].numerator % 2 == 0 for i in range(L.rank))


def is_unimodular(L: IntegerLattice) -> bool:
    return L.is_integral and L.det == 1


def sublattice_index(L: IntegerLattice, S: IntegerLattice) -> int:
    """[L : S] where S is given by an ambient basis inside L's span.

    Both lattices must carry ambient bases in the same ambient space.
    """
    if L.basis is None or S.basis is None:
        raise NotASublattice("sublattice_index needs ambient bases on both lattices")
    coords = coordinates_in(L, S.basis)
    if coords is None:
        raise NotASublattice("S is not contained in L")
    r = Fraction(S.det) / L.det
    if r.denominator != 1 or isqrt(r.numerator) ** 2 != r.numerator:
        raise NotASublattice("det(S)/det(L) is not a square integer")
    idx = isqrt(r.numerator)
    if S.rank == L.rank and abs(la.int_det(coords)) != idx:
        raise NotASublattice("index disagrees with coordinate determinant")
    return idx


def coordinates_in(L: IntegerLattice, vectors) -> list[list[int]] | None:
    """Integral coordinates of ambient ``vectors`` in L's basis, or None."""
    assert L.basis is not None
    inv_basis = _pseudo_solver(L)
    out = []
    for v in vectors:
        c = inv_basis(v)
        if c is None or any(x.denominator != 1 for x in c):
            return None
        out.append([int(x) for x in c])
    return out


def _pseudo_solver(L: IntegerLattice):
    # c = v G_amb B^T G^-1 for v in span(B).
    gi = la.rational_inverse(L.gram)
    proj = la.matmul(la.matmul(L.ambient_gram, la.transpose(L.basis)), gi)
    basis = L.basis

    def solve(v):
        c = la.matmul([list(v)], proj)[0]
        back = la.matmul([c], basis)[0]
        if any(Fraction(a) != Fraction(b) for a, b in zip(back, v)):
            return None
        return c

    return solve


def orthogonal_sum(L1: IntegerLattice, L2: IntegerLattice) -> IntegerLattice:
    n1, n2 = L1.rank, L2.rank
    g = [list(r) + [0] * n2 for r in L1.gram] + [[0] * n1 + list(r) for r in L2.gram]
    basis = amb = None
    if L1.basis is not None and L2.basis is not None:
        m1, m2 = len(L1.basis[0]), len(L2.basis[0])
        basis = [list(r) + [0] * m2 for r in L1.basis] + [[0] * m1 + list(r) for r in L2.basis]
        amb = ([list(r) + [0] * m2 for r in L1.ambient_gram]
               + [[0] * m1 + list(r) for r in L2.ambient_gram])
    label = f"{L1.label}+{L2.label}" if L1.label or L2.label else ""
    return IntegerLattice(g, basis=basis, ambient_gram=amb, label=label, _check=False)._validated()


def rescale(L: IntegerLattice, s) -> IntegerLattice:
    s = Fraction(s)
    if s <= 0:
        raise LatticeError("scale must be positive")
    g = [[x * s for x in row] for row in L.gram]
    amb = None if L.ambient_gram is None else [[x * s for x in row] for row in L.ambient_gram]
    return IntegerLattice(g, basis=L.basis, ambient_gram=amb, label=L.label, _check=False)._validated()


def scaled_sublattice(L: IntegerLattice, k: int) -> IntegerLattice:
    """kL on the basis k*b_i."""
    return L.transform([[k * int(i == j) for j in range(L.rank)] for i in range(L.rank)],
                       label=f"{k}{L.label}")


# -- plain-text Gram format -------------------------------------------------

def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def format_gram(rows) -> str:
    lines = [str(len(rows))]
    lines += [" ".join(_fmt(x) for x in row) for row in rows]
    return "\n".join(lines) + "\n"


def parse_matrix(lines: list[str]) -> tuple[list[list[Fraction]], list[str]]:
    """Parse one rank-prefixed square matrix; return it and the remaining lines."""
    lines = [ln for ln in lines]
    while lines and not lines[0].strip():
        lines.pop(0)
    if not lines:
        raise LatticeError("missing matrix header")
    try:
        n = int(lines[0].strip())
    except ValueError as exc:
        raise LatticeError(f"bad rank line {lines[0]!r}") from exc
    rows = []
    for ln in lines[1:n + 1]:
        try:
            row = [Fraction(tok) for tok in ln.split()]
        except ValueError as exc:
            raise LatticeError(f"bad matrix entry in {ln!r}") from exc
        if len(row) != n:
            raise LatticeError(f"expected {n} entries, got {len(row)}")
        rows.append(row)
    if len(rows) != n:
        raise LatticeError("truncated matrix")
    return rows, lines[n + 1:]


def read_gram(path: str | Path, label: str | None = None) -> IntegerLattice:
    text = Path(path).read_text()
    rows, rest = parse_matrix(text.splitlines())
    if any(ln.strip() for ln in rest):
        raise LatticeError("trailing data after Gram matrix")
    return IntegerLattice(rows, label=label if label is not None else Path(path).stem)


def write_gram(L: IntegerLattice | Sequence, path: str | Path) -> None:
    rows = L.gram if isinstance(L, IntegerLattice) else L
    Path(path).write_text(format_gram(rows))


def file_hash(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]
