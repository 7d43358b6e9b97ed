"""Exact integer/rational matrix helpers.

Matrices are plain lists of rows.  Integer work happens on Python ints so
nothing ever overflows; numpy object arrays are used only where a C-level
loop over Python ints pays off (products of 72x72 matrices).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

Matrix = list[list]


def fractions(rows: Iterable[Iterable]) -> list[list[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def common_denominator(rows: Iterable[Iterable]) -> int:
    d = 1
    for row in rows:
        for x in row:
            d = lcm(d, Fraction(x).denominator)
    return d


def scaled_integer(rows: Sequence[Sequence]) -> tuple[np.ndarray, int]:
    """Return (d*M as an object array of Python ints, d) with d minimal."""
    d = common_denominator(rows)
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            x = Fraction(x)
            out[i, j] = x.numerator * (d // x.denominator)
    return out, d


def int_array(rows: Sequence[Sequence[int]]) -> np.ndarray:
    out = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            out[i, j] = int(x)
    return out


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list[Fraction]]:
    ia, da = scaled_integer(a)
    ib, db = scaled_integer(b)
    prod = ia.dot(ib)
    den = da * db
    return [[Fraction(int(x), den) for x in row] for row in prod]


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def is_integral(m: Iterable[Iterable]) -> bool:
    return all(Fraction(x).denominator == 1 for row in m for x in row)


def to_int_rows(m: Iterable[Iterable]) -> list[list[int]]:
    out = []
    for row in m:
        r = []
        for x in row:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError("matrix is not integral")
            r.append(x.numerator)
        out.append(r)
    return out


def bareiss(m: Sequence[Sequence[int]]) -> tuple[int, list[int]]:
    """Fraction-free elimination without pivoting.

    Returns (det, leading principal minors).  Stops early (returning the
    minors seen so far and det 0) when a zero pivot shows up; callers that
    need a determinant of a possibly indefinite matrix use ``int_det``.
    """
    n = len(m)
    a = [list(map(int, row)) for row in m]
    minors: list[int] = []
    prev = 1
    for k in range(n):
        piv = a[k][k]
        minors.append(piv)
        if piv == 0:
            return 0, minors
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            ak = a[k]
            for j in range(k + 1, n):
                ai[j] = (piv * ai[j] - aik * ak[j]) // prev
        prev = piv
    return (a[n - 1][n - 1] if n else 1), minors


def int_det(m: Sequence[Sequence[int]]) -> int:
    """Bareiss determinant with row pivoting."""
    n = len(m)
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        piv = a[k][k]
        ak = a[k]
        for i in range(k + 1, n):
            ai = a[i]
            aik = ai[k]
            for j in range(k + 1, n):
                ai[j] = (piv * ai[j] - aik * ak[j]) // prev
        prev = piv
    return sign * (a[n - 1][n - 1] if n else 1)


def rational_det(m: Sequence[Sequence]) -> Fraction:
    rows = [list(map(Fraction, r)) for r in m]
    scale = Fraction(1)
    ints = []
    for r in rows:
        d = common_denominator([r])
        scale /= d
        ints.append([int(x * d) for x in r])
    return int_det(ints) * scale


def rational_inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    a = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        a[k], a[p] = a[p], a[k]
        inv = 1 / a[k][k]
        a[k] = [x * inv for x in a[k]]
        ak = a[k]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], ak)]
    return [row[n:] for row in a]


def solve_left(basis: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Coefficients c with c @ basis == v, or None if v is outside the span."""
    rows = [list(map(Fraction, r)) for r in basis]
    n, m = len(rows), len(v)
    # Solve basis^T c = v by Gauss-Jordan on the augmented transpose.
    a = [[rows[i][j] for i in range(n)] + [Fraction(v[j])] for j in range(m)]
    piv_cols = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, m) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        piv_cols.append(c)
        r += 1
    if any(a[i][n] != 0 for i in range(r, m)):
        return None
    out = [Fraction(0)] * n
    for i, c in enumerate(piv_cols):
        out[c] = a[i][n]
    return out


def hnf(rows: Iterable[Sequence[int]], modulus: int | None = None) -> list[list[int]]:
    """Row Hermite normal form of the Z-span of ``rows`` (zero rows dropped).

    With ``modulus`` D the result is the HNF of span + D*Z^n; entries right
    of the current column are then kept reduced mod D.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    D = modulus
    if D is not None:
        a = [[x % D for x in r] for r in a]
        a = [r for r in a if any(r)]
    out: list[list[int]] = []
    for col in range(ncols):
        nz = [r for r in a if r[col] != 0]
        zero = [r for r in a if r[col] == 0]
        if D is not None:
            nz.append([D if j == col else 0 for j in range(ncols)])
        if not nz:
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            p = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // p[col]
                r = [x - q * y for x, y in zip(r, p)]
                if D is not None:
                    r = r[:col + 1] + [x % D for x in r[col + 1:]]
                if r[col] != 0:
                    rest.append(r)
                elif any(r):
                    zero.append(r)
            nz = [p] + rest
        p = nz[0]
        if p[col] < 0:
            p = [-x for x in p]
        if D is not None:
            p = p[:col + 1] + [x % D for x in p[col + 1:]]
        out.append(p)
        a = zero
    for i in range(len(out)):
        pc = next(j for j, x in enumerate(out[i]) if x != 0)
        for k in range(i):
            q = out[k][pc] // out[i][pc]
            if q:
                out[k] = [x - q * y for x, y in zip(out[k], out[i])]
    return out


def left_kernel(m: Sequence[Sequence[int]]) -> list[list[int]]:
    """Z-basis of {c integral : c @ m == 0}."""
    n = len(m)
    ncols = len(m[0]) if n else 0
    aug = [list(map(int, row)) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    h = hnf(aug)
    return [r[ncols:] for r in h if not any(r[:ncols])]


def row_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g
