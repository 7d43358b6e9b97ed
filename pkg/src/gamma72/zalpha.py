"""Arithmetic in Q(alpha) with alpha^2 = alpha - 2 (discriminant -7)."""

from __future__ import annotations

from fractions import Fraction
from math import floor


class ZAlpha:
    """a + b*alpha.  Components are rationals; ``is_integral`` tells whether
    the value lies in the maximal order Z[alpha]."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("ZAlpha is immutable")

    @staticmethod
    def coerce(x) -> "ZAlpha":
        return x if isinstance(x, ZAlpha) else ZAlpha(x)

    def __add__(self, o):
        o = ZAlpha.coerce(o)
        return ZAlpha(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, o):
        o = ZAlpha.coerce(o)
        return ZAlpha(self.a - o.a, self.b - o.b)

    def __rsub__(self, o):
        return ZAlpha.coerce(o) - self

    def __neg__(self):
        return ZAlpha(-self.a, -self.b)

    def __mul__(self, o):
        o = ZAlpha.coerce(o)
        # (a + b x)(c + d x) with x^2 = x - 2
        bd = self.b * o.b
        return ZAlpha(self.a * o.a - 2 * bd, self.a * o.b + self.b * o.a + bd)

    __rmul__ = __mul__

    def conj(self) -> "ZAlpha":
        # conj(alpha) = 1 - alpha
        return ZAlpha(self.a + self.b, -self.b)

    def trace(self) -> Fraction:
        return 2 * self.a + self.b

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b + 2 * self.b * self.b

    def __truediv__(self, o):
        o = ZAlpha.coerce(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(alpha)")
        p = self * o.conj()
        return ZAlpha(p.a / n, p.b / n)

    def __rtruediv__(self, o):
        return ZAlpha.coerce(o) / self

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            return self.b == 0 and self.a == o
        return isinstance(o, ZAlpha) and self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a or self.b)

    @property
    def is_integral(self) -> bool:
        return self.a.denominator == 1 and self.b.denominator == 1

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def round(self) -> "ZAlpha":
        """An element q of Z[alpha] with N(self - q) < 1 (norm-Euclidean)."""
        best = None
        b0 = floor(self.b)
        for b in (b0 - 1, b0, b0 + 1, b0 + 2):
            # a + b*alpha nearest for fixed b: minimise (x-a)^2 + (x-a)(y-b) + 2(y-b)^2
            target = self.a + (self.b - b) / 2
            a0 = floor(target)
            for a in (a0, a0 + 1):
                q = ZAlpha(a, b)
                r = (self - q).norm()
                if best is None or r < best[0]:
                    best = (r, q)
        assert best[0] < 1
        return best[1]

    def __repr__(self):
        def f(x):
            return str(x) if x.denominator == 1 else f"({x})"
        if self.b == 0:
            return f(self.a)
        if self.a == 0:
            return f"{f(self.b)}*a"
        return f"{f(self.a)}+{f(self.b)}*a"


ALPHA = ZAlpha(0, 1)
BETA = ZAlpha(1, -1)
SQRT_M7 = ZAlpha(-1, 2)  # 2*alpha - 1, squares to -7
ONE = ZAlpha(1)
ZERO = ZAlpha(0)


def mat_mul(a, b):
    n, m, p = len(a), len(b), len(b[0])
    return [[sum((a[i][k] * b[k][j] for k in range(m)), ZERO) for j in range(p)] for i in range(n)]


def conj_transpose(m):
    return [[m[j][i].conj() for j in range(len(m))] for i in range(len(m[0]))]


def inverse(m):
    n = len(m)
    a = [[ZAlpha.coerce(x) for x in row] + [ONE if i == j else ZERO for j in range(n)]
         for i, row in enumerate(m)]
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            raise ZeroDivisionError("singular matrix over Q(alpha)")
        a[k], a[p] = a[p], a[k]
        inv = ONE / a[k][k]
        a[k] = [x * inv for x in a[k]]
        for i in range(n):
            if i != k and a[i][k]:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def det(m) -> ZAlpha:
    n = len(m)
    a = [[ZAlpha.coerce(x) for x in row] for row in m]
    out = ONE
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k]), None)
        if p is None:
            return ZERO
        if p != k:
            a[k], a[p] = a[p], a[k]
            out = -out
        out = out * a[k][k]
        inv = ONE / a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return out


def hermite_rows(rows) -> list[list[ZAlpha]]:
    """Echelon basis of the Z[alpha]-module spanned by integral ``rows``."""
    a = [[ZAlpha.coerce(x) for x in r] for r in rows]
    a = [r for r in a if any(r)]
    if not a:
        return []
    ncols = len(a[0])
    out = []
    for col in range(ncols):
        nz = [r for r in a if r[col]]
        zero = [r for r in a if not r[col]]
        if not nz:
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: r[col].norm())
            p = nz[0]
            rest = []
            for r in nz[1:]:
                q = (r[col] / p[col]).round()
                r = [x - q * y for x, y in zip(r, p)]
                if r[col]:
                    rest.append(r)
                elif any(r):
                    zero.append(r)
            nz = [p] + rest
        out.append(nz[0])
        a = zero
    return out
