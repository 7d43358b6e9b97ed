from __future__ import annotations

from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from gamma72 import zalpha as za
from gamma72.zalpha import ALPHA, BETA, ONE, SQRT_M7, ZAlpha

ints = st.integers(-50, 50)
elems = st.builds(ZAlpha, ints, ints)


def test_alpha_relations():
    assert ALPHA * ALPHA == ALPHA - 2
    assert ALPHA * BETA == 2
    assert ALPHA + BETA == 1
    assert SQRT_M7 * SQRT_M7 == -7
    assert ALPHA.conj() == BETA


def test_trace_and_norm():
    x = ZAlpha(3, 5)
    assert x.trace() == 11
    assert x.norm() == 9 + 15 + 50
    assert (x * x.conj()) == x.norm()


@given(elems, elems)
def test_norm_multiplicative(x, y):
    assert (x * y).norm() == x.norm() * y.norm()
    assert (x * y).conj() == x.conj() * y.conj()


@given(elems, elems)
def test_division_round(x, y):
    if not y:
        return
    q = (x / y).round()
    assert q.is_integral
    assert (x - q * y).norm() < y.norm()


def test_inverse_and_det():
    m = [[ONE, ALPHA, ZAlpha(0)], [ZAlpha(0), BETA, ONE], [ALPHA, ZAlpha(0), ZAlpha(2)]]
    inv = za.inverse(m)
    prod = za.mat_mul(m, inv)
    assert all(prod[i][j] == int(i == j) for i in range(3) for j in range(3))
    assert za.det(m) * za.det(inv) == 1


def test_hermite_rows_spans_module():
    rows = [[ZAlpha(2), ZAlpha(0)], [ALPHA, ZAlpha(0)], [ZAlpha(0), BETA]]
    h = za.hermite_rows(rows)
    assert len(h) == 2
    # 2 = alpha * beta, so (2) + (alpha) = (alpha)
    assert h[0][0].norm() == 2
    assert h[1][1].norm() == Fraction(2)
