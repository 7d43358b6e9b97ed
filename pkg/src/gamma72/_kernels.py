"""Numba kernels for Gram-matrix LLL and Fincke-Pohst enumeration.

Floating point only steers the search; accepted vectors are always
re-checked with int64 arithmetic on the integral Gram matrix.
"""

from __future__ import annotations

import numpy as np
from numba import njit

ENUM_DONE = 0
ENUM_BUDGET = 1
ENUM_FULL = 2


@njit(cache=True)
def _gso_row(G, mu, r, k):
    for j in range(k):
        s = float(G[k, j])
        for i in range(j):
            s -= mu[j, i] * r[k, i]
        r[k, j] = s
        mu[k, j] = s / r[j, j]
    s = float(G[k, k])
    for j in range(k):
        s -= mu[k, j] * r[k, j]
    r[k, k] = s


@njit(cache=True)
def lll_gram(G0, delta):
    """LLL on an integral positive definite Gram matrix.

    Returns (G', T) with G' = T G0 T^T and T unimodular.
    """
    n = G0.shape[0]
    G = G0.copy()
    T = np.eye(n, dtype=np.int64)
    mu = np.zeros((n, n))
    r = np.zeros((n, n))
    if n == 0:
        return G, T
    r[0, 0] = float(G[0, 0])
    k = 1
    while k < n:
        for _ in range(64):
            _gso_row(G, mu, r, k)
            changed = False
            for j in range(k - 1, -1, -1):
                q = np.int64(np.rint(mu[k, j]))
                if q != 0:
                    changed = True
                    for i in range(n):
                        T[k, i] -= q * T[j, i]
                    for i in range(n):
                        G[k, i] -= q * G[j, i]
                    for i in range(n):
                        G[i, k] -= q * G[i, j]
                    for i in range(j):
                        mu[k, i] -= q * mu[j, i]
                    mu[k, j] -= q
            if not changed:
                break
        _gso_row(G, mu, r, k)
        if delta * r[k - 1, k - 1] > r[k, k] + mu[k, k - 1] * mu[k, k - 1] * r[k - 1, k - 1]:
            for i in range(n):
                tmp = T[k, i]
                T[k, i] = T[k - 1, i]
                T[k - 1, i] = tmp
            for i in range(n):
                tmp = G[k, i]
                G[k, i] = G[k - 1, i]
                G[k - 1, i] = tmp
            for i in range(n):
                tmp = G[i, k]
                G[i, k] = G[i, k - 1]
                G[i, k - 1] = tmp
            if k == 1:
                r[0, 0] = float(G[0, 0])
            else:
                k -= 1
        else:
            k += 1
    return G, T


@njit(cache=True)
def _exact_norm(G, tnum, tden, x, v):
    n = G.shape[0]
    for i in range(n):
        v[i] = tnum[i] + tden * x[i]
    s = 0
    for i in range(n):
        vi = v[i]
        if vi == 0:
            continue
        row = 0
        for j in range(n):
            row += G[i, j] * v[j]
        s += vi * row
    return s


@njit(cache=True)
def _zero_above(x, k, n):
    for j in range(k + 1, n):
        if x[j] != 0:
            return False
    return True


@njit(cache=True)
def _start_level(x, dx, ddx, c, k, n, symmetric):
    x[k] = np.int64(np.rint(c[k]))
    if symmetric and _zero_above(x, k, n):
        x[k] = 0
        dx[k] = 1
        ddx[k] = 0
    else:
        s = 1 if c[k] >= x[k] else -1
        dx[k] = s
        ddx[k] = s


@njit(cache=True)
def _advance(x, dx, ddx, k):
    if ddx[k] == 0:
        x[k] += 1
    else:
        x[k] += dx[k]
        ddx[k] = -ddx[k]
        dx[k] = ddx[k] - dx[k]


@njit(cache=True)
def enumerate_kernel(G, D, U, t, tnum, tden, bound_scaled, R, symmetric,
                     collect, out, n_out, budget, x, dx, ddx, c, rho, kstate, hist, init):
    """Schnorr-Euchner enumeration of {x in Z^n : (x+t) G (x+t)^T <= R}.

    ``t = tnum / tden``.  Exact acceptance: v = tnum + tden*x must satisfy
    v G v^T <= bound_scaled.  In symmetric mode (t = 0) only vectors whose
    last nonzero coordinate is positive are visited.  Returns
    (status, n_out, nodes); the state arrays allow resumption.
    """
    n = G.shape[0]
    v = np.empty(n, dtype=np.int64)
    if init:
        k = n - 1
        rho[n] = 0.0
        c[k] = -t[k]
        _start_level(x, dx, ddx, c, k, n, symmetric)
    else:
        k = kstate[0]
    nodes = 0
    while True:
        if nodes >= budget:
            kstate[0] = k
            return ENUM_BUDGET, n_out, nodes
        nodes += 1
        diff = x[k] - c[k]
        val = rho[k + 1] + D[k] * diff * diff
        if val <= R:
            if k == 0:
                skip = False
                if symmetric and x[0] == 0 and _zero_above(x, 0, n):
                    skip = True
                if not skip:
                    nrm = _exact_norm(G, tnum, tden, x, v)
                    if nrm <= bound_scaled:
                        if collect:
                            if n_out >= out.shape[0]:
                                kstate[0] = k
                                return ENUM_FULL, n_out, nodes
                            for i in range(n):
                                out[n_out, i] = x[i]
                            n_out += 1
                        hist[nrm] += 1
                _advance(x, dx, ddx, 0)
                continue
            rho[k] = val
            k -= 1
            s = t[k]
            for j in range(k + 1, n):
                s += U[k, j] * (x[j] + t[j])
            c[k] = -s
            _start_level(x, dx, ddx, c, k, n, symmetric)
        else:
            k += 1
            if k == n:
                kstate[0] = k
                return ENUM_DONE, n_out, nodes
            _advance(x, dx, ddx, k)


@njit(cache=True)
def class_codes(vectors):
    """Pack coordinates mod 2 into integers (bit i = coordinate i mod 2)."""
    m, n = vectors.shape
    out = np.zeros(m, dtype=np.int64)
    for a in range(m):
        code = 0
        for i in range(n):
            if vectors[a, i] & 1:
                code |= np.int64(1) << i
        out[a] = code
    return out
