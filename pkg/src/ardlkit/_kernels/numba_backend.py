"""Numba-compiled twins of the NumPy batch kernels.

Same signatures and same arithmetic as ``numpy_backend``, but each replication
runs as a tight compiled loop without materializing batched design matrices,
which dominates both runtime and memory once replications reach the tens of
thousands.
"""

from __future__ import annotations

import numpy as np
from numba import njit

CASE_NONE = 0
CASE_CONST = 1
CASE_CONST_TREND = 2


@njit(cache=True)
def _df_stat_one(e: np.ndarray, case: int) -> float:
    T = e.shape[0]
    n = T - 1
    y = np.cumsum(e)
    sxx = 0.0
    sxd = 0.0
    sdd = 0.0
    sx = 0.0
    sd = 0.0
    stx = 0.0
    std_ = 0.0
    for t in range(n):
        xv = y[t]
        dv = e[t + 1]
        tau = t + 1.0
        sxx += xv * xv
        sxd += xv * dv
        sdd += dv * dv
        sx += xv
        sd += dv
        stx += tau * xv
        std_ += tau * dv

    if case == CASE_NONE:
        b = sxd / sxx
        rss = sdd - b * sxd
        if rss < 0.0:
            rss = 0.0
        sigma2 = rss / (n - 1)
        return b / np.sqrt(sigma2 / sxx)

    if case == CASE_CONST:
        det = n * sxx - sx * sx
        b = (n * sxd - sx * sd) / det
        a = (sd - b * sx) / n
        rss = sdd - a * sd - b * sxd
        if rss < 0.0:
            rss = 0.0
        sigma2 = rss / (n - 2)
        return b / np.sqrt(sigma2 * n / det)

    st = 0.0
    stt = 0.0
    for t in range(n):
        tau = t + 1.0
        st += tau
        stt += tau * tau
    A = np.empty((3, 3))
    A[0, 0] = n
    A[0, 1] = st
    A[1, 0] = st
    A[0, 2] = sx
    A[2, 0] = sx
    A[1, 1] = stt
    A[1, 2] = stx
    A[2, 1] = stx
    A[2, 2] = sxx
    v = np.empty(3)
    v[0] = sd
    v[1] = std_
    v[2] = sxd
    beta = np.linalg.solve(A, v)
    rss = sdd - (beta[0] * v[0] + beta[1] * v[1] + beta[2] * v[2])
    if rss < 0.0:
        rss = 0.0
    sigma2 = rss / (n - 3)
    var_b = sigma2 * np.linalg.inv(A)[2, 2]
    return beta[2] / np.sqrt(var_b)


@njit(cache=True)
def df_stats(innov: np.ndarray, case: int) -> np.ndarray:
    reps = innov.shape[0]
    out = np.empty(reps)
    for r in range(reps):
        out[r] = _df_stat_one(innov[r], case)
    return out


@njit(cache=True)
def _rss(Z: np.ndarray, d: np.ndarray) -> float:
    A = Z.T @ Z
    v = Z.T @ d
    beta = np.linalg.solve(A, v)
    rss = d @ d - beta @ v
    return rss if rss > 0.0 else 0.0


@njit(cache=True)
def _bounds_fstat_one(block: np.ndarray, case: int, i1: bool) -> float:
    k1 = block.shape[0]
    T = block.shape[1]
    k = k1 - 1
    n = T - 1

    y = np.cumsum(block[0])
    dy = block[0, 1:]

    xlev = np.empty((k, T))
    for i in range(k):
        if i1:
            xlev[i] = np.cumsum(block[i + 1])
        else:
            xlev[i] = block[i + 1]

    c0 = 1 if case >= 1 else 0
    cu = c0 + 2 * k + 1
    Z = np.empty((n, cu))
    col = 0
    if case >= 1:
        for t in range(n):
            Z[t, col] = 1.0
        col += 1
    for t in range(n):
        Z[t, col] = y[t]
    col += 1
    for i in range(k):
        for t in range(n):
            Z[t, col] = xlev[i, t]
        col += 1
    for i in range(k):
        for t in range(n):
            Z[t, col] = xlev[i, t + 1] - xlev[i, t]
        col += 1

    dyc = np.ascontiguousarray(dy)
    rss_u = _rss(Z, dyc)

    n_restr = k + (1 if case == 2 else 0)
    if n_restr > 0:
        Zr = np.empty((n, n_restr))
        rcol = 0
        if case == 2:
            for t in range(n):
                Zr[t, rcol] = 1.0
            rcol += 1
        for i in range(k):
            for t in range(n):
                Zr[t, rcol] = Z[t, c0 + k + 1 + i]
            rcol += 1
        rss_r = _rss(Zr, dyc)
    else:
        rss_r = dyc @ dyc

    m = (k + 1) + (1 if case == 1 else 0)
    return ((rss_r - rss_u) / m) / (rss_u / (n - cu))


@njit(cache=True)
def bounds_fstats(innov: np.ndarray, case: int, i1: bool) -> np.ndarray:
    reps = innov.shape[0]
    out = np.empty(reps)
    for r in range(reps):
        out[r] = _bounds_fstat_one(innov[r], case, i1)
    return out
