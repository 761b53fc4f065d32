"""Pure-NumPy batch kernels for the Monte Carlo engine.

Each function consumes a block of pre-generated standard-normal innovations
(one row per replication) and returns one statistic per replication. The
regressions are solved by normal equations, vectorized across replications.
"""

from __future__ import annotations

import numpy as np

CASE_NONE = 0
CASE_CONST = 1
CASE_CONST_TREND = 2  # df_stats only; bounds uses 1=restricted, 2=unrestricted const


def df_stats(innov: np.ndarray, case: int) -> np.ndarray:
    """ADF lag-0 t-ratios for driftless random walks built from ``innov``.

    ``innov`` has shape (reps, T); the regression of the first difference on
    the lagged level (plus deterministics per ``case``) uses T-1 rows.
    """
    innov = np.ascontiguousarray(innov, dtype=np.float64)
    reps, T = innov.shape
    n = T - 1
    y = np.cumsum(innov, axis=1)
    x = y[:, :-1]
    d = innov[:, 1:]

    sxx = np.einsum("ij,ij->i", x, x)
    sxd = np.einsum("ij,ij->i", x, d)
    sdd = np.einsum("ij,ij->i", d, d)

    with np.errstate(divide="ignore", invalid="ignore"):
        if case == CASE_NONE:
            b = sxd / sxx
            rss = np.maximum(sdd - b * sxd, 0.0)
            sigma2 = rss / (n - 1)
            return b / np.sqrt(sigma2 / sxx)

        sx = x.sum(axis=1)
        sd = d.sum(axis=1)
        if case == CASE_CONST:
            det = n * sxx - sx * sx
            b = (n * sxd - sx * sd) / det
            a = (sd - b * sx) / n
            rss = np.maximum(sdd - a * sd - b * sxd, 0.0)
            sigma2 = rss / (n - 2)
            return b / np.sqrt(sigma2 * n / det)

        # constant + trend: batched 3x3 normal equations
        tau = np.arange(1.0, n + 1)
        st = tau.sum()
        stt = float(tau @ tau)
        stx = x @ tau
        std_ = d @ tau
        A = np.empty((reps, 3, 3))
        A[:, 0, 0] = n
        A[:, 0, 1] = A[:, 1, 0] = st
        A[:, 0, 2] = A[:, 2, 0] = sx
        A[:, 1, 1] = stt
        A[:, 1, 2] = A[:, 2, 1] = stx
        A[:, 2, 2] = sxx
        v = np.stack([sd, std_, sxd], axis=1)
        beta = np.linalg.solve(A, v[..., None])[..., 0]
        rss = np.maximum(sdd - np.einsum("ij,ij->i", beta, v), 0.0)
        sigma2 = rss / (n - 3)
        var_b = sigma2 * np.linalg.inv(A)[:, 2, 2]
        return beta[:, 2] / np.sqrt(var_b)


def bounds_fstats(innov: np.ndarray, case: int, i1: bool) -> np.ndarray:
    """Bounds-test F statistics under the no-relationship null.

    ``innov`` has shape (reps, k+1, T): row 0 drives the dependent random
    walk, rows 1..k the regressors (random walks when ``i1`` else i.i.d.
    levels). The conditional error-correction regression uses the lag order
    (1, 0..0): lagged levels plus current regressor differences.
    """
    innov = np.ascontiguousarray(innov, dtype=np.float64)
    reps, k1, T = innov.shape
    k = k1 - 1
    n = T - 1

    y = np.cumsum(innov[:, 0, :], axis=1)
    dy = innov[:, 0, 1:]
    xlev = np.cumsum(innov[:, 1:, :], axis=2) if i1 else innov[:, 1:, :]
    dx = np.diff(xlev, axis=2)

    blocks = []
    if case >= 1:
        blocks.append(np.ones((reps, 1, n)))
    blocks.append(y[:, None, :-1])
    blocks.append(xlev[:, :, :-1])
    blocks.append(dx)
    Z = np.concatenate(blocks, axis=1)  # (reps, c, n)

    c0 = 1 if case >= 1 else 0
    level_idx = list(range(c0, c0 + k + 1))
    dx_idx = list(range(c0 + k + 1, c0 + 2 * k + 1))
    restricted_idx = ([0] if case == 2 else []) + dx_idx
    m = (k + 1) + (1 if case == 1 else 0)
    cu = Z.shape[1]

    sdd = np.einsum("rn,rn->r", dy, dy)

    def rss_for(idx: list[int]) -> np.ndarray:
        if not idx:
            return sdd
        Zs = Z[:, idx, :]
        A = np.einsum("rcn,rdn->rcd", Zs, Zs)
        v = np.einsum("rcn,rn->rc", Zs, dy)
        beta = np.linalg.solve(A, v[..., None])[..., 0]
        return np.maximum(sdd - np.einsum("rc,rc->r", beta, v), 0.0)

    rss_u = rss_for(list(range(cu)))
    rss_r = rss_for(restricted_idx)
    with np.errstate(divide="ignore", invalid="ignore"):
        return ((rss_r - rss_u) / m) / (rss_u / (n - cu))
