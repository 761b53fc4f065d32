"""Ordinary least squares via orthogonal decomposition, plus recursive residuals.

Estimation uses a column-pivoted QR factorization rather than the normal
equations, so near-collinear small samples fail loudly (``RankError`` naming
the dependent column) instead of silently losing precision. Information
criteria follow the per-observation convention

    aic = -2*loglik/n + 2k/n,      sic = -2*loglik/n + k*ln(n)/n

with the Gaussian log-likelihood, matching mainstream econometrics packages so
lag-order selection is reproducible.

Recursive residuals are the standardized one-step-ahead prediction errors of
Brown, Durbin & Evans (1975), computed with Sherman-Morrison updating.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from . import probdist
from .errors import EstimationWarning, RankError, SampleError
from .series import DesignMatrix

_RANK_TOL = 1e-10


@dataclass(frozen=True)
class OlsFit:
    """Coefficients, classical covariance, residuals, and fit measures."""

    names: tuple[str, ...]
    coef: np.ndarray
    stderr: np.ndarray
    tstat: np.ndarray
    pvalue: np.ndarray
    residuals: np.ndarray
    fitted: np.ndarray
    cov: np.ndarray
    sigma2: float
    rss: float
    loglik: float
    aic: float
    sic: float
    r2: float
    r2_adj: float
    n: int
    k: int
    has_intercept: bool
    X: np.ndarray
    y: np.ndarray

    def __getitem__(self, name: str) -> float:
        return float(self.coef[self.names.index(name)])


def _qr_solve(X: np.ndarray, y: np.ndarray, names: tuple[str, ...]):
    """Pivoted-QR least squares; returns (beta, xtx_inv, rank check done)."""
    n, k = X.shape
    Q, R, piv = sla.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag[0] == 0.0:
        raise RankError(f"column {names[piv[0]]!r} is identically zero", names[piv[0]])
    bad = np.flatnonzero(diag < _RANK_TOL * diag[0])
    if bad.size:
        col = names[piv[int(bad[0])]]
        raise RankError(
            f"design is rank deficient: column {col!r} is linearly dependent "
            f"(relative pivot {diag[int(bad[0])] / diag[0]:.2e})",
            col,
        )
    beta_piv = sla.solve_triangular(R, Q.T @ y)
    rinv = sla.solve_triangular(R, np.eye(k))
    cov_piv = rinv @ rinv.T
    beta = np.empty(k)
    beta[piv] = beta_piv
    xtx_inv = np.empty((k, k))
    xtx_inv[np.ix_(piv, piv)] = cov_piv
    return beta, xtx_inv


def fit_ols(y: np.ndarray | DesignMatrix, X: DesignMatrix | None = None) -> OlsFit:
    """Fit OLS on a :class:`DesignMatrix` (or pass it as the only argument)."""
    if isinstance(y, DesignMatrix) and X is None:
        X, y = y, y.response
    assert X is not None
    return fit_ols_arrays(
        np.asarray(y, dtype=np.float64),
        X.regressors,
        X.columns,
        has_intercept=X.has_intercept,
    )


def fit_ols_arrays(
    y: np.ndarray,
    X: np.ndarray,
    names: tuple[str, ...] | None = None,
    *,
    has_intercept: bool = False,
) -> OlsFit:
    y = np.asarray(y, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    n, k = X.shape
    if names is None:
        names = tuple(f"x{i}" for i in range(k))
    if n <= k:
        raise SampleError(f"{n} observations cannot identify {k} coefficients")

    beta, xtx_inv = _qr_solve(X, y, tuple(names))
    fitted = X @ beta
    resid = y - fitted
    rss = float(resid @ resid)
    dof = n - k
    sigma2 = rss / dof
    cov = sigma2 * xtx_inv

    with np.errstate(divide="ignore", invalid="ignore"):
        stderr = np.sqrt(np.maximum(np.diag(cov), 0.0))
        tstat = np.where(stderr > 0.0, beta / np.where(stderr > 0.0, stderr, 1.0), np.inf * np.sign(beta))
        tstat = np.where((stderr == 0.0) & (beta == 0.0), 0.0, tstat)
    tdist = probdist.student_t(dof)
    pvalue = np.array([2.0 * probdist.survival(tdist, abs(t)) if math.isfinite(t) else 0.0 for t in tstat])

    if rss > 0.0:
        loglik = -0.5 * n * (1.0 + math.log(2.0 * math.pi) + math.log(rss / n))
    else:
        loglik = math.inf
    aic = -2.0 * loglik / n + 2.0 * k / n
    sic = -2.0 * loglik / n + k * math.log(n) / n

    if has_intercept:
        tss = float(np.sum((y - y.mean()) ** 2))
    else:
        tss = float(y @ y)
    r2 = 1.0 - rss / tss if tss > 0.0 else 1.0
    denom_adj = (n - 1.0) if has_intercept else float(n)
    r2_adj = 1.0 - (1.0 - r2) * denom_adj / dof if dof > 0 else r2

    return OlsFit(
        names=tuple(names),
        coef=beta,
        stderr=stderr,
        tstat=tstat,
        pvalue=pvalue,
        residuals=resid,
        fitted=fitted,
        cov=cov,
        sigma2=sigma2,
        rss=rss,
        loglik=loglik,
        aic=aic,
        sic=sic,
        r2=r2,
        r2_adj=r2_adj,
        n=n,
        k=k,
        has_intercept=has_intercept,
        X=X,
        y=y,
    )


def recursive_residuals(y: np.ndarray | DesignMatrix, X: DesignMatrix | np.ndarray | None = None) -> np.ndarray:
    """Standardized one-step-ahead prediction errors w_t, t = k+1..n.

    Under coefficient stability the w_t are i.i.d. N(0, sigma^2), and the sum
    of their squares equals the full-sample residual sum of squares. If the
    initial k x k block is singular the start is shifted forward (with an
    :class:`EstimationWarning`); if no full-rank start exists, ``RankError``.
    """
    if isinstance(y, DesignMatrix) and X is None:
        X, y = y, y.response
    if isinstance(X, DesignMatrix):
        X = X.regressors
    y = np.asarray(y, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    n, k = X.shape
    if n < k + 1:
        raise SampleError(f"need more than {k} observations, got {n}")

    m = k
    while m < n:
        sub = X[:m]
        diag = np.abs(np.diag(np.linalg.qr(sub, mode="r")))
        if diag.size == k and diag.min() > _RANK_TOL * max(diag.max(), 1.0):
            break
        m += 1
    else:
        raise RankError("no full-rank starting block for the recursion", None)
    if m > k:
        warnings.warn(
            f"singular initial block; recursion start shifted forward by {m - k}",
            EstimationWarning,
            stacklevel=2,
        )

    X0, y0 = X[:m], y[:m]
    xtx_inv = np.linalg.inv(X0.T @ X0)
    beta = xtx_inv @ (X0.T @ y0)

    w = np.empty(n - m)
    for t in range(m, n):
        x_t = X[t]
        err = y[t] - x_t @ beta
        f_t = 1.0 + x_t @ xtx_inv @ x_t
        w[t - m] = err / math.sqrt(f_t)
        v = xtx_inv @ x_t
        xtx_inv = xtx_inv - np.outer(v, v) / f_t
        beta = beta + xtx_inv @ x_t * err
    return w
