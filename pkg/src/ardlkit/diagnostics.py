"""Residual diagnostics and the CUSUM coefficient-stability test.

All three specification tests are reported in F form: Breusch-Godfrey serial
correlation LM, Ramsey RESET with fitted-value powers, and heteroskedasticity
(Breusch-Pagan-Godfrey by default, White optionally). ``pass`` means the null
of a well-specified model survives at the configured level (pvalue > level).

The CUSUM test cumulates standardized recursive residuals and compares the
path against the Brown-Durbin-Evans straight-line bounds
``+/- a * (sqrt(m) + 2r/sqrt(m))`` with a = 0.948 at 5% (0.850 at 10%, 1.143
at 1%).

References
----------
Breusch, T. S. (1978); Godfrey, L. G. (1978). LM tests for serial correlation.
Ramsey, J. B. (1969). Tests for specification errors in classical linear
    least-squares regression analysis. JRSS-B 31, 350-371.
Breusch, T. S., & Pagan, A. R. (1979). A simple test for heteroscedasticity
    and random coefficient variation. Econometrica 47, 1287-1294.
Brown, R. L., Durbin, J., & Evans, J. M. (1975). Techniques for testing the
    constancy of regression relationships over time. JRSS-B 37, 149-192.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import probdist
from .errors import DegenerateError, DomainError, SampleError
from .ols import OlsFit, fit_ols_arrays, recursive_residuals
from .series import DesignMatrix

CUSUM_COEFFICIENTS = {0.10: 0.850, 0.05: 0.948, 0.01: 1.143}


class HetKind(str, Enum):
    BREUSCH_PAGAN_GODFREY = "bpg"
    WHITE = "white"


@dataclass(frozen=True)
class TestResult:
    name: str
    fstat: float
    df: tuple[int, int]
    pvalue: float
    verdict: str  # "pass" | "fail"
    level: float


@dataclass(frozen=True)
class CusumResult:
    path: np.ndarray
    upper: np.ndarray
    lower: np.ndarray
    stable: bool
    level: float
    sigma: float
    start_period: int


def verdict_from_pvalue(pvalue: float, level: float) -> str:
    """The null (well-specified model) is retained when pvalue > level."""
    return "pass" if pvalue > level else "fail"


def _ftest_result(name: str, fstat: float, df: tuple[int, int], level: float) -> TestResult:
    pvalue = probdist.survival(probdist.fisher_f(df[0], df[1]), fstat)
    return TestResult(
        name=name,
        fstat=float(fstat),
        df=df,
        pvalue=float(pvalue),
        verdict=verdict_from_pvalue(pvalue, level),
        level=level,
    )


def serial_lm(fit: OlsFit, lags: int = 2, level: float = 0.05) -> TestResult:
    """Breusch-Godfrey F test: residuals on the original regressors plus
    ``lags`` lagged residuals (presample lags set to zero)."""
    if lags < 1:
        raise DomainError(f"lags must be at least 1, got {lags}")
    u = fit.residuals
    n = fit.n
    df_den = n - fit.k - lags
    if df_den < 1:
        raise SampleError(
            f"auxiliary regression under-identified: {n} obs, {fit.k} regressors, {lags} lags"
        )
    if fit.rss <= 1e-20 * max(float(fit.y @ fit.y), 1e-300):
        raise DegenerateError("residuals are numerically zero; the LM test is undefined")
    lagged = np.zeros((n, lags))
    for j in range(1, lags + 1):
        lagged[j:, j - 1] = u[:-j]
    aux_X = np.column_stack([fit.X, lagged])
    aux_names = fit.names + tuple(f"RESID(-{j})" for j in range(1, lags + 1))
    aux = fit_ols_arrays(u, aux_X, aux_names, has_intercept=fit.has_intercept)
    # Residuals are orthogonal to the original regressors, so the restricted
    # RSS is exactly u'u.
    fstat = ((fit.rss - aux.rss) / lags) / (aux.rss / df_den)
    return _ftest_result("serial_correlation_lm", fstat, (lags, df_den), level)


def ramsey_reset(fit: OlsFit, powers: int = 2, level: float = 0.05) -> TestResult:
    """RESET F test on fitted-value powers 2..``powers`` added to the design."""
    if powers < 2:
        raise DomainError(f"powers must be at least 2, got {powers}")
    f = fit.fitted
    if np.ptp(f) == 0.0:
        raise DegenerateError("fitted values are constant; RESET is undefined")
    added = powers - 1
    df_den = fit.n - fit.k - added
    if df_den < 1:
        raise SampleError("auxiliary regression under-identified for RESET")
    extra = np.column_stack([f**p for p in range(2, powers + 1)])
    aux_X = np.column_stack([fit.X, extra])
    aux_names = fit.names + tuple(f"FITTED^{p}" for p in range(2, powers + 1))
    aux = fit_ols_arrays(fit.y, aux_X, aux_names, has_intercept=fit.has_intercept)
    fstat = ((fit.rss - aux.rss) / added) / (aux.rss / df_den)
    return _ftest_result("ramsey_reset", fstat, (added, df_den), level)


def het_test(
    fit: OlsFit, kind: HetKind | str = HetKind.BREUSCH_PAGAN_GODFREY, level: float = 0.05
) -> TestResult:
    """Heteroskedasticity F test: squared residuals on the regressors (BPG) or
    on regressors, squares, and cross-products (White)."""
    kind = HetKind(kind)
    u2 = fit.residuals**2
    if np.ptp(u2) == 0.0:
        raise DegenerateError("squared residuals are constant; the test is undefined")
    base_idx = [i for i, nm in enumerate(fit.names) if nm != "C"]
    cols = [np.ones(fit.n)]
    names = ["C"]
    for i in base_idx:
        cols.append(fit.X[:, i])
        names.append(fit.names[i])
    if kind is HetKind.WHITE:
        for a_pos, i in enumerate(base_idx):
            for j in base_idx[a_pos:]:
                cols.append(fit.X[:, i] * fit.X[:, j])
                suffix = "^2" if i == j else f"*{fit.names[j]}"
                names.append(f"{fit.names[i]}{suffix}")
    aux_X = np.column_stack(cols)
    q = aux_X.shape[1] - 1
    df_den = fit.n - q - 1
    if q < 1 or df_den < 1:
        raise SampleError("auxiliary regression under-identified for the het test")
    aux = fit_ols_arrays(u2, aux_X, tuple(names), has_intercept=True)
    fstat = (aux.r2 / q) / ((1.0 - aux.r2) / df_den)
    name = "het_breusch_pagan_godfrey" if kind is HetKind.BREUSCH_PAGAN_GODFREY else "het_white"
    return _ftest_result(name, fstat, (q, df_den), level)


def cusum(y: np.ndarray | DesignMatrix, X: DesignMatrix | np.ndarray | None = None,
          level: float = 0.05) -> CusumResult:
    """CUSUM of recursive residuals with Brown-Durbin-Evans 5% bounds.

    ``path_r = sum_{s<=r} w_s / sigma`` where sigma is the residual standard
    error implied by the recursive residuals (sqrt of their mean square).
    """
    start_period = 0
    if isinstance(y, DesignMatrix) and X is None:
        start_period = y.start_period
        X, y = y, y.response
    if isinstance(X, DesignMatrix):
        start_period = X.start_period
        X = X.regressors
    if level not in CUSUM_COEFFICIENTS:
        raise DomainError(
            f"level must be one of {sorted(CUSUM_COEFFICIENTS)}, got {level}"
        )
    y = np.asarray(y, dtype=np.float64)
    X = np.asarray(X, dtype=np.float64)
    n, k = X.shape

    w = recursive_residuals(y, X)
    m = len(w)
    sigma = math.sqrt(float(w @ w) / m) if m else 0.0
    # An exact fit leaves rounding-level residuals; treat sigma as zero when it
    # is negligible against the response scale so the path is identically zero.
    y_scale = math.sqrt(float(y @ y) / n) if n else 0.0
    if sigma <= 1e-12 * max(y_scale, 1e-300):
        sigma = 0.0
    path = np.cumsum(w) / sigma if sigma > 0.0 else np.zeros(m)

    a = CUSUM_COEFFICIENTS[level]
    r = np.arange(1, m + 1)
    sqrt_m = math.sqrt(m)
    upper = a * (sqrt_m + 2.0 * r / sqrt_m)
    lower = -upper
    stable = bool(np.all((path >= lower) & (path <= upper)))
    return CusumResult(
        path=path,
        upper=upper,
        lower=lower,
        stable=stable,
        level=level,
        sigma=sigma,
        start_period=start_period + (n - m),
    )
