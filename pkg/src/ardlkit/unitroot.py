"""Augmented Dickey-Fuller unit-root testing and integration-order classification.

The test regresses the first difference on the lagged level, lagged
differences, and deterministic terms; the t-ratio on the lagged level is the
test statistic. Approximate left-tail p-values come from the MacKinnon (1994)
polynomial surfaces and critical values from the MacKinnon (2010) finite-sample
response surfaces, both shipped as a versioned data asset
(``data/mackinnon_tau.json``).

Lag selection fits every candidate on the common max-lag-truncated sample and
minimizes an information criterion (default SIC, maximum lag from Schwert's
``12*(T/100)**0.25`` rule), breaking ties toward the smaller lag.

References
----------
Dickey, D. A., & Fuller, W. A. (1979). Distribution of the estimators for
    autoregressive time series with a unit root. JASA 74, 427-431.
MacKinnon, J. G. (1994). Approximate asymptotic distribution functions for
    unit-root and cointegration tests. JBES 12, 167-176.
MacKinnon, J. G. (2010). Critical values for cointegration tests. Queen's
    University Economics Working Paper 1227.
Schwert, G. W. (1989). Tests for unit roots: a Monte Carlo investigation.
    JBES 7, 147-159.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from importlib import resources

import numpy as np

from . import probdist
from .errors import DegenerateError, DomainError, EstimationWarning, SampleError
from .ols import OlsFit, fit_ols_arrays
from .series import TimeSeries, difference

MIN_EFFECTIVE_OBS = 12


class Deterministic(str, Enum):
    NONE = "none"
    CONSTANT = "c"
    CONSTANT_TREND = "ct"


class Verdict(str, Enum):
    STATIONARY = "stationary"
    NONSTATIONARY = "nonstationary"


@dataclass(frozen=True)
class AdfSpec:
    """Deterministic-term variant and lag policy.

    ``fixed_lag`` pins the augmentation order; otherwise lags 0..``max_lag``
    are searched by ``criterion`` (``max_lag=None`` applies the Schwert rule).
    """

    deterministic: Deterministic = Deterministic.CONSTANT
    fixed_lag: int | None = None
    max_lag: int | None = None
    criterion: str = "sic"

    def __post_init__(self) -> None:
        if self.criterion not in ("aic", "sic"):
            raise DomainError(f"criterion must be 'aic' or 'sic', got {self.criterion!r}")
        if self.fixed_lag is not None and self.fixed_lag < 0:
            raise DomainError("fixed_lag must be non-negative")
        if self.max_lag is not None and self.max_lag < 0:
            raise DomainError("max_lag must be non-negative")


@dataclass(frozen=True)
class AdfResult:
    spec: AdfSpec
    chosen_lag: int
    stat: float
    pvalue: float
    crit: dict[float, float]
    verdict: Verdict
    level: float
    nobs: int
    fit: OlsFit


@dataclass(frozen=True)
class IntegrationOrder:
    order: int
    level_result: AdfResult
    diff_result: AdfResult | None
    warning: str | None = None


def _load_tables() -> dict:
    with resources.files("ardlkit.data").joinpath("mackinnon_tau.json").open("rb") as fh:
        return json.load(fh)


_TABLES = _load_tables()


def verdict_from_pvalue(pvalue: float, level: float) -> Verdict:
    """Stationary iff the unit-root null is rejected: pvalue < level."""
    return Verdict.STATIONARY if pvalue < level else Verdict.NONSTATIONARY


def mackinnon_pvalue(stat, deterministic: Deterministic = Deterministic.CONSTANT):
    """Approximate left-tail p-value for an ADF t-ratio (scalar or array)."""
    tab = _TABLES["pvalue"][Deterministic(deterministic).value]
    tau_max = math.inf if tab["tau_max"] is None else tab["tau_max"]
    stat_arr = np.asarray(stat, dtype=np.float64)
    small = np.polynomial.polynomial.polyval(stat_arr, tab["small_p"])
    large = np.polynomial.polynomial.polyval(stat_arr, tab["large_p"])
    inner = probdist.norm_cdf(np.where(stat_arr <= tab["tau_star"], small, large))
    out = np.where(stat_arr > tau_max, 1.0, np.where(stat_arr < tab["tau_min"], 0.0, inner))
    return float(out) if out.ndim == 0 else out


def mackinnon_crit(
    deterministic: Deterministic = Deterministic.CONSTANT, nobs: int | None = None
) -> dict[float, float]:
    """Critical values at 1/5/10% from the response surface (asymptotic if
    ``nobs`` is None)."""
    tab = _TABLES["critval"][Deterministic(deterministic).value]
    inv_t = 0.0 if nobs is None else 1.0 / float(nobs)
    out = {}
    for key, coefs in tab.items():
        out[float(key)] = float(np.polynomial.polynomial.polyval(inv_t, coefs))
    return dict(sorted(out.items()))


def default_max_lag(nobs: int) -> int:
    """Schwert's rule, clamped so the truncated sample keeps at least
    ``MIN_EFFECTIVE_OBS`` observations."""
    schwert = int(math.floor(12.0 * (nobs / 100.0) ** 0.25))
    return max(0, min(schwert, nobs - 1 - MIN_EFFECTIVE_OBS))


def _adf_design(values: np.ndarray, lag: int, det: Deterministic, nobs: int):
    """Rows for the ADF regression using the last ``nobs`` differences."""
    dy = np.diff(values)
    total = len(dy)
    start = total - nobs  # index into dy of the first used observation
    cols: list[np.ndarray] = []
    names: list[str] = []
    if det in (Deterministic.CONSTANT, Deterministic.CONSTANT_TREND):
        cols.append(np.ones(nobs))
        names.append("C")
    if det is Deterministic.CONSTANT_TREND:
        cols.append(np.arange(1.0, nobs + 1))
        names.append("TREND")
    cols.append(values[start : start + nobs])  # y_{t-1}
    names.append("Y(-1)")
    for j in range(1, lag + 1):
        cols.append(dy[start - j : start - j + nobs])
        names.append(f"D(Y(-{j}))")
    X = np.column_stack(cols)
    y = dy[start:]
    return y, X, tuple(names)


def _fit_adf(values: np.ndarray, lag: int, det: Deterministic, nobs: int) -> OlsFit:
    y, X, names = _adf_design(values, lag, det, nobs)
    if len(y) <= X.shape[1]:
        raise SampleError(
            f"{len(y)} observations cannot support the ADF regression with "
            f"{X.shape[1]} coefficients"
        )
    return fit_ols_arrays(y, X, names, has_intercept=det is not Deterministic.NONE)


def _validate_series(s: TimeSeries, max_lag: int) -> None:
    if np.ptp(s.values) == 0.0:
        raise DegenerateError(f"series {s.name!r} is constant; the ADF regression is degenerate")
    if max_lag > len(s) - 10:
        raise DomainError(
            f"max_lag {max_lag} too large for {len(s)} observations (limit {len(s) - 10})"
        )


def select_adf_lag(
    s: TimeSeries,
    spec: AdfSpec,
    max_lag: int | None = None,
    criterion: str | None = None,
) -> int:
    """Criterion-minimizing augmentation lag over 0..max_lag, all candidates
    fitted on the common max-lag-truncated sample; ties go to the smaller lag."""
    if max_lag is None:
        max_lag = spec.max_lag if spec.max_lag is not None else default_max_lag(len(s))
    criterion = criterion or spec.criterion
    _validate_series(s, max_lag)
    nobs = len(s) - 1 - max_lag
    if nobs < MIN_EFFECTIVE_OBS:
        raise SampleError(
            f"only {nobs} usable observations after truncation; need {MIN_EFFECTIVE_OBS}"
        )
    best_lag, best_ic = 0, math.inf
    for lag_ in range(max_lag + 1):
        fit = _fit_adf(s.values, lag_, spec.deterministic, nobs)
        ic = fit.aic if criterion == "aic" else fit.sic
        if ic < best_ic:
            best_lag, best_ic = lag_, ic
    return best_lag


def adf_test(s: TimeSeries, spec: AdfSpec = AdfSpec(), level: float = 0.05) -> AdfResult:
    """Run the ADF regression and return stat, p-value, critical values, verdict."""
    if not (0.0 < level < 1.0):
        raise DomainError(f"significance level must lie in (0, 1), got {level}")
    if spec.fixed_lag is not None:
        lag_ = spec.fixed_lag
        _validate_series(s, lag_)
    else:
        lag_ = select_adf_lag(s, spec)
    nobs = len(s) - 1 - lag_
    if nobs < MIN_EFFECTIVE_OBS:
        raise SampleError(
            f"only {nobs} usable observations at lag {lag_}; need {MIN_EFFECTIVE_OBS}"
        )
    fit = _fit_adf(s.values, lag_, spec.deterministic, nobs)
    stat = float(fit.tstat[fit.names.index("Y(-1)")])
    pvalue = float(mackinnon_pvalue(stat, spec.deterministic))
    crit = mackinnon_crit(spec.deterministic, nobs)
    return AdfResult(
        spec=spec,
        chosen_lag=lag_,
        stat=stat,
        pvalue=pvalue,
        crit=crit,
        verdict=verdict_from_pvalue(pvalue, level),
        level=level,
        nobs=nobs,
        fit=fit,
    )


def classify_integration(
    s: TimeSeries,
    spec: AdfSpec = AdfSpec(),
    level: float = 0.05,
    diff_spec: AdfSpec | None = None,
) -> IntegrationOrder:
    """Sequential level-then-difference classification into I(0), I(1), or I(>=2)."""
    level_result = adf_test(s, spec, level)
    if level_result.verdict is Verdict.STATIONARY:
        return IntegrationOrder(order=0, level_result=level_result, diff_result=None)
    diff_result = adf_test(difference(s, 1), diff_spec or spec, level)
    if diff_result.verdict is Verdict.STATIONARY:
        return IntegrationOrder(order=1, level_result=level_result, diff_result=diff_result)
    message = (
        f"series {s.name!r} still nonstationary after one difference; "
        "integration order is at least two"
    )
    warnings.warn(message, EstimationWarning, stacklevel=2)
    return IntegrationOrder(
        order=2, level_result=level_result, diff_result=diff_result, warning=message
    )
