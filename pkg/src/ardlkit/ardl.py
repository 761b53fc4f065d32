"""ARDL estimation, order selection, bounds cointegration test, long-run
coefficients, and the error-correction form.

The model is

    y_t = a0 + sum_{j=1..p} a_j y_{t-j}
             + sum_i sum_{l=0..q_i} g_{il} x_{i,t-l} + e_t

estimated by OLS. Long-run coefficients are theta_i = (sum_l g_{il}) /
(1 - sum_j a_j) with delta-method standard errors. The error-correction form
is the exact one-step reparameterization of the fitted model (coefficients are
mapped, not refit), so lambda = -(1 - sum_j a_j) holds identically and the
residuals equal the ARDL residuals.

The bounds test fits the conditional error-correction regression and compares
the Wald F statistic on the lagged levels against the Pesaran, Shin & Smith
(2001) critical-value bounds shipped in ``data/pesaran_bounds.json``.

References
----------
Pesaran, M. H., Shin, Y., & Smith, R. J. (2001). Bounds testing approaches to
    the analysis of level relationships. Journal of Applied Econometrics 16,
    289-326.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
import warnings
from dataclasses import dataclass
from enum import Enum
from importlib import resources

import numpy as np

from . import probdist
from .errors import (
    BoundsLookupError,
    DomainError,
    EstimationWarning,
    RankError,
    SampleError,
    SingularLongRunError,
)
from .ols import OlsFit, fit_ols, fit_ols_arrays
from .series import Dataset, DesignMatrix, build_design, term_name

_SINGULAR_TOL = 1e-8


class BoundsCase(str, Enum):
    """Deterministic-term case of the bounds test regression."""

    NONE = "none"                  # no intercept, no trend
    REST_CONST = "rest_const"      # intercept included and restricted under H0
    UNREST_CONST = "unrest_const"  # intercept included, unrestricted


_CASE_ALIASES = {
    "none": BoundsCase.NONE,
    "i": BoundsCase.NONE,
    "rest_const": BoundsCase.REST_CONST,
    "restricted_constant": BoundsCase.REST_CONST,
    "ii": BoundsCase.REST_CONST,
    "unrest_const": BoundsCase.UNREST_CONST,
    "unrestricted_constant": BoundsCase.UNREST_CONST,
    "iii": BoundsCase.UNREST_CONST,
}


def parse_case(case: str | BoundsCase) -> BoundsCase:
    if isinstance(case, BoundsCase):
        return case
    try:
        return _CASE_ALIASES[str(case).strip().lower()]
    except KeyError:
        raise BoundsLookupError(f"unsupported bounds case {case!r}") from None


class CointVerdict(str, Enum):
    COINTEGRATED = "cointegrated"
    INCONCLUSIVE = "inconclusive"
    NOT_COINTEGRATED = "not_cointegrated"


@dataclass(frozen=True)
class ArdlOrder:
    """Lag order (p, q_1..q_k): p own lags, q_i distributed lags per regressor."""

    p: int
    q: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "q", tuple(int(v) for v in self.q))
        if self.p < 1:
            raise DomainError(f"p must be at least 1, got {self.p}")
        if any(v < 0 for v in self.q):
            raise DomainError(f"q lags must be non-negative, got {self.q}")

    @property
    def n_coefficients(self) -> int:
        return 1 + self.p + sum(v + 1 for v in self.q)

    @property
    def max_lag(self) -> int:
        return max(self.p, max(self.q, default=0))


@dataclass(frozen=True)
class ArdlModel:
    order: ArdlOrder
    dep: str
    regressors: tuple[str, ...]
    fit: OlsFit
    start_period: int
    end_period: int

    @property
    def alpha(self) -> np.ndarray:
        """Own-lag coefficients a_1..a_p."""
        return self.fit.coef[1 : 1 + self.order.p]

    def gamma(self, i: int) -> np.ndarray:
        """Distributed-lag coefficients g_{i,0..q_i} of regressor i."""
        start = 1 + self.order.p + sum(v + 1 for v in self.order.q[:i])
        return self.fit.coef[start : start + self.order.q[i] + 1]

    def _gamma_slice(self, i: int) -> slice:
        start = 1 + self.order.p + sum(v + 1 for v in self.order.q[:i])
        return slice(start, start + self.order.q[i] + 1)

    @property
    def intercept(self) -> float:
        return float(self.fit.coef[0])

    @property
    def alpha_sum(self) -> float:
        return float(self.alpha.sum())

    @property
    def ar_roots_stable(self) -> bool:
        """True when all roots of 1 - sum a_j z^j lie outside the unit circle."""
        poly = np.concatenate(([1.0], -self.alpha))
        roots = np.roots(poly[::-1])  # polynomial in z, ascending -> np order
        if roots.size == 0:
            return True
        return bool(np.all(np.abs(roots) > 1.0))


@dataclass(frozen=True)
class LongRunCoeffs:
    names: tuple[str, ...]
    theta: np.ndarray
    stderr: np.ndarray
    tstat: np.ndarray
    pvalue: np.ndarray
    intercept_lr: float


@dataclass(frozen=True)
class BoundsResult:
    fstat: float
    k: int
    case: BoundsCase
    bounds: dict[float, tuple[float, float]]
    verdict: CointVerdict
    strongest_level: float | None
    df: tuple[int, int]


@dataclass(frozen=True)
class EcmResult:
    lam: float
    stderr: float
    tstat: float
    pvalue: float
    short_run_names: tuple[str, ...]
    short_run_coef: np.ndarray
    short_run_stderr: np.ndarray
    residuals: np.ndarray
    warning: str | None = None


def _ardl_terms(dep: str, regressors: tuple[str, ...], order: ArdlOrder):
    terms = [(dep, j) for j in range(1, order.p + 1)]
    for name, q_i in zip(regressors, order.q):
        terms.extend((name, l) for l in range(q_i + 1))
    return terms


def fit_ardl(
    ds: Dataset, dep: str, regressors: list[str] | tuple[str, ...], order: ArdlOrder
) -> ArdlModel:
    """OLS fit of the ARDL design with intercept; columns named ``VAR(-k)``."""
    regressors = tuple(regressors)
    if len(order.q) != len(regressors):
        raise DomainError(
            f"order has {len(order.q)} q entries for {len(regressors)} regressors"
        )
    design = build_design(ds, dep, _ardl_terms(dep, regressors, order), intercept=True)
    fit = fit_ols(design)
    model = ArdlModel(
        order=order,
        dep=dep,
        regressors=regressors,
        fit=fit,
        start_period=design.start_period,
        end_period=design.end_period,
    )
    if not model.ar_roots_stable:
        warnings.warn(
            "autoregressive polynomial has a root on or inside the unit circle",
            EstimationWarning,
            stacklevel=2,
        )
    return model


def select_order(
    ds: Dataset,
    dep: str,
    regressors: list[str] | tuple[str, ...],
    p_max: int = 2,
    q_max: int = 2,
    criterion: str = "aic",
) -> ArdlOrder:
    """Exhaustive grid search over p in 1..p_max, q_i in 0..q_max.

    Every candidate is fitted on the common sample truncated by
    ``max(p_max, q_max)`` so criteria are comparable; ties break toward fewer
    parameters, then the lexicographically smaller (p, q).
    """
    regressors = tuple(regressors)
    if p_max < 1 or q_max < 0:
        raise DomainError("need p_max >= 1 and q_max >= 0")
    if criterion not in ("aic", "sic"):
        raise DomainError(f"criterion must be 'aic' or 'sic', got {criterion!r}")
    common_lag = max(p_max, q_max)
    candidates = [
        ArdlOrder(p, q)
        for p in range(1, p_max + 1)
        for q in itertools.product(range(q_max + 1), repeat=len(regressors))
    ]
    # Sorted so the first strict minimum realizes the tie-break order.
    candidates.sort(key=lambda o: (o.n_coefficients, o.p, o.q))

    best: ArdlOrder | None = None
    best_ic = math.inf
    errors: list[str] = []
    for order in candidates:
        try:
            design = build_design(ds, dep, _ardl_terms(dep, regressors, order), intercept=True)
            drop = common_lag - order.max_lag
            X = design.regressors[drop:]
            y = design.response[drop:]
            if len(y) <= X.shape[1]:
                raise SampleError("common sample too short for this candidate")
            fit = fit_ols_arrays(y, X, design.columns, has_intercept=True)
        except (SampleError, RankError) as exc:
            errors.append(f"({order.p}, {order.q}): {exc}")
            continue
        ic = fit.aic if criterion == "aic" else fit.sic
        if ic < best_ic:
            best, best_ic = order, ic
    if best is None:
        raise SampleError(
            "no ARDL candidate was estimable on the common sample: " + "; ".join(errors)
        )
    return best


def long_run(model: ArdlModel) -> LongRunCoeffs:
    """Long-run coefficients theta_i = (sum_l g_il) / (1 - sum_j a_j) with
    delta-method standard errors from the OLS coefficient covariance."""
    d = 1.0 - model.alpha_sum
    if abs(d) < _SINGULAR_TOL:
        raise SingularLongRunError(
            f"1 - sum(alpha) = {d:.3e}: the lag polynomial has a unit root, "
            "no long-run solution exists"
        )
    k_coef = model.fit.k
    cov = model.fit.cov
    p = model.order.p

    names = model.regressors
    theta = np.empty(len(names))
    stderr = np.empty(len(names))
    for i in range(len(names)):
        gam = model.gamma(i)
        s_i = float(gam.sum())
        theta[i] = s_i / d
        grad = np.zeros(k_coef)
        grad[1 : 1 + p] = s_i / d**2  # d theta / d alpha_j
        grad[model._gamma_slice(i)] = 1.0 / d
        stderr[i] = math.sqrt(max(float(grad @ cov @ grad), 0.0))

    with np.errstate(divide="ignore", invalid="ignore"):
        tstat = np.where(stderr > 0.0, theta / np.where(stderr > 0.0, stderr, 1.0), np.inf)
    tdist = probdist.student_t(model.fit.n - model.fit.k)
    pvalue = np.array(
        [2.0 * probdist.survival(tdist, abs(t)) if math.isfinite(t) else 0.0 for t in tstat]
    )
    return LongRunCoeffs(
        names=names,
        theta=theta,
        stderr=stderr,
        tstat=tstat,
        pvalue=pvalue,
        intercept_lr=model.intercept / d,
    )


def _bounds_table() -> dict:
    with resources.files("ardlkit.data").joinpath("pesaran_bounds.json").open("rb") as fh:
        asset = json.load(fh)
    canonical = json.dumps(asset["cases"], sort_keys=True, separators=(",", ":"))
    digest = hashlib.sha256(canonical.encode()).hexdigest()
    if digest != asset["checksum_sha256"]:
        raise BoundsLookupError("bounds critical-value asset failed its checksum")
    return asset["cases"]


_BOUNDS = _bounds_table()


def pesaran_bounds(
    k: int, level: float, case: str | BoundsCase = BoundsCase.NONE
) -> tuple[float, float]:
    """Exact (lower, upper) critical bound lookup from the shipped table."""
    case = parse_case(case)
    table = _BOUNDS[case.value]
    key = str(int(k))
    if key not in table:
        raise BoundsLookupError(f"k={k} outside the shipped table range 0..10")
    level_key = f"{level:.2f}"
    if level_key not in table[key]:
        raise BoundsLookupError(f"no bounds at level {level}; shipped levels are 10/5/1%")
    lower, upper = table[key][level_key]
    return float(lower), float(upper)


def bounds_verdict(
    fstat: float, bounds: dict[float, tuple[float, float]]
) -> tuple[CointVerdict, float | None]:
    """Compare F to the per-level bounds.

    Cointegrated at the strongest (smallest) level whose upper bound F
    exceeds; not cointegrated when F sits below every lower bound; otherwise
    inconclusive.
    """
    levels = sorted(bounds)
    exceeded = [lv for lv in levels if fstat > bounds[lv][1]]
    if exceeded:
        return CointVerdict.COINTEGRATED, min(exceeded)
    if all(fstat < bounds[lv][0] for lv in levels):
        return CointVerdict.NOT_COINTEGRATED, None
    return CointVerdict.INCONCLUSIVE, None


def _uecm_design(
    ds: Dataset,
    dep: str,
    regressors: tuple[str, ...],
    order: ArdlOrder,
    case: BoundsCase,
):
    """Conditional error-correction design: response D(dep); columns are the
    case intercept, lagged levels, and the order-implied lagged differences."""
    max_lag = max(order.max_lag, 1)
    n = ds.nobs - max_lag
    dep_v = ds.values(dep)
    dy = np.diff(dep_v)

    def diff_at(values: np.ndarray, lag_: int) -> np.ndarray:
        dv = np.diff(values)
        start = len(dv) - n - lag_
        return dv[start : start + n]

    def level_lag1(values: np.ndarray) -> np.ndarray:
        start = len(values) - n - 1
        return values[start : start + n]

    cols: list[np.ndarray] = []
    names: list[str] = []
    level_names: list[str] = []
    if case in (BoundsCase.REST_CONST, BoundsCase.UNREST_CONST):
        cols.append(np.ones(n))
        names.append("C")
        if case is BoundsCase.REST_CONST:
            level_names.append("C")
    cols.append(level_lag1(dep_v))
    names.append(term_name(dep, 1))
    level_names.append(term_name(dep, 1))
    for name in regressors:
        cols.append(level_lag1(ds.values(name)))
        names.append(term_name(name, 1))
        level_names.append(term_name(name, 1))
    for j in range(1, order.p):
        cols.append(diff_at(dep_v, j))
        names.append(f"D({term_name(dep, j)})")
    for name, q_i in zip(regressors, order.q):
        for l in range(max(q_i, 1)):
            cols.append(diff_at(ds.values(name), l))
            names.append(f"D({term_name(name, l)})")

    y = dy[len(dy) - n :]
    X = np.column_stack(cols)
    if n <= X.shape[1]:
        raise SampleError(f"{n} observations cannot support {X.shape[1]} regressors")
    return y, X, tuple(names), tuple(level_names)


def bounds_test(
    ds: Dataset,
    dep: str,
    regressors: list[str] | tuple[str, ...],
    order: ArdlOrder,
    case: str | BoundsCase = BoundsCase.NONE,
    levels: tuple[float, ...] = (0.10, 0.05, 0.01),
) -> BoundsResult:
    """Wald F test that every lagged-level coefficient in the conditional
    error-correction regression is zero, judged against the Pesaran bounds."""
    regressors = tuple(regressors)
    case = parse_case(case)
    y, X, names, level_names = _uecm_design(ds, dep, regressors, order, case)
    unrestricted = fit_ols_arrays(
        y, X, names, has_intercept=case is not BoundsCase.NONE
    )
    keep = [i for i, nm in enumerate(names) if nm not in level_names]
    m = len(level_names)
    n = len(y)
    if keep:
        restricted_rss = float(
            fit_ols_arrays(y, X[:, keep], tuple(names[i] for i in keep)).rss
        )
    else:
        restricted_rss = float(y @ y)
    fstat = ((restricted_rss - unrestricted.rss) / m) / (
        unrestricted.rss / (n - unrestricted.k)
    )
    bounds = {lv: pesaran_bounds(len(regressors), lv, case) for lv in levels}
    verdict, strongest = bounds_verdict(fstat, bounds)
    return BoundsResult(
        fstat=float(fstat),
        k=len(regressors),
        case=case,
        bounds=bounds,
        verdict=verdict,
        strongest_level=strongest,
        df=(m, n - unrestricted.k),
    )


def fit_ecm(model: ArdlModel, longrun: LongRunCoeffs | None = None) -> EcmResult:
    """One-step error-correction reparameterization of the fitted ARDL.

    Coefficients are algebraic maps of the ARDL estimates (standard errors by
    the corresponding linear combinations of the coefficient covariance), so
    lambda = -(1 - sum alpha) exactly and the residuals are the ARDL residuals.
    """
    lr = longrun if longrun is not None else long_run(model)
    fit = model.fit
    cov = fit.cov
    p = model.order.p
    k_coef = fit.k

    def lincomb(vec: np.ndarray) -> float:
        return math.sqrt(max(float(vec @ cov @ vec), 0.0))

    # lambda = sum(alpha) - 1
    a_vec = np.zeros(k_coef)
    a_vec[1 : 1 + p] = 1.0
    lam = model.alpha_sum - 1.0
    lam_se = lincomb(a_vec)

    names: list[str] = []
    coefs: list[float] = []
    ses: list[float] = []
    for j in range(1, p):
        vec = np.zeros(k_coef)
        vec[1 + j : 1 + p] = -1.0  # -(a_{j+1} + ... + a_p)
        names.append(f"D({term_name(model.dep, j)})")
        coefs.append(float(-model.alpha[j:].sum()))
        ses.append(lincomb(vec))
    for i, (name, q_i) in enumerate(zip(model.regressors, model.order.q)):
        sl = model._gamma_slice(i)
        gam = model.gamma(i)
        vec = np.zeros(k_coef)
        vec[sl.start] = 1.0
        names.append(f"D({name})")
        coefs.append(float(gam[0]))
        ses.append(lincomb(vec))
        for l in range(1, q_i):
            vec = np.zeros(k_coef)
            vec[sl.start + l + 1 : sl.stop] = -1.0  # -(g_{l+1} + ... + g_q)
            names.append(f"D({term_name(name, l)})")
            coefs.append(float(-gam[l + 1 :].sum()))
            ses.append(lincomb(vec))

    tstat = lam / lam_se if lam_se > 0.0 else math.inf
    tdist = probdist.student_t(fit.n - fit.k)
    pvalue = 2.0 * probdist.survival(tdist, abs(tstat)) if math.isfinite(tstat) else 0.0

    warning = None
    if not (-1.0 <= lam < 0.0):
        warning = (
            f"adjustment coefficient {lam:.6f} outside [-1, 0): "
            "the correction mechanism is non-converging"
        )
        warnings.warn(warning, EstimationWarning, stacklevel=2)

    return EcmResult(
        lam=float(lam),
        stderr=float(lam_se),
        tstat=float(tstat),
        pvalue=float(pvalue),
        short_run_names=tuple(names),
        short_run_coef=np.array(coefs),
        short_run_stderr=np.array(ses),
        residuals=fit.residuals,
        warning=warning,
    )


def adjustment_narrative(lam: float, pvalue: float, level: float = 0.05) -> str:
    """One-line reading of the adjustment coefficient for reports."""
    pct = int(abs(lam) * 100.0)
    sign = "negative" if lam < 0 else "non-negative"
    sig = "significant" if pvalue < level else "not significant"
    return (
        f"adjustment coefficient {lam:.6f} is {sign} and {sig} at the "
        f"{level:.0%} level; {pct}% of disequilibrium corrected per period"
    )
