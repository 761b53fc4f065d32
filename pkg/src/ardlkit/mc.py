"""Seeded Monte Carlo harness: critical-value regeneration and synthetic DGPs.

Innovations come from the counter-based Philox4x64-10 generator
(``numpy.random.Philox``) keyed by the seed, with a fixed per-replication
stride: replication ``i`` always consumes draw positions
``[i * stride, (i+1) * stride)``, so chunked, parallel, and serial execution
produce bit-identical statistic streams. Uniforms are mapped to normals
through the inverse-CDF in :mod:`ardlkit.probdist` (one shared, tested code
path).

Statistic loops are delegated to :mod:`ardlkit._kernels`, which holds a
numba-compiled implementation and a pure-NumPy fallback selected by the
``ARDLKIT_BACKEND`` environment variable.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np

from . import _kernels, probdist
from .ardl import BoundsCase, parse_case
from .errors import DomainError
from .series import Dataset, TimeSeries
from .unitroot import Deterministic

_CHUNK = 8192
_DF_CASE_ID = {
    Deterministic.NONE: _kernels.CASE_NONE,
    Deterministic.CONSTANT: _kernels.CASE_CONST,
    Deterministic.CONSTANT_TREND: _kernels.CASE_CONST_TREND,
}
_BOUNDS_CASE_ID = {
    BoundsCase.NONE: 0,
    BoundsCase.REST_CONST: 1,
    BoundsCase.UNREST_CONST: 2,
}


@dataclass(frozen=True)
class DgpSpec:
    """Named data-generating process with parameters (see ``simulate_dgp``)."""

    kind: str
    params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class McConfig:
    replications: int
    sample_size: int
    seed: int
    dgp: DgpSpec | None = None

    def __post_init__(self) -> None:
        if self.replications < 1:
            raise DomainError("replications must be positive")
        if self.sample_size < 2:
            raise DomainError("sample_size must be at least 2")


@dataclass(frozen=True)
class McQuantiles:
    probs: tuple[float, ...]
    values: np.ndarray
    mc_se: np.ndarray
    n: int


def innovations(seed: int, replications: int, draws_per_rep: int, start_rep: int = 0) -> np.ndarray:
    """Standard-normal innovation block, shape (replications, draws_per_rep).

    Row ``i`` depends only on (seed, start_rep + i): each replication owns a
    fixed stride of the Philox stream keyed by ``seed``. Philox advances in
    128-bit counter blocks (four 64-bit draws each), so the stride is rounded
    up to a multiple of four draws and positioned with ``advance``.
    """
    stride = 4 * ((draws_per_rep + 3) // 4)
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(start_rep * (stride // 4))
    u = np.random.Generator(bitgen).random((replications, stride))[:, :draws_per_rep]
    # random() yields multiples of 2^-53 in [0, 1); shift by half a grid step
    # so the inverse CDF never sees an endpoint.
    u = u + 2.0**-54
    return probdist.norm_quantile(u)


def empirical_quantiles(stats: np.ndarray, probs: Iterable[float]) -> McQuantiles:
    """Empirical quantiles with finite-difference-density Monte Carlo SEs."""
    stats = np.sort(np.asarray(stats, dtype=np.float64))
    n = len(stats)
    probs = tuple(float(p) for p in probs)
    if any(not 0.0 < p < 1.0 for p in probs):
        raise DomainError("quantile probabilities must lie in (0, 1)")
    if sorted(probs) != list(probs):
        raise DomainError("quantile probabilities must be increasing")
    values = np.quantile(stats, probs)
    se = np.empty(len(probs))
    for i, p in enumerate(probs):
        delta = math.sqrt(p * (1.0 - p) / n)
        h = min(2.0 * delta, min(p, 1.0 - p) / 2.0)
        lo, hi = np.quantile(stats, [p - h, p + h])
        # se(q_p) = sqrt(p(1-p)/n) / f(q_p), density by central differences
        se[i] = delta * (hi - lo) / (2.0 * h) if h > 0.0 else 0.0
    return McQuantiles(probs=probs, values=values, mc_se=se, n=n)


def _dump_stats(path: str | Path, stats: np.ndarray) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["replication", "statistic"])
        for i, s in enumerate(stats):
            writer.writerow([i, repr(float(s))])


def simulate_df(
    config: McConfig,
    case: Deterministic = Deterministic.CONSTANT,
    probs: Iterable[float] = (0.01, 0.05, 0.10),
    dump_path: str | Path | None = None,
) -> McQuantiles:
    """Empirical ADF t-ratio quantiles under the driftless random-walk null."""
    stats = df_statistics(config, case)
    if dump_path is not None:
        _dump_stats(dump_path, stats)
    return empirical_quantiles(stats, probs)


def df_statistics(config: McConfig, case: Deterministic = Deterministic.CONSTANT) -> np.ndarray:
    """The raw per-replication ADF t-ratio stream (ordered by replication)."""
    case_id = _DF_CASE_ID[Deterministic(case)]
    T = config.sample_size
    out = np.empty(config.replications)
    for start in range(0, config.replications, _CHUNK):
        count = min(_CHUNK, config.replications - start)
        innov = innovations(config.seed, count, T, start_rep=start)
        out[start : start + count] = _kernels.df_stats(innov, case_id)
    return out


def simulate_bounds(
    config: McConfig,
    k: int,
    case: str | BoundsCase = BoundsCase.NONE,
    i1: bool = True,
    probs: Iterable[float] = (0.90, 0.95, 0.99),
    dump_path: str | Path | None = None,
) -> McQuantiles:
    """Empirical bounds-F quantiles under the no-level-relationship null.

    ``i1=True`` is the all-I(1) polar case (regressors are independent random
    walks); ``i1=False`` uses i.i.d. regressor levels (all-I(0) polar case).
    """
    stats = bounds_statistics(config, k, case, i1)
    if dump_path is not None:
        _dump_stats(dump_path, stats)
    return empirical_quantiles(stats, probs)


def bounds_statistics(
    config: McConfig, k: int, case: str | BoundsCase = BoundsCase.NONE, i1: bool = True
) -> np.ndarray:
    if k < 1:
        raise DomainError("k must be at least 1")
    case_id = _BOUNDS_CASE_ID[parse_case(case)]
    T = config.sample_size
    stride = (k + 1) * T
    out = np.empty(config.replications)
    for start in range(0, config.replications, max(_CHUNK // (k + 1), 1)):
        count = min(max(_CHUNK // (k + 1), 1), config.replications - start)
        innov = innovations(config.seed, count, stride, start_rep=start)
        block = innov.reshape(count, k + 1, T)
        out[start : start + count] = _kernels.bounds_fstats(block, case_id, i1)
    return out


def _require(params: dict, key: str, default=None):
    if key in params:
        return params[key]
    if default is not None:
        return default
    raise DomainError(f"DGP parameter {key!r} is required")


def simulate_dgp(dgp: DgpSpec, sample_size: int, seed: int, start_period: int = 1) -> Dataset:
    """Deterministic-by-seed synthetic dataset for recovery and power studies.

    Kinds and parameters:

    * ``random_walk``: ``names`` (list, default ``["Y"]``) — independent
      driftless random walks.
    * ``ardl``: ``alpha`` (own-lag coefficients), ``gamma`` (per-regressor
      distributed-lag coefficient lists), ``intercept`` (default 0),
      ``sigma`` (innovation sd, default 1), ``x_process`` (``iid`` | ``walk``,
      default ``iid``), ``burn`` (default 50).
    * ``ecm``: ``lam`` (adjustment), ``theta`` (long-run coefficients),
      ``intercept`` (default 0), ``sigma`` (default 1) — regressors are
      random walks.
    * ``broken_slope``: ``beta1``, ``beta2``, ``break_frac`` (default 0.5),
      ``intercept`` (default 0), ``sigma`` (default 1), ``x_mean`` (default 0)
      — a static regression whose slope switches mid-sample.
    """
    if sample_size < 2:
        raise DomainError("sample_size must be at least 2")
    p = dgp.params

    if dgp.kind == "random_walk":
        names = list(_require(p, "names", ["Y"]))
        e = innovations(seed, 1, len(names) * sample_size)[0].reshape(len(names), sample_size)
        series = [TimeSeries(nm, start_period, np.cumsum(e[i])) for i, nm in enumerate(names)]
        return Dataset.from_series(series)

    if dgp.kind == "ardl":
        alpha = np.asarray(_require(p, "alpha"), dtype=np.float64)
        gamma = [np.asarray(g, dtype=np.float64) for g in _require(p, "gamma")]
        intercept = float(p.get("intercept", 0.0))
        sigma = float(p.get("sigma", 1.0))
        x_process = p.get("x_process", "iid")
        burn = int(p.get("burn", 50))
        if len(alpha) < 1:
            raise DomainError("ardl DGP needs at least one own-lag coefficient")
        if x_process not in ("iid", "walk"):
            raise DomainError(f"x_process must be 'iid' or 'walk', got {x_process!r}")
        if abs(alpha.sum()) >= 1.0:
            raise DomainError("ardl DGP requires sum(alpha) inside the unit interval")
        k = len(gamma)
        total = sample_size + burn
        draws = innovations(seed, 1, (k + 1) * total)[0]
        eps = sigma * draws[:total]
        xs = draws[total:].reshape(k, total)
        if x_process == "walk":
            xs = np.cumsum(xs, axis=1)
        pmax = len(alpha)
        y = np.zeros(total)
        for t in range(total):
            acc = intercept + eps[t]
            for j in range(1, pmax + 1):
                if t - j >= 0:
                    acc += alpha[j - 1] * y[t - j]
            for i in range(k):
                g = gamma[i]
                for l in range(len(g)):
                    if t - l >= 0:
                        acc += g[l] * xs[i, t - l]
            y[t] = acc
        series = [TimeSeries("Y", start_period, y[burn:])]
        for i in range(k):
            series.append(TimeSeries(f"X{i + 1}", start_period, xs[i, burn:]))
        return Dataset.from_series(series)

    if dgp.kind == "ecm":
        lam = float(_require(p, "lam"))
        theta = np.asarray(_require(p, "theta"), dtype=np.float64)
        intercept = float(p.get("intercept", 0.0))
        sigma = float(p.get("sigma", 1.0))
        if not (-2.0 < lam < 0.0):
            raise DomainError(f"ecm DGP needs lam in (-2, 0), got {lam}")
        k = len(theta)
        draws = innovations(seed, 1, (k + 1) * sample_size)[0]
        eps = sigma * draws[:sample_size]
        xs = np.cumsum(draws[sample_size:].reshape(k, sample_size), axis=1)
        y = np.zeros(sample_size)
        y[0] = intercept + theta @ xs[:, 0]
        for t in range(1, sample_size):
            eq_err = y[t - 1] - theta @ xs[:, t - 1] - intercept
            y[t] = y[t - 1] + lam * eq_err + eps[t]
        series = [TimeSeries("Y", start_period, y)]
        for i in range(k):
            series.append(TimeSeries(f"X{i + 1}", start_period, xs[i]))
        return Dataset.from_series(series)

    if dgp.kind == "broken_slope":
        beta1 = float(_require(p, "beta1"))
        beta2 = float(_require(p, "beta2"))
        frac = float(p.get("break_frac", 0.5))
        intercept = float(p.get("intercept", 0.0))
        sigma = float(p.get("sigma", 1.0))
        if not (0.0 < frac < 1.0):
            raise DomainError(f"break_frac must lie in (0, 1), got {frac}")
        draws = innovations(seed, 1, 2 * sample_size)[0]
        eps = sigma * draws[:sample_size]
        x = draws[sample_size:] + float(p.get("x_mean", 0.0))
        cut = int(sample_size * frac)
        beta = np.where(np.arange(sample_size) < cut, beta1, beta2)
        y = intercept + beta * x + eps
        return Dataset.from_series(
            [TimeSeries("Y", start_period, y), TimeSeries("X1", start_period, x)]
        )

    raise DomainError(f"unknown DGP kind {dgp.kind!r}")
