"""ADF engine tests: oracles, invariances, verdict logic, classification."""

from __future__ import annotations

import math

import numpy as np
import pytest

from ardlkit.errors import DegenerateError, DomainError, EstimationWarning, SampleError
from ardlkit.mc import McConfig, df_statistics
from ardlkit.series import TimeSeries
from ardlkit.unitroot import (
    AdfSpec,
    Deterministic,
    Verdict,
    adf_test,
    classify_integration,
    default_max_lag,
    mackinnon_crit,
    mackinnon_pvalue,
    select_adf_lag,
    verdict_from_pvalue,
    _fit_adf,
)

# Frozen 16-observation fixture for the two-column oracle check.
SERIES_16 = [
    4.71, 5.80, 5.27, 4.59, 4.62, 5.39, 6.13, 5.81,
    5.03, 4.47, 5.12, 5.86, 5.50, 4.89, 5.21, 5.64,
]


def two_column_adf_oracle(values):
    """Direct OLS of the first difference on (1, lagged level); returns the
    t-ratio on the lagged level."""
    values = np.asarray(values, dtype=float)
    d = np.diff(values)
    x = values[:-1]
    n = len(d)
    X = np.column_stack([np.ones(n), x])
    beta = np.linalg.solve(X.T @ X, X.T @ d)
    resid = d - X @ beta
    sigma2 = resid @ resid / (n - 2)
    cov = sigma2 * np.linalg.inv(X.T @ X)
    return beta[1] / math.sqrt(cov[1, 1])


class TestVerdictReproduction:
    # Published (stat, p) rows feed the verdict layer directly.
    @pytest.mark.parametrize(
        "pvalue, expected",
        [
            (0.2663, Verdict.NONSTATIONARY),  # levels, trend case
            (0.7291, Verdict.NONSTATIONARY),
            (0.0579, Verdict.NONSTATIONARY),  # just misses 5%
            (0.0350, Verdict.STATIONARY),
            (0.0009, Verdict.STATIONARY),     # first differences
            (0.0001, Verdict.STATIONARY),
            (0.0000, Verdict.STATIONARY),
        ],
    )
    def test_table_rows(self, pvalue, expected):
        assert verdict_from_pvalue(pvalue, 0.05) is expected


class TestAdfTest:
    def test_matches_two_column_oracle(self):
        s = TimeSeries("f16", 1379, SERIES_16)
        res = adf_test(s, AdfSpec(deterministic=Deterministic.CONSTANT, fixed_lag=0))
        assert res.stat == pytest.approx(two_column_adf_oracle(SERIES_16), abs=1e-8)
        assert res.chosen_lag == 0
        assert res.nobs == 15

    def test_random_walk_not_rejected(self, rng):
        s = TimeSeries("rw", 2000, np.cumsum(rng.standard_normal(150)))
        res = adf_test(s, AdfSpec(fixed_lag=1))
        assert res.verdict is Verdict.NONSTATIONARY

    def test_stationary_ar1_rejected(self, rng):
        e = rng.standard_normal(200)
        y = np.zeros(200)
        for t in range(1, 200):
            y[t] = 0.4 * y[t - 1] + e[t]
        res = adf_test(TimeSeries("ar", 2000, y), AdfSpec(fixed_lag=0))
        assert res.verdict is Verdict.STATIONARY

    def test_crit_ordering(self, rng):
        s = TimeSeries("rw", 2000, np.cumsum(rng.standard_normal(80)))
        for det in Deterministic:
            res = adf_test(s, AdfSpec(deterministic=det, fixed_lag=0))
            crit = res.crit
            assert crit[0.01] < crit[0.05] < crit[0.10] < 0.0

    def test_scale_invariance(self, rng):
        base = np.cumsum(rng.standard_normal(60))
        a = adf_test(TimeSeries("a", 0, base), AdfSpec(fixed_lag=1))
        b = adf_test(TimeSeries("b", 0, 1000.0 * base), AdfSpec(fixed_lag=1))
        assert a.stat == pytest.approx(b.stat, abs=1e-9)

    def test_shift_invariance_with_constant(self, rng):
        base = np.cumsum(rng.standard_normal(60))
        a = adf_test(TimeSeries("a", 0, base), AdfSpec(fixed_lag=1))
        b = adf_test(TimeSeries("b", 0, base + 123.456), AdfSpec(fixed_lag=1))
        assert a.stat == pytest.approx(b.stat, abs=1e-9)

    def test_trend_invariance_with_trend_term(self, rng):
        base = np.cumsum(rng.standard_normal(60))
        trend = 0.7 * np.arange(60.0)
        spec = AdfSpec(deterministic=Deterministic.CONSTANT_TREND, fixed_lag=1)
        a = adf_test(TimeSeries("a", 0, base), spec)
        b = adf_test(TimeSeries("b", 0, base + trend + 5.0), spec)
        assert a.stat == pytest.approx(b.stat, abs=1e-9)

    def test_constant_series_degenerate(self):
        with pytest.raises(DegenerateError):
            adf_test(TimeSeries("c", 0, np.full(30, 2.5)), AdfSpec(fixed_lag=0))

    def test_short_sample(self, rng):
        with pytest.raises(SampleError):
            adf_test(TimeSeries("s", 0, rng.standard_normal(10)), AdfSpec(fixed_lag=0))

    def test_max_lag_invariant(self, rng):
        s = TimeSeries("s", 0, rng.standard_normal(20))
        with pytest.raises(DomainError):
            select_adf_lag(s, AdfSpec(), max_lag=11)  # > length - 10


class TestMackinnonSurfaces:
    def test_pvalue_monotone_decreasing_in_magnitude(self):
        for det in Deterministic:
            grid = np.linspace(-12.0, -0.2, 120)
            p = mackinnon_pvalue(grid, det)
            assert np.all(np.diff(p) > 0.0)  # increasing in stat = decreasing in |stat|

    def test_pvalue_clamps(self):
        assert mackinnon_pvalue(-25.0, Deterministic.CONSTANT) == 0.0
        assert mackinnon_pvalue(5.0, Deterministic.CONSTANT) == 1.0

    def test_asymptotic_crit_values(self):
        crit = mackinnon_crit(Deterministic.CONSTANT)
        assert crit[0.05] == pytest.approx(-2.86154, abs=1e-5)
        crit_ct = mackinnon_crit(Deterministic.CONSTANT_TREND)
        assert crit_ct[0.01] == pytest.approx(-3.95877, abs=1e-5)

    def test_finite_sample_crit_below_asymptotic(self):
        asym = mackinnon_crit(Deterministic.CONSTANT)[0.05]
        small = mackinnon_crit(Deterministic.CONSTANT, nobs=25)[0.05]
        assert small < asym


class TestLagSelection:
    def test_single_candidate(self, rng):
        s = TimeSeries("s", 0, np.cumsum(rng.standard_normal(40)))
        assert select_adf_lag(s, AdfSpec(), max_lag=0) == 0

    def test_matches_enumeration_oracle(self, rng):
        s = TimeSeries("s", 0, np.cumsum(rng.standard_normal(50)))
        max_lag = 4
        nobs = len(s) - 1 - max_lag
        ics = [
            _fit_adf(s.values, lag, Deterministic.CONSTANT, nobs).sic
            for lag in range(max_lag + 1)
        ]
        # first arg-minimum realizes the smaller-lag tie-break
        assert select_adf_lag(s, AdfSpec(), max_lag=max_lag) == int(np.argmin(ics))

    def test_white_noise_prefers_lag_zero(self):
        hits = 0
        reps = 500
        for i in range(reps):
            rng_i = np.random.default_rng(900 + i)
            s = TimeSeries("w", 0, rng_i.standard_normal(60))
            if select_adf_lag(s, AdfSpec(criterion="sic"), max_lag=4) == 0:
                hits += 1
        assert hits >= 0.90 * reps

    def test_schwert_default(self):
        assert default_max_lag(100) == 12
        assert default_max_lag(23) == 8  # clamped Schwert floor(12*(23/100)^.25)


class TestClassification:
    def test_stationary_level_is_order_zero(self, rng):
        e = rng.standard_normal(120)
        y = np.zeros(120)
        for t in range(1, 120):
            y[t] = 0.3 * y[t - 1] + e[t]
        res = classify_integration(TimeSeries("x", 0, y), AdfSpec(fixed_lag=0))
        assert res.order == 0
        assert res.diff_result is None

    def test_random_walk_is_order_one(self, rng):
        s = TimeSeries("x", 0, np.cumsum(rng.standard_normal(120)))
        res = classify_integration(s, AdfSpec(fixed_lag=0))
        assert res.order == 1
        assert res.level_result.verdict is Verdict.NONSTATIONARY
        assert res.diff_result.verdict is Verdict.STATIONARY

    def test_double_cumsum_is_order_two(self):
        import warnings as _warnings

        hits = 0
        reps = 500
        for i in range(reps):
            rng_i = np.random.default_rng(3000 + i)
            y = np.cumsum(np.cumsum(rng_i.standard_normal(100)))
            with _warnings.catch_warnings(record=True) as caught:
                _warnings.simplefilter("always")
                res = classify_integration(TimeSeries("x", 0, y), AdfSpec())
            if res.order == 2:
                assert res.warning is not None
                assert any(issubclass(w.category, EstimationWarning) for w in caught)
                hits += 1
        assert hits >= 0.90 * reps

    def test_diff_spec_override(self, rng):
        s = TimeSeries("x", 0, np.cumsum(rng.standard_normal(100)))
        res = classify_integration(
            s,
            AdfSpec(deterministic=Deterministic.CONSTANT_TREND, fixed_lag=0),
            diff_spec=AdfSpec(deterministic=Deterministic.NONE, fixed_lag=0),
        )
        if res.diff_result is not None:
            assert res.diff_result.spec.deterministic is Deterministic.NONE


class TestSizeControl:
    def test_rejection_rate_near_nominal(self):
        stats = df_statistics(
            McConfig(replications=2000, sample_size=100, seed=46), Deterministic.CONSTANT
        )
        pvals = mackinnon_pvalue(stats, Deterministic.CONSTANT)
        rate = float(np.mean(pvals < 0.05))
        assert 0.02 <= rate <= 0.09
