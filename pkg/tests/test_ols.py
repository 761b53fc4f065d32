"""OLS engine tests: hand-solved oracles, invariants, recursive residuals."""

from __future__ import annotations

import math

import numpy as np
import pytest

from ardlkit.errors import EstimationWarning, RankError, SampleError
from ardlkit.ols import fit_ols, fit_ols_arrays, recursive_residuals
from ardlkit.series import DesignMatrix


def normal_equation_oracle(y, X):
    return np.linalg.solve(X.T @ X, X.T @ y)


def rolling_recresid_oracle(y, X):
    """Refit OLS on each prefix and standardize the one-step prediction error."""
    n, k = X.shape
    out = []
    for t in range(k, n):
        Xp, yp = X[:t], y[:t]
        beta = np.linalg.solve(Xp.T @ Xp, Xp.T @ yp)
        f = 1.0 + X[t] @ np.linalg.solve(Xp.T @ Xp, X[t])
        out.append((y[t] - X[t] @ beta) / math.sqrt(f))
    return np.array(out)


class TestFitOls:
    def test_exact_line(self):
        y = np.array([1.0, 2.0, 3.0])
        X = np.column_stack([np.ones(3), [1.0, 2.0, 3.0]])
        fit = fit_ols_arrays(y, X, ("C", "TREND"), has_intercept=True)
        assert fit.coef == pytest.approx([0.0, 1.0], abs=1e-12)
        assert np.allclose(fit.residuals, 0.0, atol=1e-12)
        assert fit.r2 == pytest.approx(1.0)

    def test_no_intercept_slope(self):
        y = np.array([2.0, 4.0, 6.0, 8.0])
        X = np.array([[1.0], [2.0], [3.0], [4.0]])
        fit = fit_ols_arrays(y, X, ("x",))
        assert fit.coef[0] == pytest.approx(2.0, abs=1e-14)

    def test_hand_solved_normal_equations(self):
        # sums: Sx=15, Sy=14, Sxy=52, Sxx=55 -> slope (5*52-15*14)/(5*55-225) = 1
        y = np.array([1.0, 2.0, 2.0, 4.0, 5.0])
        X = np.column_stack([np.ones(5), [1.0, 2.0, 3.0, 4.0, 5.0]])
        fit = fit_ols_arrays(y, X, ("C", "x"), has_intercept=True)
        assert fit.coef[1] == pytest.approx(1.0, abs=1e-12)
        assert fit.coef[0] == pytest.approx(-0.2, abs=1e-12)

    def test_matches_normal_equation_oracle(self, rng):
        for _ in range(50):
            n = int(rng.integers(10, 51))
            k = int(rng.integers(1, 7))
            if n <= k:
                continue
            X = np.column_stack([np.ones(n), rng.standard_normal((n, k - 1))]) if k > 1 else np.ones((n, 1))
            y = X @ rng.normal(size=k) + rng.standard_normal(n)
            fit = fit_ols_arrays(y, X)
            assert np.allclose(fit.coef, normal_equation_oracle(y, X), atol=1e-9)

    def test_residual_orthogonality(self, rng):
        X = np.column_stack([np.ones(40), rng.standard_normal((40, 3))])
        y = rng.standard_normal(40) * 5.0
        fit = fit_ols_arrays(y, X)
        scale = np.abs(X).max() * np.abs(fit.residuals).max()
        assert np.max(np.abs(X.T @ fit.residuals)) <= 1e-8 * max(scale, 1.0)

    def test_tstat_times_stderr_is_coef(self, rng):
        X = np.column_stack([np.ones(25), rng.standard_normal((25, 2))])
        y = rng.standard_normal(25)
        fit = fit_ols_arrays(y, X)
        assert np.allclose(fit.tstat * fit.stderr, fit.coef, atol=1e-10)

    def test_scale_equivariance(self, rng):
        X = np.column_stack([np.ones(30), rng.standard_normal((30, 2))])
        y = rng.standard_normal(30) + X @ np.array([1.0, 0.5, -0.3])
        c = 1e6
        base = fit_ols_arrays(y, X, has_intercept=True)
        scaled = fit_ols_arrays(c * y, X, has_intercept=True)
        assert np.allclose(scaled.coef, c * base.coef, rtol=1e-12)
        assert np.allclose(scaled.stderr, c * base.stderr, rtol=1e-12)
        assert np.allclose(scaled.residuals, c * base.residuals, rtol=1e-12)
        assert np.allclose(scaled.tstat, base.tstat, rtol=1e-9, equal_nan=True)
        assert scaled.r2 == pytest.approx(base.r2, rel=1e-12)

    def test_sic_exceeds_aic_at_n8(self, rng):
        X = np.column_stack([np.ones(12), rng.standard_normal(12)])
        y = rng.standard_normal(12)
        fit = fit_ols_arrays(y, X)
        assert fit.sic >= fit.aic

    def test_rank_deficiency_names_column(self, rng):
        x = rng.standard_normal(20)
        X = np.column_stack([np.ones(20), x, 2.0 * x])
        with pytest.raises(RankError) as err:
            fit_ols_arrays(rng.standard_normal(20), X, ("C", "a", "b"))
        assert err.value.column in ("a", "b")

    def test_n_le_k(self, rng):
        X = rng.standard_normal((3, 3))
        with pytest.raises(SampleError):
            fit_ols_arrays(np.zeros(3), X)

    def test_design_matrix_entry(self, rng):
        X = np.column_stack([np.ones(15), rng.standard_normal(15)])
        y = rng.standard_normal(15)
        dm = DesignMatrix(
            response=y,
            response_name="y",
            regressors=X,
            columns=("C", "x"),
            start_period=1379,
            end_period=1393,
            has_intercept=True,
        )
        fit = fit_ols(dm)
        assert fit.names == ("C", "x")
        assert fit.has_intercept


class TestRecursiveResiduals:
    def test_exact_fit_gives_zeros(self):
        x = np.arange(1.0, 13.0)
        X = np.column_stack([np.ones(12), x])
        y = 3.0 + 2.0 * x
        w = recursive_residuals(y, X)
        assert len(w) == 10
        assert np.allclose(w, 0.0, atol=1e-10)

    def test_single_residual_boundary(self, rng):
        X = np.column_stack([np.ones(3), rng.standard_normal(3)])
        y = rng.standard_normal(3)
        assert len(recursive_residuals(y, X)) == 1

    def test_matches_rolling_oracle(self, rng):
        X = np.column_stack([np.ones(12), rng.standard_normal((12, 2))])
        y = rng.standard_normal(12)
        w = recursive_residuals(y, X)
        assert np.allclose(w, rolling_recresid_oracle(y, X), atol=1e-8)

    def test_rss_identity(self, rng):
        X = np.column_stack([np.ones(60), rng.standard_normal((60, 3))])
        y = X @ rng.normal(size=4) + rng.standard_normal(60)
        w = recursive_residuals(y, X)
        fit = fit_ols_arrays(y, X)
        assert float(w @ w) == pytest.approx(fit.rss, abs=1e-8 * max(fit.rss, 1.0))

    def test_singular_start_shifts_forward(self, rng):
        # first two rows identical -> 2x2 start block singular
        X = np.column_stack([np.ones(20), rng.standard_normal(20)])
        X[1] = X[0]
        y = rng.standard_normal(20)
        with pytest.warns(EstimationWarning, match="shifted"):
            w = recursive_residuals(y, X)
        assert len(w) == 20 - 3

    def test_never_invertible_raises(self):
        X = np.ones((6, 2))  # two identical columns everywhere
        with pytest.raises(RankError):
            recursive_residuals(np.arange(6.0), X)

    def test_too_short(self):
        with pytest.raises(SampleError):
            recursive_residuals(np.ones(2), np.ones((2, 2)))
