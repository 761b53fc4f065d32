"""Distribution accuracy tests against closed forms and an independent
bisection oracle."""

from __future__ import annotations

import math

import numpy as np
import pytest

from ardlkit.errors import DomainError
from ardlkit.probdist import (
    DistSpec,
    cdf,
    chi_square,
    fisher_f,
    norm_quantile,
    normal,
    quantile,
    student_t,
    survival,
)


def bisect_normal_quantile(p: float) -> float:
    """Independent oracle: plain bisection on the error-function CDF."""
    lo, hi = -40.0, 40.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if 0.5 * math.erfc(-mid / math.sqrt(2.0)) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class TestAnchors:
    def test_normal_center(self):
        assert cdf(normal(), 0.0) == pytest.approx(0.5, abs=1e-12)
        assert survival(normal(), 0.0) == pytest.approx(0.5, abs=1e-12)

    def test_cauchy_points(self):
        # t with one degree of freedom is Cauchy: cdf(1) = 1/2 + atan(1)/pi
        assert cdf(student_t(1), 1.0) == pytest.approx(0.75, abs=1e-10)
        assert survival(student_t(1), 1.0) == pytest.approx(0.25, abs=1e-10)

    def test_chi2_closed_form(self):
        assert cdf(chi_square(2), 2.0) == pytest.approx(1.0 - math.exp(-1.0), abs=1e-10)
        assert survival(chi_square(2), 40.0) == pytest.approx(math.exp(-20.0), rel=1e-8)

    def test_f_symmetry_point(self):
        assert cdf(fisher_f(7, 7), 1.0) == pytest.approx(0.5, abs=1e-10)

    def test_normal_quantiles(self):
        assert quantile(normal(), 0.5) == pytest.approx(0.0, abs=1e-12)
        assert quantile(normal(), 0.975) == pytest.approx(
            bisect_normal_quantile(0.975), abs=1e-9
        )

    def test_chi2_quantile_closed_form(self):
        assert quantile(chi_square(2), 1.0 - math.exp(-1.0)) == pytest.approx(2.0, abs=1e-9)

    def test_infinities(self):
        assert cdf(normal(), math.inf) == 1.0
        assert cdf(normal(), -math.inf) == 0.0
        assert survival(chi_square(3), math.inf) == 0.0


class TestValidation:
    def test_bad_family(self):
        with pytest.raises(DomainError):
            DistSpec("gamma", (1.0,))

    def test_bad_df(self):
        with pytest.raises(DomainError):
            student_t(0.0)
        with pytest.raises(DomainError):
            fisher_f(1.0, -2.0)

    def test_quantile_domain(self):
        with pytest.raises(DomainError):
            quantile(normal(), 0.0)
        with pytest.raises(DomainError):
            quantile(normal(), 1.0)


class TestMonotonicityAndInversion:
    @pytest.mark.parametrize(
        "spec, grid",
        [
            (normal(), np.linspace(-6, 6, 101)),
            (student_t(3), np.linspace(-8, 8, 101)),
            (student_t(47), np.linspace(-6, 6, 101)),
            (chi_square(1), np.linspace(0.01, 20, 101)),
            (chi_square(11), np.linspace(0.01, 40, 101)),
            (fisher_f(3, 12), np.linspace(0.01, 20, 101)),
        ],
    )
    def test_cdf_monotone(self, spec, grid):
        values = [cdf(spec, x) for x in grid]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert all(0.0 <= v <= 1.0 for v in values)

    @pytest.mark.parametrize(
        "spec",
        [normal(), student_t(5), student_t(200), chi_square(2), chi_square(30), fisher_f(4, 9)],
    )
    def test_quantile_cdf_roundtrip(self, spec):
        # central 99.9% mass
        for p in np.linspace(0.0005, 0.9995, 41):
            x = quantile(spec, float(p))
            assert cdf(spec, x) == pytest.approx(p, abs=1e-7)

    def test_t_converges_to_normal(self):
        for x in np.linspace(-4, 4, 33):
            assert abs(cdf(student_t(10000), x) - cdf(normal(), x)) < 1e-4

    def test_f1d_is_squared_t(self):
        d = 9
        for x in (0.3, 0.8, 1.5, 2.4):
            lhs = cdf(fisher_f(1, d), x * x)
            rhs = 2.0 * cdf(student_t(d), x) - 1.0
            assert lhs == pytest.approx(rhs, abs=1e-9)

    def test_survival_complements_cdf(self, rng):
        for spec in (normal(), student_t(6), chi_square(4), fisher_f(5, 8)):
            for x in rng.uniform(0.05, 5.0, size=10):
                assert cdf(spec, x) + survival(spec, x) == pytest.approx(1.0, abs=1e-12)

    def test_deep_tail_relative_accuracy(self):
        # exact: P(chi2_2 > x) = exp(-x/2)
        for x in (20.0, 40.0, 55.0):
            assert survival(chi_square(2), x) == pytest.approx(
                math.exp(-x / 2.0), rel=1e-8
            )


class TestVectorizedNormalQuantile:
    def test_matches_bisection_oracle(self):
        probs = np.array([1e-10, 1e-6, 0.01, 0.3, 0.5, 0.7, 0.975, 1 - 1e-6])
        got = norm_quantile(probs)
        expected = [bisect_normal_quantile(float(p)) for p in probs]
        assert np.allclose(got, expected, atol=1e-9)

    def test_scalar_and_array_agree(self):
        assert norm_quantile(0.12345) == norm_quantile(np.array([0.12345]))[0]

    def test_antisymmetry(self, rng):
        p = rng.uniform(1e-8, 0.5, size=50)
        assert np.allclose(norm_quantile(p), -norm_quantile(1.0 - p), atol=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            norm_quantile(np.array([0.5, 1.0]))
