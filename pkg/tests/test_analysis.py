"""Thresholds, critical times, the long-edge bound, and the fitters."""
import math

import numpy as np
import pytest

from spasir.analysis import (
    critical_time_m,
    critical_time_m_i,
    cumulative_tail,
    fit_power_law,
    loglog_regression,
    long_edge_prob_bound,
    phi_bound,
    theta_bound,
)
from spasir.generator import sphere_volume_modified
from spasir.geometry import MetricConfig, radius_for_volume

D1 = MetricConfig(1, math.inf)


class TestThresholds:
    def test_phi_bound_values(self):
        assert phi_bound(0.5, 1) == pytest.approx(0.1)
        assert phi_bound(0.5, 2) == pytest.approx(0.05)

    def test_phi_bound_endpoint_limits(self):
        assert phi_bound(1e-9, 1) < 1e-9
        assert phi_bound(1.0 - 1e-9, 1) < 1e-8
        # interior maximum exists between the vanishing endpoints
        grid = np.linspace(0.01, 0.99, 99)
        vals = [phi_bound(a, 1) for a in grid]
        assert max(vals) > vals[0] and max(vals) > vals[-1]

    def test_theta_bound_values(self):
        assert theta_bound(0.5) == pytest.approx(0.875)
        assert theta_bound(1e-12) == pytest.approx(1.0)
        assert theta_bound(1.0 - 1e-12) == pytest.approx(5.0 / 6.0)

    def test_domain_validation(self):
        with pytest.raises(ValueError):
            phi_bound(0.0, 1)
        with pytest.raises(ValueError):
            theta_bound(1.0)


class TestCriticalTimes:
    def test_m_examples(self):
        assert critical_time_m(0.01, 1.0, D1) == pytest.approx(50.0)
        assert critical_time_m(0.1, 1.0, MetricConfig(2, math.inf)) == pytest.approx(25.0)

    def test_m_linear_in_a2(self):
        assert critical_time_m(0.03, 2.0, D1) == pytest.approx(2 * critical_time_m(0.03, 1.0, D1))

    def test_m_i_example(self):
        assert critical_time_m_i(4, 0.01, 0.5, 1.0, D1) == pytest.approx(156.25)

    def test_m_i_decreasing_in_i(self):
        vals = [critical_time_m_i(i, 0.01, 0.5, 1.0, D1) for i in (1, 2, 4, 8, 50)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_m_is_m1_power(self):
        for a1 in (0.3, 0.5, 0.7):
            m = critical_time_m(0.02, 1.5, D1)
            m1 = critical_time_m_i(1, 0.02, a1, 1.5, D1)
            assert m1 ** (1.0 - a1) == pytest.approx(m, rel=1e-9)

    def test_oldest_vertex_radius_crosses_lambda_at_m1(self):
        """Algebraic inversion: at t = m_1 the sphere radius of v_1 equals lambda."""
        for lam in (0.005, 0.02, 0.1):
            for a1 in (0.3, 0.5, 0.8):
                m1 = critical_time_m_i(1, lam, a1, 1.0, D1)
                radius = radius_for_volume(sphere_volume_modified(1, m1, a1, 1.0), D1)
                assert radius == pytest.approx(lam, rel=1e-9)

    def test_later_vertices_cross_above_lambda(self):
        # for i > 1 the tabulated time comes before the true crossing: the
        # radius at m_i is lambda * i^((1-a1)/d), still above lambda
        i, lam, a1 = 4, 0.01, 0.5
        m_i = critical_time_m_i(i, lam, a1, 1.0, D1)
        radius = radius_for_volume(sphere_volume_modified(i, m_i, a1, 1.0), D1)
        assert radius == pytest.approx(lam * i ** (1.0 - a1), rel=1e-9)


class TestLongEdgeBound:
    def test_decreasing_spot_values(self):
        vals = [long_edge_prob_bound(n, 0.5, 1.0, 10.0, D1, 0.05) for n in (1e3, 1e6, 1e9)]
        assert vals[0] == pytest.approx(0.0537146399648292, rel=1e-12)
        assert vals[1] == pytest.approx(0.00986733127226231, rel=1e-12)
        assert vals[2] == pytest.approx(0.001757199176043773, rel=1e-12)
        assert vals[0] > vals[1] > vals[2]

    def test_zero_gamma(self):
        assert long_edge_prob_bound(1e6, 0.5, 1.0, 0.0, D1, 0.05) == 0.0

    def test_increasing_in_gamma(self):
        vals = [long_edge_prob_bound(1e6, 0.5, 1.0, g, D1, 0.05) for g in (1.0, 5.0, 25.0)]
        assert vals[0] < vals[1] < vals[2]

    def test_rejects_nonpositive_phi(self):
        with pytest.raises(ValueError):
            long_edge_prob_bound(1e6, 0.5, 1.0, 1.0, D1, 0.0)


class TestCumulativeTail:
    def test_counts_strictly_greater(self):
        ks, ck = cumulative_tail([0, 1, 1, 3])
        assert list(ks) == [0, 1, 2, 3]
        assert list(ck) == [0.75, 0.25, 0.25, 0.0]


class TestFitPowerLaw:
    @staticmethod
    def degrees_with_tail(tail_gt: np.ndarray, n: int) -> np.ndarray:
        """Oracle construction: a degree multiset whose strictly-greater-than
        tail counts are exactly ``tail_gt[k]`` for k = 0 .. len-1."""
        exact = -np.diff(np.append(tail_gt, 0))  # vertices with degree exactly k+1
        parts = [np.zeros(n - tail_gt[0], dtype=np.int64)]
        for k, cnt in enumerate(exact, start=1):
            parts.append(np.full(cnt, k, dtype=np.int64))
        out = np.concatenate(parts)
        assert out.size == n
        return out

    def test_exact_power_law(self):
        # tail counts n * k^-2 for k >= 1, so log c_k is an exact line
        n = 1_000_000
        ks = np.arange(1, 41)
        tail = np.concatenate([[n], np.round(n * ks.astype(float) ** -2.0).astype(np.int64)])
        fit = fit_power_law(self.degrees_with_tail(tail, n), k_min=1)
        assert fit.exponent == pytest.approx(2.0, abs=1e-3)
        assert fit.r2 > 0.999999

    def test_closed_form_tail_slope_far_tail(self):
        """The closed-form tail (k a1/a2 - 1)^(-1/a1) has log-slope
        -(1/a1) k/(k - a2/a1), so the pure exponent only emerges for
        k >> a2/a1; on that regime the fit lands within 1e-3."""
        a1, a2 = 0.5, 1.0
        ks = np.logspace(5, 7, 300)
        ck = (ks * a1 / a2 - 1.0) ** (-1.0 / a1)
        res = loglog_regression(np.column_stack([ks, ck]))
        assert -res.slope == pytest.approx(1.0 / a1, abs=1e-3)

    def test_closed_form_tail_from_degree_multiset(self):
        # end to end through counting: curvature and integer counts limit
        # the attainable accuracy at desk-scale k
        a1, a2, n = 0.5, 1.0, 10_000_000
        ks = np.arange(1, 1001, dtype=float)
        ck = np.ones_like(ks)
        beyond = ks * a1 / a2 > 1.0
        ck[beyond] = (ks[beyond] * a1 / a2 - 1.0) ** (-1.0 / a1)
        tail = np.concatenate([[n], np.minimum(np.round(ck * n), n).astype(np.int64)])
        tail = np.minimum.accumulate(tail)  # tails must be nonincreasing
        fit = fit_power_law(self.degrees_with_tail(tail, n), k_min=80)
        assert fit.exponent == pytest.approx(1.0 / a1, abs=0.03)

    def test_scaling_invariance(self):
        pts = np.array([(k, k ** (-2.0)) for k in range(2, 60)])
        base = loglog_regression(pts)
        scaled = loglog_regression(pts * [1.0, 7.5])
        assert scaled.slope == pytest.approx(base.slope, rel=1e-12)
        assert scaled.intercept != pytest.approx(base.intercept)

    def test_too_few_distinct_degrees(self):
        with pytest.raises(ValueError):
            fit_power_law([1, 2, 3, 50, 51, 52, 53, 54, 55, 56], k_min=49)

    def test_mle_flag(self):
        rng = np.random.default_rng(17)
        # Pareto tail P(X > x) = x^-2; coarse discretisation biases the
        # continuous Hill estimator, so keep values large vs the threshold
        tail = (rng.pareto(2.0, size=400_000) + 1.0) * 1000.0
        fit = fit_power_law(tail.astype(int), k_min=5000, method="mle")
        assert fit.exponent == pytest.approx(2.0, abs=0.05)
        assert math.isnan(fit.r2)


class TestLogLogRegression:
    def test_exact_line(self):
        pts = [(x, x ** (-2.0)) for x in (1.0, 2.0, 4.0, 9.0, 20.0)]
        res = loglog_regression(pts)
        assert res.slope == pytest.approx(-2.0, rel=1e-12)
        assert res.intercept == pytest.approx(0.0, abs=1e-12)
        assert res.r2 == pytest.approx(1.0)
        assert res.n_used == 5 and res.n_excluded == 0

    def test_permutation_invariance(self):
        rng = np.random.default_rng(3)
        pts = np.column_stack([rng.uniform(1, 100, 40), rng.uniform(0.1, 10, 40)])
        a = loglog_regression(pts)
        b = loglog_regression(pts[rng.permutation(40)])
        assert a.slope == pytest.approx(b.slope, rel=1e-9)
        assert a.intercept == pytest.approx(b.intercept, rel=1e-9)
        assert a.r2 == pytest.approx(b.r2, rel=1e-9)

    def test_zero_rows_excluded_and_counted(self):
        pts = [(1000.0, 0.0), (1000.0, 0.1), (2000.0, 0.05), (3000.0, 0.02), (500.0, 0.0)]
        res = loglog_regression(pts)
        assert res.n_excluded == 2
        assert res.n_used == 3

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            loglog_regression([(1.0, 1.0), (2.0, 0.5)])
        with pytest.raises(ValueError):
            loglog_regression([(1.0, 0.0), (2.0, 0.0), (3.0, 0.0), (4.0, 1.0), (5.0, 1.0)])
