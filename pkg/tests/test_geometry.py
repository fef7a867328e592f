"""Torus metric, ball volumes, and uniform sampling."""
import math
from itertools import product

import numpy as np
import pytest

from spasir.geometry import (
    MetricConfig,
    ball_volume,
    radius_for_volume,
    sample_uniform,
    torus_distance,
    torus_distances,
)

CONFIGS = [
    MetricConfig(1, math.inf),
    MetricConfig(1, 2),
    MetricConfig(2, 1),
    MetricConfig(2, 2),
    MetricConfig(2, math.inf),
    MetricConfig(3, 2),
]


def shift_enumeration_distance(x, y, cfg):
    """Oracle: minimum of ||x - y + u||_p over all 3^d integer shifts."""
    best = math.inf
    for u in product((-1, 0, 1), repeat=cfg.d):
        diff = [xi - yi + ui for xi, yi, ui in zip(x, y, u)]
        if cfg.p == math.inf:
            val = max(abs(c) for c in diff)
        else:
            val = sum(abs(c) ** cfg.p for c in diff) ** (1.0 / cfg.p)
        best = min(best, val)
    return best


class TestMetricConfig:
    def test_validation(self):
        with pytest.raises(ValueError):
            MetricConfig(0, 2)
        with pytest.raises(ValueError):
            MetricConfig(1, 0.5)
        MetricConfig(3, 1)  # fine

    def test_unit_ball_volumes(self):
        assert MetricConfig(1, math.inf).unit_ball_volume == 2.0
        assert MetricConfig(1, 2).unit_ball_volume == pytest.approx(2.0)
        assert MetricConfig(2, math.inf).unit_ball_volume == 4.0
        assert MetricConfig(2, 2).unit_ball_volume == pytest.approx(math.pi)
        assert MetricConfig(3, 1).unit_ball_volume == pytest.approx(8.0 / 6.0)


class TestTorusDistance:
    def test_identity(self):
        for cfg in CONFIGS:
            x = np.full(cfg.d, 0.3)
            assert torus_distance(x, x, cfg) == 0.0

    def test_wraparound_d1(self):
        # enumerating u in {-1,0,1} by hand: 0.1 - 0.9 + 1 = 0.2
        for p in (1, 2, math.inf):
            assert torus_distance([0.1], [0.9], MetricConfig(1, p)) == pytest.approx(0.2)

    def test_half_diagonal_d2(self):
        # all 9 shifts give the same 0.5 offset per axis
        d = torus_distance([0.0, 0.0], [0.5, 0.5], MetricConfig(2, 2))
        assert d == pytest.approx(math.sqrt(0.5))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            torus_distance([0.1, 0.2], [0.3], MetricConfig(2, 2))
        with pytest.raises(ValueError):
            torus_distance([0.1], [0.3], MetricConfig(2, 2))

    def test_matches_shift_enumeration(self):
        rng = np.random.default_rng(5)
        for cfg in CONFIGS:
            for _ in range(200):
                x, y = rng.random(cfg.d), rng.random(cfg.d)
                assert torus_distance(x, y, cfg) == pytest.approx(
                    shift_enumeration_distance(x, y, cfg), abs=1e-14
                )

    def test_symmetry_exact(self):
        rng = np.random.default_rng(6)
        for cfg in CONFIGS:
            for _ in range(500):
                x, y = rng.random(cfg.d), rng.random(cfg.d)
                assert torus_distance(x, y, cfg) == torus_distance(y, x, cfg)

    def test_triangle_inequality(self):
        rng = np.random.default_rng(7)
        for cfg in CONFIGS:
            pts = rng.random((2000, 3, cfg.d))
            for x, y, z in pts:
                lhs = torus_distance(x, y, cfg)
                rhs = torus_distance(x, z, cfg) + torus_distance(z, y, cfg)
                assert lhs <= rhs + 1e-12

    def test_bounded_by_diameter(self):
        rng = np.random.default_rng(8)
        for cfg in CONFIGS:
            for _ in range(500):
                assert torus_distance(rng.random(cfg.d), rng.random(cfg.d), cfg) <= cfg.diameter + 1e-15

    def test_vectorised_rows_match_scalar(self):
        rng = np.random.default_rng(9)
        cfg = MetricConfig(2, 2)
        xs, ys = rng.random((50, 2)), rng.random((50, 2))
        rows = torus_distances(xs, ys, cfg)
        for k in range(50):
            assert rows[k] == torus_distance(xs[k], ys[k], cfg)


class TestBallVolume:
    def test_interval(self):
        assert ball_volume(0.25, MetricConfig(1, math.inf)) == 0.5

    def test_square(self):
        assert ball_volume(0.1, MetricConfig(2, math.inf)) == pytest.approx(0.04)

    def test_zero(self):
        for cfg in CONFIGS:
            assert ball_volume(0.0, cfg) == 0.0

    def test_negative_radius_rejected(self):
        with pytest.raises(ValueError):
            ball_volume(-0.1, MetricConfig(1, 2))

    def test_montecarlo_measure_d1(self):
        """Oracle: the measure of {y : dist(x,y) <= r} by direct sampling."""
        cfg = MetricConfig(1, math.inf)
        rng = np.random.default_rng(10)
        x = np.array([0.9])
        samples = rng.random((200_000, 1))
        dist = torus_distances(samples, x, cfg)
        for r in (0.05, 0.2, 0.45):
            vol = ball_volume(r, cfg)
            freq = float((dist <= r).mean())
            se = math.sqrt(vol * (1 - vol) / len(samples))
            assert abs(freq - vol) <= 3 * se


class TestRadiusForVolume:
    def test_inverse_examples(self):
        assert radius_for_volume(0.5, MetricConfig(1, math.inf)) == 0.25
        assert radius_for_volume(0.0, MetricConfig(2, 2)) == 0.0
        assert radius_for_volume(0.04, MetricConfig(2, math.inf)) == pytest.approx(0.1)

    def test_radius_roundtrip_tight(self):
        for cfg in CONFIGS:
            for r in (1e-6, 1e-3, 0.1, 0.4):
                back = radius_for_volume(ball_volume(r, cfg), cfg)
                assert abs(back - r) < 1e-12 * r

    def test_volume_roundtrip_ulps(self):
        # relative error amplifies by d through r^d, so the attainable
        # worst case grows with dimension: exact-ish at d=1, d ulps beyond
        for cfg in CONFIGS:
            budget = max(1, cfg.d)
            for v in np.logspace(-12, 0, 1500):
                v2 = ball_volume(radius_for_volume(v, cfg), cfg)
                assert abs(v2 - v) <= budget * math.ulp(v), (cfg, v)


class TestSampling:
    def test_deterministic(self):
        cfg = MetricConfig(3, 2)
        a = sample_uniform(np.random.default_rng(123), cfg)
        b = sample_uniform(np.random.default_rng(123), cfg)
        assert np.array_equal(a, b)

    def test_shape(self):
        assert sample_uniform(np.random.default_rng(0), MetricConfig(3, 2)).shape == (3,)

    def test_mean_law_of_large_numbers(self):
        cfg = MetricConfig(2, 2)
        rng = np.random.default_rng(11)
        pts = np.array([sample_uniform(rng, cfg) for _ in range(100_000)])
        for axis_mean in pts.mean(axis=0):
            assert 0.49 <= axis_mean <= 0.51

    def test_in_unit_cube(self):
        rng = np.random.default_rng(12)
        pts = np.array([sample_uniform(rng, MetricConfig(2, 1)) for _ in range(1000)])
        assert (pts >= 0.0).all() and (pts < 1.0).all()
