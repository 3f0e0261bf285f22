import math

import pytest

from ccball.controls import BoundaryPoint
from ccball.core.exceptions import (
    HessianUnbounded,
    InvalidArgument,
    NormalizationUnavailable,
    OutOfCylinder,
    OutOfTableRange,
)
from ccball.metric import (
    MetricContext,
    ball_volume,
    ball_volume_bracket,
    cylinder_jacobian,
    cylinder_point,
    distance,
    distance_sqrt,
    mu,
    reach_check,
    sample_cylinder,
    vertical_gap,
)
from ccball.ugs import FRow

ORIGIN = BoundaryPoint(0j, 0.0)


class TestMetricContext:
    def test_lambda_lower_is_cached(self, quadratic):
        ctx = MetricContext(quadratic, strategy="single_circle", mc_samples=0)
        assert ctx.lambda_lower(0j, 2.0) == pytest.approx(4.0 / math.pi)
        ctx.lambda_lower(0j, 2.0)
        assert ctx.cached() == 1
        assert ctx.lambda_lower(0j, 0.0) == 0.0

    def test_cache_is_bounded(self, quadratic):
        ctx = MetricContext(quadratic, strategy="single_circle", mc_samples=0, cache_size=3)
        for k in range(1, 6):
            ctx.lambda_lower(0j, float(k))
            assert ctx.cached() <= 3
        assert ctx.cached() == 3
        # δ = 1 a été évincé, δ = 5 reste le plus récent
        ctx.lambda_lower(0j, 5.0)
        assert ctx.cached() == 3
        assert ctx.lambda_lower(0j, 1.0) == pytest.approx(1.0 / math.pi)
        assert ctx.cached() == 3

    def test_table_interpolation(self, quadratic):
        table = (FRow(1.0, 1.0, 2.0), FRow(4.0, 16.0, 20.0))
        ctx = MetricContext(quadratic, f_table=table, strategy="single_circle", mc_samples=0)
        assert ctx.lambda_lower(5 + 5j, 2.0) == pytest.approx(4.0)
        # hors table : optimiseur
        assert ctx.lambda_lower(0j, 8.0) == pytest.approx(64.0 / math.pi)

    @pytest.mark.parametrize("kwargs", [
        {"delta0": 0.0},
        {"m": 1},
        {"strategy": "annealing"},
        {"delta_cap": -1.0},
        {"cache_size": 0},
        {"f_table": (FRow(2.0, 1.0, 1.0), FRow(1.0, 1.0, 1.0))},
        {"f_table": (FRow(1.0, 0.0, 1.0), FRow(2.0, 1.0, 1.0))},
    ])
    def test_rejects_invalid_settings(self, quadratic, kwargs):
        with pytest.raises(InvalidArgument):
            MetricContext(quadratic, **kwargs)

    def test_negative_delta(self, quad_ctx):
        with pytest.raises(InvalidArgument):
            quad_ctx.lambda_lower(0j, -1.0)


class TestMu:
    @pytest.mark.parametrize("h,expected", [(math.pi, math.pi), (4 * math.pi, 2 * math.pi), (0.01, math.sqrt(0.01 * math.pi))])
    def test_inverts_quadratic_lambda(self, quad_ctx, h, expected):
        assert mu(quad_ctx, 0j, h) == pytest.approx(expected, rel=1e-8)

    def test_zero_height(self, quad_ctx):
        assert mu(quad_ctx, 3j, 0.0) == 0.0

    def test_invalid_height(self, quad_ctx):
        with pytest.raises(InvalidArgument):
            mu(quad_ctx, 0j, -1.0)
        with pytest.raises(InvalidArgument):
            mu(quad_ctx, 0j, float("inf"))

    def test_out_of_range(self, quadratic):
        ctx = MetricContext(quadratic, delta_cap=2.0, strategy="single_circle", mc_samples=0)
        with pytest.raises(OutOfTableRange):
            mu(ctx, 0j, 100.0)


class TestDistance:
    def test_pure_vertical_separation(self, quad_ctx):
        assert distance(quad_ctx, ORIGIN, BoundaryPoint(0j, 4 * math.pi)) == pytest.approx(2 * math.pi, rel=1e-8)

    def test_same_point(self, quad_ctx):
        p = BoundaryPoint(1 + 2j, 3.0)
        assert distance(quad_ctx, p, p) == 0.0

    def test_along_real_axis(self, quad_ctx):
        assert distance(quad_ctx, ORIGIN, BoundaryPoint(10 + 0j, 0.0)) == pytest.approx(10.0)

    def test_shear_is_removed(self, quad_ctx):
        p0 = BoundaryPoint(1j, 0.0)
        p1 = BoundaryPoint(1 + 0j, 2.0)
        assert vertical_gap(quad_ctx, p0, p1) == pytest.approx(0.0, abs=1e-12)
        assert distance(quad_ctx, p0, p1) == pytest.approx(math.sqrt(2.0))

    def test_small_scale_branch(self, quad_ctx):
        p1 = BoundaryPoint(0.1 + 0.1j, 0.01)
        expected = abs(p1.z) + math.sqrt(math.pi * vertical_gap(quad_ctx, ORIGIN, p1, "small"))
        assert distance(quad_ctx, ORIGIN, p1) == pytest.approx(expected, rel=1e-8)
        assert distance(quad_ctx, ORIGIN, p1) < quad_ctx.delta0

    def test_symmetric_for_quadratic(self, quad_ctx):
        p0, p1 = BoundaryPoint(1 + 1j, 2.0), BoundaryPoint(-2 + 0.5j, 7.0)
        assert distance(quad_ctx, p0, p1) == pytest.approx(distance(quad_ctx, p1, p0), rel=1e-8)


class TestDistanceSqrt:
    def test_examples(self, quad_ctx):
        assert distance_sqrt(quad_ctx, ORIGIN, BoundaryPoint(0j, 9.0)) == pytest.approx(3.0)
        assert distance_sqrt(quad_ctx, ORIGIN, BoundaryPoint(4 + 0j, 16.0)) == pytest.approx(8.0)

    def test_comparable_to_distance(self, quad_ctx, rng):
        for _ in range(20):
            x0, y0, x1, y1 = rng.uniform(-20, 20, size=4)
            p0 = BoundaryPoint(complex(x0, y0), rng.uniform(-100, 100))
            p1 = BoundaryPoint(complex(x1, y1), rng.uniform(-100, 100))
            ratio = distance_sqrt(quad_ctx, p0, p1) / distance(quad_ctx, p0, p1)
            assert 0.1 <= ratio <= 10.0

    def test_unbounded_hessian(self, disc_array):
        ctx = MetricContext(disc_array, strategy="single_circle", mc_samples=0)
        with pytest.raises(HessianUnbounded):
            distance_sqrt(ctx, ORIGIN, BoundaryPoint(1j, 1.0))

    def test_normalization_only_for_quadratic(self, bump_grid):
        ctx = MetricContext(bump_grid, strategy="single_circle", mc_samples=0)
        with pytest.raises(NormalizationUnavailable):
            distance_sqrt(ctx, ORIGIN, BoundaryPoint(1j, 1.0))


class TestCylinder:
    def test_origin_is_fixed(self, quad_ctx):
        p0 = BoundaryPoint(1 + 1j, 2.0)
        assert cylinder_point(quad_ctx, p0, 2.0, 1.0, 0.0, 0.0, 0.0) == p0

    def test_pure_vertical(self, quad_ctx):
        p = cylinder_point(quad_ctx, ORIGIN, 2.0, 4.0 / math.pi, 0.0, 0.0, 0.5)
        assert p.z == 0j
        assert p.t == pytest.approx(2.0 / math.pi)

    def test_planar_step(self, quad_ctx):
        p = cylinder_point(quad_ctx, ORIGIN, 2.0, 4.0 / math.pi, 0.6, 0.0, 0.0)
        assert p.z == pytest.approx(1.2 + 0j)
        assert p.t == pytest.approx(0.0)
        q = cylinder_point(quad_ctx, ORIGIN, 2.0, 4.0 / math.pi, 0.0, 0.5, 0.0)
        assert q.z == pytest.approx(-1j)

    @pytest.mark.parametrize("abc", [(1.0, 0.0, 0.0), (0.8, 0.8, 0.0), (0.0, 0.0, 1.0), (0.0, 0.0, -1.5)])
    def test_outside_unit_cylinder(self, quad_ctx, abc):
        with pytest.raises(OutOfCylinder):
            cylinder_point(quad_ctx, ORIGIN, 1.0, 1.0, *abc)

    def test_invalid_scale(self, quad_ctx):
        with pytest.raises(InvalidArgument):
            cylinder_point(quad_ctx, ORIGIN, 0.0, 1.0, 0.0, 0.0, 0.0)
        with pytest.raises(InvalidArgument):
            cylinder_point(quad_ctx, ORIGIN, 1.0, -1.0, 0.0, 0.0, 0.0)

    @pytest.mark.parametrize("z0", [0j, 1 + 1j, -3 + 0.5j])
    def test_jacobian(self, quad_ctx, z0):
        delta = 2.0
        f = delta ** 2 / math.pi
        jac = cylinder_jacobian(quad_ctx, BoundaryPoint(z0, 1.0), delta, f)
        assert jac == pytest.approx(delta * delta * f, rel=1e-6)

    def test_samples_stay_in_cylinder(self, quad_ctx):
        samples = sample_cylinder(quad_ctx, ORIGIN, 2.0, 50, seed=5)
        assert len(samples) == 50
        f = 4.0 / math.pi
        for a, b, c, p in samples:
            assert a * a + b * b < 1.0 and abs(c) < 1.0
            assert abs(p.z) < 2.0
            assert abs(p.t) <= f + 1e-12
        assert samples == sample_cylinder(quad_ctx, ORIGIN, 2.0, 50, seed=5)

    def test_half_cylinder_is_reachable(self, quad_ctx):
        delta = 2.0
        for _, _, _, target in sample_cylinder(quad_ctx, ORIGIN, 0.5 * delta, 20, seed=1):
            assert reach_check(quad_ctx, ORIGIN, target, delta)


class TestReachCheck:
    def test_target_is_start(self, quad_ctx):
        assert reach_check(quad_ctx, ORIGIN, ORIGIN, 1e-3)

    def test_loop_with_slack(self, quad_ctx):
        target = BoundaryPoint(0j, 4 * math.pi)
        assert reach_check(quad_ctx, ORIGIN, target, 2 * math.pi * 1.1)
        assert reach_check(quad_ctx, ORIGIN, BoundaryPoint(0j, -4 * math.pi), 2 * math.pi * 1.1)

    def test_budget_too_small(self, quad_ctx):
        assert not reach_check(quad_ctx, ORIGIN, BoundaryPoint(0j, 4 * math.pi), 2 * math.pi * 0.5)
        assert not reach_check(quad_ctx, ORIGIN, BoundaryPoint(5 + 0j, 0.0), 4.0)

    def test_invalid_budget(self, quad_ctx):
        with pytest.raises(InvalidArgument):
            reach_check(quad_ctx, ORIGIN, ORIGIN, 0.0)


class TestVolume:
    def test_ball_volume(self, quad_ctx):
        assert ball_volume(quad_ctx, 0j, 2.0) == pytest.approx(16.0 / math.pi)

    def test_bracket(self, quad_ctx):
        lower, upper = ball_volume_bracket(quad_ctx, 0j, 2.0, c2=4.0)
        assert lower == pytest.approx(16.0 / math.pi)
        assert upper == pytest.approx(96.0)

    def test_invalid_delta(self, quad_ctx):
        with pytest.raises(InvalidArgument):
            ball_volume(quad_ctx, 0j, 0.0)
