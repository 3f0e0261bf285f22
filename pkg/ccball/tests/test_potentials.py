import math

import numpy as np
import pytest

from ccball.core.exceptions import (
    DegeneratePolygon,
    GridFormatError,
    InvalidArgument,
    InvalidPotentialSpec,
    UnknownConfigKey,
    UnsupportedOrder,
)
from ccball.potentials import (
    DensityGrid,
    DensityGridField,
    DiscArrayField,
    PotentialField,
    QuadraticField,
    build_field,
    get_registry,
    load_grid,
    t_offset,
    write_grid,
)
from ccball.controls import BoundaryPoint
from ccball.potentials.disc_array.field import spiral_index, spiral_site


class TestQuadratic:
    def test_constant_density(self, quadratic):
        assert quadratic.laplacian(3 + 4j) == 4.0
        assert QuadraticField(c=2.5).laplacian(0j) == 10.0

    def test_ball_and_region_mass(self, quadratic):
        assert quadratic.ball_mass(1 + 1j, 1.0) == pytest.approx(4 * math.pi)
        square = [0j, 1 + 0j, 1 + 1j, 1j]
        assert quadratic.region_mass(square) == pytest.approx(4.0)
        assert quadratic.region_mass(square[::-1]) == pytest.approx(4.0)

    def test_gradient(self, quadratic):
        assert quadratic.gradient(1 + 0j) == pytest.approx((2.0, 0.0))
        assert quadratic.gradient(0 + 1j) == pytest.approx((0.0, 2.0))

    def test_dz_derivatives(self, quadratic):
        assert quadratic.dz_derivatives(1 + 1j, 1) == [pytest.approx(1 - 1j)]
        assert quadratic.dz_derivatives(1 + 1j, 3) == [pytest.approx(1 - 1j), 0j, 0j]

    def test_segment_twist_matches_quadrature(self, quadratic, rng):
        for _ in range(10):
            a, b = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
            generic = PotentialField.segment_twist(quadratic, a, b)
            assert quadratic.segment_twist(a, b) == pytest.approx(generic, rel=1e-8, abs=1e-12)

    def test_segment_twist_along_real_axis(self, quadratic):
        assert quadratic.segment_twist(0j, 1 + 0j) == 0.0
        assert quadratic.segment_twist(1j, 1 + 0j) == pytest.approx(2.0)

    def test_small_and_large_offsets_agree(self, quadratic, rng):
        for _ in range(10):
            z0, z1 = complex(*rng.normal(size=2)), complex(*rng.normal(size=2))
            large = quadratic.t_offset(z0, z1, "large")
            assert quadratic.t_offset(z0, z1, "small", 2) == pytest.approx(large, abs=1e-12)

    def test_t_offset_on_boundary_points(self, quadratic):
        p0, p1 = BoundaryPoint(1j, 5.0), BoundaryPoint(1 + 0j, -3.0)
        assert t_offset(quadratic, p0, p1) == pytest.approx(2.0)
        assert t_offset(quadratic, p0, p0) == 0.0

    def test_invalid_scale(self):
        with pytest.raises(InvalidPotentialSpec):
            QuadraticField(c=0.0)
        with pytest.raises(InvalidPotentialSpec):
            QuadraticField(c=float("nan"))

    def test_self_intersecting_region(self, quadratic):
        with pytest.raises(DegeneratePolygon):
            quadratic.region_mass([-1 + 1j, 1 - 1j, 1 + 1j, -1 - 1j])

    def test_order_limits(self, quadratic):
        with pytest.raises(UnsupportedOrder):
            quadratic.dz_derivatives(0j, 7)
        with pytest.raises(InvalidArgument):
            quadratic.ball_mass(0j, 0.0)


class TestDiscArray:
    def test_total_mass_is_one(self, disc_array):
        assert disc_array.total_mass() == pytest.approx(1.0, abs=1e-12)

    def test_first_discs(self, disc_array):
        assert disc_array.center(1) == 0j
        assert disc_array.center(2) == 10 + 0j
        assert disc_array.laplacian(0j) == pytest.approx(2.0 / math.pi)
        assert disc_array.laplacian(0.6 + 0j) == 0.0

    def test_ball_mass_of_whole_discs(self, disc_array):
        assert disc_array.ball_mass(0j, 0.5) == pytest.approx(0.5)
        assert disc_array.ball_mass(disc_array.center(2), 1.0) == pytest.approx(0.25)
        assert disc_array.ball_mass(5 + 5j, 1.0) == 0.0

    def test_half_disc(self, disc_array):
        half_plane = [0j - 1j, 1 - 1j, 1 + 1j, 0j + 1j]
        assert disc_array.region_mass(half_plane) == pytest.approx(0.25, rel=1e-9)

    def test_spiral_enumeration(self):
        for k in range(1, 60):
            assert spiral_index(*spiral_site(k)) == k
        assert spiral_site(2) == (1, 0)

    def test_loop_integral_equals_enclosed_mass(self, disc_array):
        clockwise_square = [-1 + 1j, 1 + 1j, 1 - 1j, -1 - 1j]
        assert disc_array.path_twist(clockwise_square, closed=True) == pytest.approx(0.5, rel=1e-8)
        assert disc_array.path_twist(clockwise_square[::-1], closed=True) == pytest.approx(-0.5, rel=1e-8)

    def test_segment_twist_is_bounded(self, disc_array, rng):
        # |twist| ≤ masse totale / 2 pour un segment
        for _ in range(200):
            a = complex(*rng.uniform(-45.0, 45.0, size=2))
            b = a + 4.3 * rng.uniform(0.0, 1.0) * np.exp(1j * rng.uniform(0.0, 2 * math.pi))
            forward = disc_array.segment_twist(a, b)
            assert abs(forward) <= 0.5 + 1e-12
            assert disc_array.segment_twist(b, a) == pytest.approx(-forward, abs=1e-12)

    def test_segment_through_tiny_disc_centers(self, disc_array):
        for k in (40, 90, 160):
            c = disc_array.center(k)
            value = disc_array.segment_twist(c - 3.0 - 1e-13j, c + 3.0 + 1e-13j)
            assert abs(value) <= 0.5 + 1e-12
        grazing = disc_array.segment_twist(-30 + 20j, 30 + 20j)
        assert abs(grazing) <= 0.5 + 1e-12

    def test_segment_twist_matches_quadrature(self, disc_array, rng):
        for k in (1, 2, 3, 6):
            c = disc_array.center(k)
            for _ in range(4):
                a = c + complex(*rng.uniform(-1.0, 1.0, size=2))
                b = c + complex(*rng.uniform(-1.0, 1.0, size=2))
                reference = PotentialField.segment_twist(disc_array, a, b)
                assert disc_array.segment_twist(a, b) == pytest.approx(reference, rel=1e-6, abs=1e-7)

    def test_unbounded_density(self, disc_array):
        assert math.isinf(disc_array.density_sup((0.0, 0.0, 10.0, 10.0)))
        assert not disc_array.has_bounded_hessian
        assert (0j, 0.5) in disc_array.hotspots(0j, 1.0)

    def test_invalid_spacing(self):
        with pytest.raises(InvalidPotentialSpec):
            DiscArrayField(spacing=1.5)


class TestDensityGrid:
    @pytest.fixture
    def flat(self):
        return DensityGridField.from_function(lambda x, y: np.ones_like(x), (0.0, 0.0, 4.0, 4.0), 5)

    def test_constant_grid_masses(self, flat):
        assert flat.total_mass == pytest.approx(16.0)
        assert flat.ball_mass(2 + 2j, 1.0) == pytest.approx(math.pi, rel=1e-8)
        assert flat.region_mass([1 + 1j, 2 + 1j, 2 + 2j, 1 + 2j]) == pytest.approx(1.0)
        assert flat.laplacian(10 + 10j) == 0.0

    def test_bilinear_interpolation(self):
        field = DensityGridField.from_function(lambda x, y: x, (0.0, 0.0, 2.0, 2.0), 3)
        assert field.laplacian(0.5 + 0.5j) == pytest.approx(0.5)
        # ∫∫ x sur [0, 2]² = 4
        assert field.total_mass == pytest.approx(4.0)

    def test_ball_mass_of_linear_density(self):
        # l'interpolant bilinéaire de x est exact : ∫_B x = x_c·πr²
        field = DensityGridField.from_function(lambda x, y: x, (0.0, 0.0, 4.0, 4.0), 5)
        assert field.ball_mass(2 + 2j, 1.0) == pytest.approx(2 * math.pi, rel=1e-6)
        assert field.ball_mass(1.3 + 2.6j, 0.9) == pytest.approx(1.3 * math.pi * 0.81, rel=1e-6)

    def test_ball_mass_matches_fine_polygon(self, bump_grid):
        n = 4096
        for z, r in ((0.3 + 0.1j, 0.7), (0.05 - 0.2j, 1.4)):
            ring = [z + r * complex(math.cos(2 * math.pi * k / n), math.sin(2 * math.pi * k / n)) for k in range(n)]
            inscribed = bump_grid.region_mass(ring)
            lens = math.pi * r * r - 0.5 * n * r * r * math.sin(2 * math.pi / n)
            found = bump_grid.ball_mass(z, r)
            assert abs(found - inscribed) <= 2 * lens + 1e-12
        assert bump_grid.ball_mass(0.05 - 0.2j, 1.4) == pytest.approx(bump_grid.total_mass, rel=1e-9)

    def test_ball_mass_around_a_hole(self):
        holed = DensityGridField.from_function(
            lambda x, y: np.where(np.hypot(x, y) < 4.0, 0.0, 1.0), (-10.0, -10.0, 10.0, 10.0), 81
        )
        found = holed.ball_mass(-1.5 - 1.5j, 2.0)
        assert math.isfinite(found)
        assert 0.0 <= found <= 4 * math.pi
        assert holed.ball_mass(0j, 3.0) == 0.0
        assert holed.ball_mass(-7 - 7j, 1.0) == pytest.approx(math.pi, rel=1e-6)

    def test_far_gradient_is_point_mass(self, bump_grid):
        z = 40 + 30j
        gx, gy = bump_grid.gradient(z)
        expected = bump_grid.total_mass / (2 * math.pi) * z / abs(z) ** 2
        assert gx == pytest.approx(expected.real, rel=1e-4)
        assert gy == pytest.approx(expected.imag, rel=1e-4)

    def test_bump_has_bounded_hessian(self, bump_grid, flat):
        assert bump_grid.has_bounded_hessian
        assert not flat.has_bounded_hessian

    def test_zero_grid_rejected(self):
        with pytest.raises(InvalidPotentialSpec):
            DensityGridField(DensityGrid(values=np.zeros((3, 3)), h=1.0, origin=0j))

    def test_grid_file(self, tmp_path):
        grid = DensityGrid(values=np.array([[0.0, 1.0, 0.0], [0.5, 2.0, 0.25]]), h=0.5, origin=complex(-1, 2))
        path = tmp_path / "bump.ccgrid"
        write_grid(path, grid)
        assert path.read_text().startswith("ccgrid v1 3 2 0.5 -1.0 2.0")
        loaded = load_grid(path)
        assert loaded.values.shape == (2, 3)
        assert loaded.values[1, 1] == 2.0
        assert loaded.origin == complex(-1, 2)

    @pytest.mark.parametrize("content", [
        "ccgrid v2 2 2 1 0 0 1 1 1 1",
        "ccgrid v1 2 2 1 0 0 1 1 1",
        "ccgrid v1 2 2 -1 0 0 1 1 1 1",
        "ccgrid v1 2 2 1 0 0 1 1 x 1",
    ])
    def test_malformed_grid(self, tmp_path, content):
        path = tmp_path / "bad.ccgrid"
        path.write_text(content)
        with pytest.raises(GridFormatError):
            load_grid(path)

    def test_missing_grid(self, tmp_path):
        with pytest.raises(GridFormatError):
            load_grid(tmp_path / "absent.ccgrid")


class TestRegistry:
    def test_discovers_all_kinds(self):
        registry = get_registry()
        assert registry.list_kinds() == ["density_grid", "disc_array", "quadratic"]
        assert registry.discovery_errors == []

    def test_defaults_are_filled(self):
        params = get_registry().validate({"kind": "disc_array"})
        assert params == {"window": [-50.0, -50.0, 50.0, 50.0], "spacing": 10.0, "max_index": 1000}

    def test_build_quadratic(self):
        field = build_field({"kind": "quadratic", "c": 2})
        assert isinstance(field, QuadraticField)
        assert field.c == 2.0

    def test_unknown_key_is_named(self):
        with pytest.raises(UnknownConfigKey, match="'radius'"):
            build_field({"kind": "quadratic", "radius": 1.0})

    def test_unknown_kind(self):
        with pytest.raises(InvalidPotentialSpec, match="unknown potential kind"):
            build_field({"kind": "cubic"})

    def test_missing_required_path(self):
        with pytest.raises(InvalidPotentialSpec, match="requires parameter 'path'"):
            build_field({"kind": "density_grid"})

    def test_relative_grid_path(self, tmp_path):
        values = np.zeros((5, 5))
        values[2, 2] = 1.0
        write_grid(tmp_path / "spike.ccgrid", DensityGrid(values=values, h=1.0, origin=0j))
        field = build_field({"kind": "density_grid", "path": "spike.ccgrid"}, base_dir=tmp_path)
        assert isinstance(field, DensityGridField)
        assert field.total_mass == pytest.approx(1.0)
