import numpy as np
import pytest

from ccball.controls import random_control, twist
from ccball.core.config import NumericSettings
from ccball.core.exceptions import DegenerateAfterPerturbation, InvalidArgument
from ccball.cycles import (
    PolyLoop,
    SimpleCycle,
    cycle_upper_witness,
    decompose,
    is_simple_polygon,
    loop_integral,
    refine_intersections,
    signed_mass,
)

BOWTIE = [-1 + 1j, 1 - 1j, 1 + 1j, -1 - 1j]
CW_SQUARE = [-1 + 1j, 1 + 1j, 1 - 1j, -1 - 1j]


def random_loop(rng, n=20, scale=1.0):
    return PolyLoop(scale * (rng.normal(size=n) + 1j * rng.normal(size=n)))


class TestPolyLoop:
    def test_from_points_drops_repeats_and_closure(self):
        loop = PolyLoop.from_points([0j, 1 + 0j, 1 + 0j, 1 + 1j, 0j])
        assert loop.size == 3
        assert loop.base_point == 0j

    def test_too_few_vertices(self):
        with pytest.raises(InvalidArgument):
            PolyLoop.from_points([0j, 1 + 0j, 0j])

    def test_json(self):
        loop = PolyLoop.from_json([[0, 0], [1, 0], [0, 1]])
        assert loop.to_json() == [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]
        with pytest.raises(InvalidArgument):
            PolyLoop.from_json([[0, 0], [1]])

    def test_reversed_keeps_base(self):
        loop = PolyLoop(np.array(CW_SQUARE), base_index=2)
        back = loop.reversed()
        assert back.base_point == loop.base_point
        assert back.vertices[1] == loop.vertices[1]


class TestRefine:
    def test_simple_loop_unchanged(self):
        refined = refine_intersections(PolyLoop(np.array(CW_SQUARE)))
        assert refined.size == 4
        assert refined.refined

    def test_bowtie_crossing_inserted_twice(self):
        refined = refine_intersections(PolyLoop(np.array(BOWTIE)))
        assert refined.size == 6
        assert np.sum(np.abs(refined.vertices) < 1e-12) == 2
        assert np.all(np.diff(refined.params) > 0)

    def test_vertex_contact_is_jittered(self):
        touching = PolyLoop(np.array([0j, 2 + 0j, 2 + 1j, 1 + 0j, 0.5 - 1j]))
        refined = refine_intersections(touching)
        assert refined.vertices[refined.base_index] == 0j

    def test_gives_up_without_jitter(self):
        touching = PolyLoop(np.array([0j, 2 + 0j, 2 + 1j, 1 + 0j, 0.5 - 1j]))
        with pytest.raises(DegenerateAfterPerturbation):
            refine_intersections(touching, numerics=NumericSettings(jitter_attempts=0))


class TestDecompose:
    def test_bowtie_splits_into_opposite_triangles(self, quadratic):
        cycles = decompose(PolyLoop(np.array(BOWTIE)))
        assert sorted(c.orientation for c in cycles) == ["ccw", "cw"]
        assert all(is_simple_polygon(list(c.vertices)) for c in cycles)
        assert sorted(signed_mass(quadratic, c) for c in cycles) == [pytest.approx(-4.0), pytest.approx(4.0)]

    def test_provenance_covers_the_loop(self):
        cycles = decompose(PolyLoop(np.array(BOWTIE)))
        covered = sum(b - a for c in cycles for a, b in c.provenance)
        assert covered == pytest.approx(4.0)

    def test_every_refined_edge_lies_in_one_cycle(self, rng):
        for _ in range(20):
            loop = random_loop(rng)
            refined = refine_intersections(loop)
            cycles = decompose(refined)
            assert sum(c.vertices.size for c in cycles) == refined.size
            intervals = sorted(iv for c in cycles for iv in c.provenance)
            assert sum(b - a for a, b in intervals) == pytest.approx(loop.size)
            assert all(b0 <= a1 + 1e-12 for (_, b0), (a1, _) in zip(intervals, intervals[1:]))

    def test_degenerate_cycle_mass(self, quadratic):
        spike = SimpleCycle(vertices=np.array([0j, 1 + 0j]), orientation="ccw", degenerate=True)
        assert signed_mass(quadratic, spike) == 0.0
        thin = SimpleCycle(vertices=np.array([0j, 1 + 0j, 0.5 + 1e-14j]), orientation="ccw", degenerate=True)
        assert signed_mass(quadratic, thin) == pytest.approx(-4.0 * 0.5e-14)
        assert thin.to_json()["degenerate"] is True

    def test_simple_loop_is_one_cycle(self, quadratic):
        cycles = decompose(PolyLoop(np.array(CW_SQUARE)))
        assert len(cycles) == 1
        assert cycles[0].orientation == "cw"
        assert cycles[0].area == pytest.approx(-4.0)

    def test_upper_witness(self, quadratic):
        square = PolyLoop(np.array(CW_SQUARE))
        assert cycle_upper_witness(quadratic, square) == pytest.approx(16.0)
        assert cycle_upper_witness(quadratic, square.reversed()) == 0.0
        assert cycle_upper_witness(quadratic, PolyLoop(np.array(BOWTIE))) == pytest.approx(4.0)

    def test_green_identity_on_random_loops(self, quadratic, rng):
        for _ in range(100):
            loop = random_loop(rng)
            total = sum(signed_mass(quadratic, c) for c in decompose(loop))
            integral = loop_integral(quadratic, loop)
            assert total == pytest.approx(integral, rel=1e-9, abs=1e-8)

    @pytest.mark.slow
    def test_green_identity_with_discs(self, disc_array, rng):
        for _ in range(10):
            loop = random_loop(rng, n=12, scale=0.4)
            total = sum(signed_mass(disc_array, c) for c in decompose(loop))
            assert total == pytest.approx(loop_integral(disc_array, loop), rel=1e-8, abs=1e-10)

    def test_loop_integral_of_control_is_twist(self, quadratic, rng):
        for _ in range(5):
            u = random_control(rng)
            loop = PolyLoop.from_control(u, 0.3 + 0.1j, 2.0)
            assert loop_integral(quadratic, loop) == pytest.approx(twist(quadratic, 0.3 + 0.1j, 2.0, u), rel=1e-9, abs=1e-12)

    def test_witness_bounds_twist(self, quadratic, rng):
        for _ in range(10):
            u = random_control(rng)
            loop = PolyLoop.from_control(u, 0j, 1.0)
            assert abs(twist(quadratic, 0j, 1.0, u)) <= max(
                cycle_upper_witness(quadratic, loop), cycle_upper_witness(quadratic, loop.reversed())
            ) + 1e-9
