"""Tests for the box primitives."""

import math

import numpy as np
import pytest

from boxchase import (
    Box,
    DimensionMismatchError,
    box_intersect,
    cost,
    hausdorff_boxes,
    nearest_point,
    reach_box,
    sample_hausdorff,
)


def unit_square():
    return Box([0, 0], [1, 1])


class TestBox:
    def test_validation(self):
        with pytest.raises(ValueError):
            Box([0, 0], [1, -1])
        with pytest.raises(DimensionMismatchError):
            Box([0, 0], [1])
        with pytest.raises(ValueError):
            Box([0, float("nan")], [1, 1])

    def test_degenerate_axis_is_valid(self):
        b = Box([0, 0.5], [1, 0.5])
        assert b.contains([0.2, 0.5])
        assert not b.contains([0.2, 0.6])

    def test_corners(self):
        got = unit_square().corners()
        want = {(0, 0), (0, 1), (1, 0), (1, 1)}
        assert {tuple(c) for c in got} == want


class TestIntersect:
    def test_overlap(self):
        got = box_intersect(unit_square(), Box([0.5, 0], [2, 1]))
        assert got == Box([0.5, 0], [1, 1])

    def test_disjoint(self):
        assert box_intersect(unit_square(), Box([2, 2], [3, 3])) is None

    def test_idempotent(self):
        a = Box([0.1, 0.2], [0.9, 0.8])
        assert box_intersect(a, a) == a

    def test_touching_boxes_meet_in_degenerate_box(self):
        got = box_intersect(unit_square(), Box([1, 0], [2, 1]))
        assert got == Box([1, 0], [1, 1])

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            box_intersect(unit_square(), Box([0], [1]))


class TestNearestPoint:
    def test_clamp(self):
        q, d = nearest_point([0, 0], Box([0.5, 0], [1, 0.5]))
        assert tuple(q) == (0.5, 0)
        assert d == 0.5

    def test_interior(self):
        q, d = nearest_point([0.3, 0.3], unit_square())
        assert tuple(q) == (0.3, 0.3)
        assert d == 0.0

    def test_corner(self):
        q, d = nearest_point([2, 2], unit_square())
        assert tuple(q) == (1, 1)
        assert d == math.sqrt(2)

    def test_minimizes_distance(self):
        rng = np.random.default_rng(7)
        b = Box([0.2, -0.5], [0.9, 0.4])
        p = np.array([1.7, -1.2])
        _, d = nearest_point(p, b)
        probes = rng.uniform(b.lo, b.hi, size=(100, 2))
        assert all(d <= np.sqrt(((p - q) ** 2).sum()) for q in probes)


class TestCost:
    def test_unit_step(self):
        assert cost([0, 0], [1, 0]) == 1.0

    def test_identity(self):
        assert cost([0, 0], [0, 0]) == 0.0

    def test_3_4_5(self):
        assert cost([0, 0], [3, 4]) == 5.0

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            cost([0, 0], [1, 2, 3])


class TestHausdorff:
    def test_identical(self):
        assert hausdorff_boxes(unit_square(), unit_square()) == 0.0

    def test_nested(self):
        # farthest corner (2,2) clamps to (1,1)
        assert hausdorff_boxes(Box([0, 0], [2, 2]), unit_square()) == math.sqrt(2)

    def test_side_by_side_vs_sampling_oracle(self):
        a = unit_square()
        b = Box([2, 0], [3, 1])
        assert hausdorff_boxes(a, b) == 2.0
        assert abs(sample_hausdorff(a, b, 0.01) - 2.0) <= 2 * 0.01 * math.sqrt(2)

    def test_metric_properties_on_random_triples(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            boxes = []
            for _ in range(3):
                lo = rng.uniform(-1, 1, size=2)
                boxes.append(Box(lo, lo + rng.uniform(0, 1.5, size=2)))
            a, b, c = boxes
            assert hausdorff_boxes(a, a) == 0.0
            assert hausdorff_boxes(a, b) == hausdorff_boxes(b, a)
            assert (
                hausdorff_boxes(a, c)
                <= hausdorff_boxes(a, b) + hausdorff_boxes(b, c) + 1e-12
            )

    def test_agrees_with_sampling_oracle_on_random_pairs(self):
        rng = np.random.default_rng(3)
        pitch = 0.05
        for _ in range(50):
            lo_a = rng.uniform(-1, 1, size=2)
            lo_b = rng.uniform(-1, 1, size=2)
            a = Box(lo_a, lo_a + rng.uniform(0, 1, size=2))
            b = Box(lo_b, lo_b + rng.uniform(0, 1, size=2))
            exact = hausdorff_boxes(a, b)
            approx = sample_hausdorff(a, b, pitch)
            assert abs(exact - approx) <= 2 * pitch * math.sqrt(2)


class TestReachBox:
    def test_interior_ball(self):
        got = reach_box([0.5, 0.5], 0.25, unit_square())
        assert got == Box([0.25, 0.25], [0.75, 0.75])

    def test_clipped_at_boundary(self):
        got = reach_box([0, 0], 0.3, unit_square())
        assert got == Box([0, 0], [0.3, 0.3])

    def test_zero_radius(self):
        got = reach_box([0.4, 0.7], 0.0, unit_square())
        assert got == Box([0.4, 0.7], [0.4, 0.7])

    def test_outside_domain_rejected(self):
        with pytest.raises(ValueError):
            reach_box([2, 2], 0.1, unit_square())


def test_intersection_correspondence_is_1_lipschitz():
    # Box-class property: moving the reach center by ||x - x'|| moves the
    # reach/body intersection by at most that much in Hausdorff distance.
    rng = np.random.default_rng(11)
    domain = Box([0, 0], [1, 1])
    rho = 0.3
    checked = 0
    while checked < 300:
        lo = rng.uniform(0, 0.6, size=2)
        src = Box(lo, lo + rng.uniform(0.05, 0.4, size=2))
        if not domain.contains_box(src):
            continue
        lo_b = rng.uniform(0, 0.6, size=2)
        body = Box(lo_b, np.minimum(lo_b + rng.uniform(0.05, 0.4, size=2), 1.0))
        x = rng.uniform(src.lo, src.hi)
        x_alt = rng.uniform(src.lo, src.hi)
        cut = box_intersect(reach_box(x, rho, domain), body)
        cut_alt = box_intersect(reach_box(x_alt, rho, domain), body)
        if cut is None or cut_alt is None:
            continue
        checked += 1
        gap = float(np.sqrt(((x - x_alt) ** 2).sum()))
        assert hausdorff_boxes(cut, cut_alt) <= gap + 1e-12
