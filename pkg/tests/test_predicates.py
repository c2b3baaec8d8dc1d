import math

import numpy as np
import pytest

from stlrisk.errors import DimensionError, FormatError
from stlrisk.predicates import (
    Complement,
    CustomPredicate,
    Halfspace,
    NormBall,
    StateSlice,
    parse_predicate_table,
    signed_distance,
)


def boundary_distance_disk(point, center, radius, samples=20000):
    """Min distance from point to a circle, by dense boundary sampling."""
    angles = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    boundary = np.stack(
        [center[0] + radius * np.cos(angles), center[1] + radius * np.sin(angles)], axis=1
    )
    return float(np.min(np.linalg.norm(boundary - np.asarray(point), axis=1)))


def boundary_distance_box(point, center, radius, per_side=20000):
    """Min distance from point to a square boundary, by dense sampling."""
    cx, cy = center
    s = np.linspace(-radius, radius, per_side)
    edges = np.concatenate(
        [
            np.stack([cx + s, np.full_like(s, cy - radius)], axis=1),
            np.stack([cx + s, np.full_like(s, cy + radius)], axis=1),
            np.stack([np.full_like(s, cx - radius), cy + s], axis=1),
            np.stack([np.full_like(s, cx + radius), cy + s], axis=1),
        ]
    )
    return float(np.min(np.linalg.norm(edges - np.asarray(point), axis=1)))


class TestSpecCases:
    def test_disk_center_margin_is_radius(self):
        p = NormBall((0, 1), (6.0, 4.0), 0.7, "l2")
        assert signed_distance(p, [6.0, 4.0]) == pytest.approx(0.7, abs=1e-12)

    def test_disk_outside(self):
        p = NormBall((0, 1), (6.0, 4.0), 0.7, "l2")
        assert signed_distance(p, [6.0, 5.4]) == pytest.approx(-0.7, abs=1e-12)

    def test_box_inside_min_face(self):
        p = NormBall((0, 1), (4.0, 5.0), 0.5, "linf")
        value = signed_distance(p, [4.2, 5.1])
        assert value == pytest.approx(0.3, abs=1e-12)
        oracle = boundary_distance_box([4.2, 5.1], (4.0, 5.0), 0.5)
        assert abs(value) == pytest.approx(oracle, abs=1e-6)


class TestHalfspace:
    def test_margin_is_normalized(self):
        p = Halfspace((3.0, 4.0), 0.0)
        assert signed_distance(p, [1.0, 0.0]) == pytest.approx(0.6, abs=1e-12)

    def test_random_points_match_projection(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            dim = int(rng.integers(1, 4))
            a = rng.normal(size=dim)
            while not np.any(a):
                a = rng.normal(size=dim)
            b = float(rng.normal())
            s = rng.normal(size=dim) * 3.0
            expected = (float(a @ s) + b) / float(np.linalg.norm(a))
            assert signed_distance(Halfspace(tuple(a), b), s) == pytest.approx(expected, abs=1e-12)

    def test_zero_normal_rejected(self):
        with pytest.raises(ValueError):
            Halfspace((0.0, 0.0), 1.0)


class TestNormBall:
    def test_l2_magnitude_matches_boundary_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            center = tuple(rng.normal(size=2))
            radius = float(rng.uniform(0.3, 2.0))
            point = rng.normal(size=2) * 2.0
            value = signed_distance(NormBall((0, 1), center, radius, "l2"), point)
            if abs(value) < 0.05:
                continue
            assert abs(value) == pytest.approx(
                boundary_distance_disk(point, center, radius), abs=1e-6
            )

    def test_linf_magnitude_matches_boundary_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            center = tuple(rng.normal(size=2))
            radius = float(rng.uniform(0.3, 2.0))
            point = rng.normal(size=2) * 2.0
            value = signed_distance(NormBall((0, 1), center, radius, "linf"), point)
            if abs(value) < 0.05:
                continue
            assert abs(value) == pytest.approx(
                boundary_distance_box(point, center, radius), abs=1e-6
            )

    def test_interval_in_one_dimension(self):
        p = NormBall((0,), (1.0,), 0.5, "linf")
        assert signed_distance(p, [1.2]) == pytest.approx(0.3, abs=1e-12)
        assert signed_distance(p, [2.0]) == pytest.approx(-0.5, abs=1e-12)

    def test_slice_center_reads_state(self):
        p = NormBall((0, 1), StateSlice((2, 3)), 0.7, "l2")
        assert signed_distance(p, [6.0, 5.4, 6.0, 4.0]) == pytest.approx(-0.7, abs=1e-12)

    def test_boundary_counts_as_inside(self):
        p = NormBall((0,), (0.0,), 1.0, "l2")
        assert signed_distance(p, [1.0]) == 0.0

    def test_validation(self):
        with pytest.raises(ValueError):
            NormBall((0, 1), (0.0,), 0.5, "l2")  # length mismatch
        with pytest.raises(ValueError):
            NormBall((0,), (0.0,), 0.0, "l2")  # radius
        with pytest.raises(ValueError):
            NormBall((0,), (0.0,), 0.5, "l3")  # unknown norm

    def test_dimension_error_on_short_state(self):
        p = NormBall((0, 3), (0.0, 0.0), 0.5, "l2")
        with pytest.raises(DimensionError):
            signed_distance(p, [1.0, 2.0])


class TestComplementAndCustom:
    def test_complement_flips_sign(self):
        inner = NormBall((0,), (0.0,), 1.0, "l2")
        outer = Complement(inner)
        assert signed_distance(outer, [0.2]) == -signed_distance(inner, [0.2])

    def test_custom_callable(self):
        p = CustomPredicate(lambda s: s[0] - 1.0)
        assert signed_distance(p, [3.0]) == 2.0


class TestPredicateTable:
    def test_parse_full_schema(self):
        table = parse_predicate_table(
            {
                "h": {"kind": "halfspace", "a": [1.0, 0.0], "b": -2.0},
                "ball": {"kind": "ball", "pos": [0, 1], "center": [1.0, 2.0], "radius": 0.5, "norm": "l2"},
                "box": {
                    "kind": "ball",
                    "pos": [0, 1],
                    "center": {"slice": [2, 3]},
                    "radius": 0.5,
                    "norm": "linf",
                    "complement": True,
                },
            }
        )
        assert isinstance(table["h"], Halfspace)
        assert isinstance(table["ball"], NormBall)
        assert isinstance(table["box"], Complement)
        assert table["box"].inner.center == StateSlice((2, 3))

    def test_unknown_kind(self):
        with pytest.raises(FormatError):
            parse_predicate_table({"p": {"kind": "polytope"}})

    def test_missing_field(self):
        with pytest.raises(FormatError):
            parse_predicate_table({"p": {"kind": "ball", "pos": [0]}})
