import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypfourier.geometry import (
    BoundaryPoint,
    DiskPoint,
    Isometry,
    busemann,
    busemann_polar,
    circle_points,
    distance,
    mobius_translate,
    polar_to_disk,
)

LN3 = 1.0986122886681098

radii = st.floats(0.0, 4.0)
angles = st.floats(0.0, 2.0 * math.pi)


def disk_points(max_r=4.0):
    return st.builds(lambda r, th: polar_to_disk(r, th),
                     st.floats(0.0, max_r), angles)


class TestDiskPoint:
    def test_rejects_outside(self):
        with pytest.raises(ValueError):
            DiskPoint(1.0, 0.0)
        with pytest.raises(ValueError):
            DiskPoint(0.8, 0.7)

    def test_boundary_normalizes(self):
        b = BoundaryPoint(2.0 * math.pi + 1.0)
        assert 0.0 <= b.theta < 2.0 * math.pi
        assert b.theta == pytest.approx(1.0)


class TestDistance:
    def test_identity(self):
        assert distance(DiskPoint(0, 0), DiskPoint(0, 0)) == 0.0

    def test_closed_form(self):
        # 2*artanh(1/2) = ln 3
        assert distance(0j, 0.5 + 0j) == pytest.approx(LN3, abs=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(disk_points(), disk_points())
    def test_symmetry(self, x, y):
        assert distance(x, y) == pytest.approx(distance(y, x), abs=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(disk_points(), disk_points(), disk_points())
    def test_triangle_inequality(self, x, y, z):
        assert distance(x, z) <= distance(x, y) + distance(y, z) + 1e-12


class TestBusemann:
    @settings(max_examples=50, deadline=None)
    @given(angles)
    def test_origin_vanishes(self, th):
        assert busemann(0j, BoundaryPoint(th)) == pytest.approx(0.0, abs=1e-15)

    def test_radial_values(self):
        b = BoundaryPoint(0.9)
        toward = DiskPoint.from_complex(0.5 * b.z)
        away = DiskPoint.from_complex(-0.5 * b.z)
        assert busemann(toward, b) == pytest.approx(LN3, abs=1e-12)
        assert busemann(toward, b) == pytest.approx(distance(0j, toward.z), abs=1e-12)
        assert busemann(away, b) == pytest.approx(-LN3, abs=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(disk_points(), angles)
    def test_lipschitz_from_origin(self, x, th):
        # horocycle heights never exceed the distance from the origin
        assert abs(busemann(x, BoundaryPoint(th))) <= distance(0j, x.z) + 1e-12

    def test_polar_form_matches(self):
        r, dth = 1.7, 0.6
        a = busemann_polar(r, dth)
        b = busemann(polar_to_disk(r, dth), BoundaryPoint(0.0))
        assert a == pytest.approx(b, abs=1e-14)


class TestMobius:
    def test_maps_origin_to_center(self):
        a = DiskPoint(0.3, -0.2)
        out = mobius_translate(a, DiskPoint(0, 0))
        assert out.z == pytest.approx(a.z, abs=1e-15)

    @settings(max_examples=50, deadline=None)
    @given(disk_points())
    def test_identity_translation(self, w):
        assert mobius_translate(0j, w.z) == pytest.approx(w.z, abs=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(disk_points(2.5), disk_points(), disk_points())
    def test_preserves_distance(self, a, u, v):
        du = mobius_translate(a, u)
        dv = mobius_translate(a, v)
        assert distance(du, dv) == pytest.approx(distance(u, v), abs=1e-12)

    @settings(max_examples=60, deadline=None)
    @given(disk_points(2.5), angles, disk_points(), disk_points())
    def test_isometry_type(self, c, phi, u, v):
        g = Isometry(c, phi)
        assert distance(g(u), g(v)) == pytest.approx(distance(u, v), abs=1e-12)
        assert g(DiskPoint(0, 0)).z == pytest.approx(c.z, abs=1e-15)


class TestCirclePoints:
    def test_zero_radius(self):
        x = DiskPoint(0.2, 0.1)
        pts = circle_points(x, 0.0, 5)
        assert len(pts) == 5
        assert all(p.z == pytest.approx(x.z, abs=1e-15) for p in pts)

    def test_radius_from_origin(self):
        pts = circle_points(DiskPoint(0, 0), 1.0, 16)
        for p in pts:
            assert abs(p.z) == pytest.approx(math.tanh(0.5), abs=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(disk_points(2.0), st.floats(0.01, 3.0))
    def test_points_at_distance(self, x, t):
        for p in circle_points(x, t, 32):
            assert distance(x, p) == pytest.approx(t, abs=1e-12)


class TestPolarToDisk:
    def test_origin(self):
        assert polar_to_disk(0.0, 1.2).z == 0j

    def test_ln3_maps_to_half(self):
        assert polar_to_disk(LN3, 0.0).z == pytest.approx(0.5 + 0j, abs=1e-14)

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0.0, 8.0), angles)
    def test_roundtrip_with_distance(self, r, th):
        assert distance(0j, polar_to_disk(r, th).z) == pytest.approx(r, abs=1e-13)
