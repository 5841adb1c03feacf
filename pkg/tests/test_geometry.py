import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pshoa.errors import DomainError
from pshoa.geometry import (
    PlaneWave,
    ProlateParams,
    RigidSphere,
    build_sphere_array,
    build_spheroid_array,
    cartesian_from_prolate,
    prolate_from_cartesian,
    rotation_for_long_axis,
    spheroid_from_radii,
)


class TestProlateCoordinates:
    def test_on_axis_point(self):
        xi, eta, phi = prolate_from_cartesian(0.0, 0.0, 2.0, 1.0)
        assert xi == pytest.approx(2.0, abs=1e-14)
        assert eta == pytest.approx(1.0, abs=1e-14)
        assert phi == 0.0

    def test_on_axis_mirror(self):
        xi, eta, _ = prolate_from_cartesian(0.0, 0.0, -2.0, 1.0)
        assert xi == pytest.approx(2.0, abs=1e-14)
        assert eta == pytest.approx(-1.0, abs=1e-14)

    def test_focal_segment_collapse(self):
        x, y, z = cartesian_from_prolate(1.0, 0.5, 2.2, 1.0)
        assert (x, y) == (0.0, 0.0)
        assert z == pytest.approx(0.5, abs=1e-15)

    def test_equatorial_point(self):
        x, y, z = cartesian_from_prolate(2.0, 0.0, np.pi / 2, 1.0)
        assert x == pytest.approx(0.0, abs=1e-15)
        assert y == pytest.approx(np.sqrt(3.0), rel=1e-15)
        assert z == 0.0

    def test_round_trip_random(self):
        rng = np.random.default_rng(42)
        pts = rng.normal(size=(1000, 3)) * 2.0
        a = 0.7
        xi, eta, phi = prolate_from_cartesian(pts[:, 0], pts[:, 1], pts[:, 2], a)
        x, y, z = cartesian_from_prolate(xi, eta, phi, a)
        back = np.column_stack([x, y, z])
        assert np.max(np.linalg.norm(back - pts, axis=1)) < 1e-10

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            cartesian_from_prolate(0.5, 0.0, 0.0, 1.0)
        with pytest.raises(DomainError):
            cartesian_from_prolate(2.0, 1.5, 0.0, 1.0)
        with pytest.raises(DomainError):
            prolate_from_cartesian(1.0, 0.0, 0.0, -1.0)


class TestSpheroidParams:
    def test_reference_geometry(self):
        p = spheroid_from_radii(1.0, 0.05)
        assert p.a == pytest.approx(0.99874921777190895, rel=1e-12)
        assert p.xi1 == pytest.approx(1.0012523486435176, rel=1e-12)
        assert p.r_long == pytest.approx(1.0, rel=1e-13)
        assert p.r_short == pytest.approx(0.05, rel=1e-12)

    def test_simple_values(self):
        p = spheroid_from_radii(np.sqrt(2.0), 1.0)
        assert p.a == pytest.approx(1.0, rel=1e-14)
        assert p.xi1 == pytest.approx(np.sqrt(2.0), rel=1e-14)

    @settings(max_examples=40, deadline=None)
    @given(rl=st.floats(min_value=0.2, max_value=5.0),
           ratio=st.floats(min_value=0.01, max_value=0.95))
    def test_radii_round_trip(self, rl, ratio):
        p = spheroid_from_radii(rl, rl * ratio)
        assert p.r_long == pytest.approx(rl, rel=1e-10)
        assert p.r_short == pytest.approx(rl * ratio, rel=1e-10)

    def test_oblate_rejected(self):
        with pytest.raises(DomainError):
            spheroid_from_radii(0.05, 1.0)
        with pytest.raises(DomainError):
            spheroid_from_radii(1.0, 1.0)

    def test_surface_area_against_quadrature(self):
        # independent oracle: numerical area integral of the parametric surface
        p = spheroid_from_radii(1.0, 0.05)
        etas, wts = np.polynomial.legendre.leggauss(200)
        a, xi1 = p.a, p.xi1
        # |r_eta x r_phi| = a^2 sqrt(xi1^2-1) sqrt(xi1^2 - eta^2)
        integrand = a**2 * np.sqrt(xi1**2 - 1.0) * np.sqrt(xi1**2 - etas**2)
        area_quad = 2.0 * np.pi * np.dot(wts, integrand)
        assert p.surface_area() == pytest.approx(area_quad, rel=1e-12)

    def test_areas_match_within_one_percent(self):
        p = spheroid_from_radii(1.0, 0.05)
        s = RigidSphere(0.198)
        assert s.surface_area() == pytest.approx(4 * np.pi * 0.198**2, rel=1e-15)
        assert abs(p.surface_area() - s.surface_area()) / s.surface_area() < 0.01


class TestArrays:
    def test_sphere_array_radius(self):
        geom = build_sphere_array(0.198, 16, 32)
        assert geom.count == 512
        radii = np.linalg.norm(geom.positions, axis=1)
        assert np.max(np.abs(radii - 0.198)) < 1e-12

    def test_single_microphone(self):
        geom = build_sphere_array(1.0, 1, 1)
        assert geom.count == 1
        assert geom.native[0, 0] == pytest.approx(np.pi / 2, abs=1e-12)

    def test_spheroid_array_on_surface(self):
        p = spheroid_from_radii(1.0, 0.05)
        geom = build_spheroid_array(p, 16, 32, long_axis="x")
        assert geom.count == 512
        local = geom.to_local(geom.positions)
        xi, eta, _ = prolate_from_cartesian(local[:, 0], local[:, 1], local[:, 2], p.a)
        assert np.max(np.abs(xi - p.xi1)) < 1e-12
        assert np.allclose(eta, geom.native[:, 0], atol=1e-12)

    def test_long_axis_orientation(self):
        p = spheroid_from_radii(1.0, 0.3)
        for axis, idx in (("x", 0), ("y", 1), ("z", 2)):
            geom = build_spheroid_array(p, 8, 16, long_axis=axis)
            extents = geom.positions.max(axis=0) - geom.positions.min(axis=0)
            assert np.argmax(extents) == idx

    def test_long_axis_z_is_identity(self):
        p = spheroid_from_radii(1.0, 0.3)
        geom = build_spheroid_array(p, 8, 16, long_axis="z")
        assert np.array_equal(geom.rotation, np.eye(3))

    def test_rotation_preserves_distances(self):
        p = spheroid_from_radii(1.0, 0.05)
        g_z = build_spheroid_array(p, 8, 16, long_axis="z")
        g_x = build_spheroid_array(p, 8, 16, long_axis="x")
        d_z = np.linalg.norm(g_z.positions[:, None] - g_z.positions[None, :], axis=2)
        d_x = np.linalg.norm(g_x.positions[:, None] - g_x.positions[None, :], axis=2)
        assert np.max(np.abs(d_z - d_x)) < 1e-12

    def test_rotations_are_proper(self):
        for axis in ("x", "y", "z"):
            r = rotation_for_long_axis(axis)
            assert np.allclose(r @ r.T, np.eye(3), atol=1e-15)
            assert np.linalg.det(r) == pytest.approx(1.0, abs=1e-15)

    def test_confocal_surfaces(self):
        # every xi-surface shares the foci (0, 0, +/- a): sum of focal
        # distances equals 2 a xi
        a = 0.9
        for xi1 in (1.001, 1.2, 3.0):
            etas = np.linspace(-0.99, 0.99, 11)
            x, y, z = cartesian_from_prolate(np.full_like(etas, xi1), etas, 0.7, a)
            dp = np.sqrt(x**2 + y**2 + (z + a) ** 2)
            dm = np.sqrt(x**2 + y**2 + (z - a) ** 2)
            assert np.max(np.abs(dp + dm - 2 * a * xi1)) < 1e-12

    def test_invalid_counts(self):
        with pytest.raises(DomainError):
            build_sphere_array(1.0, 0, 8)
        with pytest.raises(DomainError):
            build_spheroid_array(spheroid_from_radii(1.0, 0.3), 8, 0)


class TestPlaneWave:
    def test_normalizes_direction(self):
        pw = PlaneWave(k=2.0, direction=(3.0, 0.0, 4.0))
        assert np.linalg.norm(pw.direction) == pytest.approx(1.0, abs=1e-12)

    def test_from_frequency(self):
        pw = PlaneWave.from_frequency(541.8, (1, 0, 0), sound_speed=343.0)
        assert pw.k == pytest.approx(2 * np.pi * 541.8 / 343.0, rel=1e-15)
        assert pw.theta == pytest.approx(np.pi / 2, abs=1e-12)
        assert pw.phi == pytest.approx(0.0, abs=1e-15)

    def test_rotation(self):
        pw = PlaneWave(k=1.0, direction=(1.0, 0.0, 0.0))
        r = rotation_for_long_axis("x")
        local = pw.rotated(r.T)
        assert np.allclose(local.direction, (0.0, 0.0, 1.0), atol=1e-15)

    def test_invalid(self):
        with pytest.raises(DomainError):
            PlaneWave(k=0.0, direction=(1, 0, 0))
        with pytest.raises(DomainError):
            PlaneWave(k=1.0, direction=(0, 0, 0))
