"""Discrete polygon geometry helpers."""
import numpy as np
import pytest

from himcf.curves import (
    curve_from_radius_profile,
    discrete_curvature,
    discrete_tangent_normal,
    normal_angles,
    polygon_hausdorff,
    polygon_length,
    require_convex,
    require_nondegenerate,
    resample_equal_arclength,
    turning_angles,
)
from himcf.errors import DegenerateEdge, NotConvex


def circle_points(radius=1.0, M=256, center=(0.0, 0.0)):
    s = 2 * np.pi * np.arange(M) / M
    return np.column_stack([center[0] + radius * np.cos(s),
                            center[1] + radius * np.sin(s)])


def ellipse_points(a, b, M=256):
    s = 2 * np.pi * np.arange(M) / M
    return np.column_stack([a * np.cos(s), b * np.sin(s)])


def test_polygon_length_converges_to_circumference():
    L = polygon_length(circle_points(radius=2.0, M=4096))
    assert L == pytest.approx(4 * np.pi, rel=1e-6)


def test_turning_angles_sum_to_full_turn():
    for P in (circle_points(M=64), ellipse_points(1.7, 0.6, M=128)):
        assert np.sum(turning_angles(P)) == pytest.approx(2 * np.pi, abs=1e-12)


def test_discrete_curvature_on_circle():
    k = discrete_curvature(circle_points(radius=2.0, M=512))
    np.testing.assert_allclose(k, 0.5, rtol=1e-4)


def test_discrete_curvature_ellipse_extremes():
    # vertex 0 sits at (a, 0) where k = a/b^2
    P = ellipse_points(2.0, 1.0, M=4096)
    k = discrete_curvature(P)
    assert k[0] == pytest.approx(2.0, rel=1e-4)
    assert k[1024] == pytest.approx(0.25, rel=1e-4)


def test_tangent_normal_frame_on_circle():
    P = circle_points(M=512)
    T, nu = discrete_tangent_normal(P)
    np.testing.assert_allclose(np.hypot(T[:, 0], T[:, 1]), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.sum(T * nu, axis=1), 0.0, atol=1e-12)
    # outward normal points along the position vector on an origin circle
    np.testing.assert_allclose(np.sum(nu * P, axis=1), 1.0, atol=1e-4)


def test_normal_angles_unwrap_monotonically():
    ang = normal_angles(ellipse_points(1.5, 1.0, M=256))
    assert np.all(np.diff(ang) > 0)
    assert ang[-1] - ang[0] < 2 * np.pi


def test_require_convex_rejects_dented_polygon():
    P = np.array([[1.0, 0.0], [0.0, 1.0], [0.2, 0.2], [0.0, -1.0]])
    with pytest.raises(NotConvex):
        require_convex(P)
    require_convex(circle_points(M=32))


def test_require_nondegenerate_rejects_coincident_vertices():
    P = circle_points(M=32)
    P_bad = P.copy()
    P_bad[5] = P_bad[4]
    with pytest.raises(DegenerateEdge):
        require_nondegenerate(P_bad)
    require_nondegenerate(P)


class TestHausdorff:
    def test_identical_is_zero(self):
        P = ellipse_points(2.0, 1.0, M=128)
        assert polygon_hausdorff(P, P) == 0.0

    def test_concentric_circles(self):
        d = polygon_hausdorff(circle_points(1.0, M=1024), circle_points(2.0, M=1024))
        assert d == pytest.approx(1.0, abs=1e-4)

    def test_symmetric(self):
        P = circle_points(1.0, M=256)
        Q = ellipse_points(1.3, 0.9, M=256)
        assert polygon_hausdorff(P, Q) == pytest.approx(polygon_hausdorff(Q, P))

    def test_translation_shows_up(self):
        P = circle_points(1.0, M=512)
        Q = circle_points(1.0, M=512, center=(0.25, 0.0))
        assert polygon_hausdorff(P, Q) == pytest.approx(0.25, abs=1e-3)


class TestResampling:
    def test_equalizes_edge_lengths(self):
        # strongly nonuniform parametrization of a circle
        s = 2 * np.pi * np.arange(256) / 256
        warped = s + 0.4 * np.sin(s)
        P = np.column_stack([np.cos(warped), np.sin(warped)])
        Q, _ = resample_equal_arclength(P)
        lengths = np.hypot(*(np.roll(Q, -1, axis=0) - Q).T)
        assert np.max(lengths) / np.min(lengths) < 1.0001

    def test_count_override(self):
        P = circle_points(1.0, M=1024)
        Q, _ = resample_equal_arclength(P, count=128)
        assert Q.shape == (128, 2)
        np.testing.assert_allclose(np.hypot(Q[:, 0], Q[:, 1]), 1.0, atol=1e-4)

    def test_field_transport(self):
        s = 2 * np.pi * np.arange(512) / 512
        P = np.column_stack([np.cos(s), np.sin(s)])
        field = np.cos(s)
        Q, (f,) = resample_equal_arclength(P, fields=[field])
        # on an already-uniform circle the resample is near-identity
        np.testing.assert_allclose(Q, P, atol=1e-10)
        np.testing.assert_allclose(f, field, atol=1e-8)

    def test_length_preserved(self):
        P = ellipse_points(2.0, 1.0, M=512)
        Q, _ = resample_equal_arclength(P)
        assert polygon_length(Q) == pytest.approx(polygon_length(P), rel=1e-5)


def test_curve_from_radius_profile():
    c = curve_from_radius_profile(1.5, 64, sigma_value=-0.5)
    np.testing.assert_allclose(np.hypot(c.P[:, 0], c.P[:, 1]), 1.5, atol=1e-12)
    np.testing.assert_allclose(c.sigma, -0.5)
    assert c.M == 64
