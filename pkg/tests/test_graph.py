"""Pointwise radial-graph quantities, cross-checked against an embedded
finite-difference oracle.

The oracle builds the actual surface X = exp(phi(x)) * e(x) over normal
coordinates x at the north pole of the unit 2-sphere, differences it with
5-point stencils, and assembles the metric, second fundamental form, and mean
curvature from first principles.  In normal coordinates the round metric is
the identity and Christoffel symbols vanish at the base point, so the
covariant derivative inputs of graph_quantities are plain derivatives of phi.
"""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from himcf.errors import InvalidMetric
from himcf.graph import graph_quantities


def sphere_point(x):
    rho = np.hypot(x[0], x[1])
    if rho < 1e-30:
        return np.array([0.0, 0.0, 1.0])
    return np.array([np.sin(rho) * x[0] / rho, np.sin(rho) * x[1] / rho,
                     np.cos(rho)])


def embedded_oracle(phi0, a, B, h=5e-3):
    """(g_ij, h_ij, H) of the graph u = exp(phi) at x = 0 by differencing."""
    a = np.asarray(a, float)
    B = np.asarray(B, float)

    def X(x):
        x = np.asarray(x, float)
        phi = phi0 + a @ x + 0.5 * x @ B @ x
        return np.exp(phi) * sphere_point(x)

    e1 = np.array([1.0, 0.0])
    e2 = np.array([0.0, 1.0])
    basis = (e1, e2)
    w1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0      # f'
    w2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0  # f''
    offsets = np.arange(-2, 3)

    def d1(direction):
        return sum(w * X(h * o * direction) for w, o in zip(w1, offsets)) / h

    def d2(direction):
        return sum(w * X(h * o * direction) for w, o in zip(w2, offsets)) / h**2

    def d_mixed():
        acc = np.zeros(3)
        for wi, oi in zip(w1, offsets):
            for wj, oj in zip(w1, offsets):
                acc = acc + wi * wj * X(h * (oi * e1 + oj * e2))
        return acc / h**2

    Xi = [d1(b) for b in basis]
    Xij = np.empty((2, 2, 3))
    Xij[0, 0] = d2(e1)
    Xij[1, 1] = d2(e2)
    Xij[0, 1] = Xij[1, 0] = d_mixed()

    g = np.array([[Xi[i] @ Xi[j] for j in range(2)] for i in range(2)])
    nu = np.cross(Xi[0], Xi[1])
    nu = nu / np.linalg.norm(nu)
    h_form = np.array([[-nu @ Xij[i, j] for j in range(2)] for i in range(2)])
    H = np.trace(np.linalg.inv(g) @ h_form)
    return g, h_form, H


class TestRadialPoint:
    @pytest.mark.parametrize("n,r", [(2, 1.0), (3, 0.5), (5, 2.0)])
    def test_round_sphere_values(self, n, r):
        rng = np.random.default_rng(7)
        A = rng.normal(size=(n, n))
        sigma = A @ A.T + n * np.eye(n)
        s = graph_quantities(n, r, np.zeros(n), np.zeros((n, n)), sigma)
        assert s.upsilon == 1.0
        assert s.H * s.u == pytest.approx(n, abs=1e-13)
        np.testing.assert_allclose(s.h_ij, r * sigma, atol=1e-12)
        np.testing.assert_allclose(s.g_ij, r**2 * sigma, atol=1e-12)

    def test_inverse_metric_identity(self):
        s = graph_quantities(3, 1.3, [0.2, -0.1, 0.4],
                             0.1 * np.eye(3), np.eye(3))
        np.testing.assert_allclose(s.g_inv @ s.g_ij, np.eye(3), atol=1e-12)


class TestEmbeddedOracle:
    def test_tilted_graph(self):
        # u = 1 at the point, gradient (0.3, 0), flat Hessian
        a = np.array([0.3, 0.0])
        g_fd, h_fd, H_fd = embedded_oracle(0.0, a, np.zeros((2, 2)))
        s = graph_quantities(2, 1.0, a, np.zeros((2, 2)), np.eye(2))
        np.testing.assert_allclose(s.g_ij, g_fd, atol=1e-6)
        np.testing.assert_allclose(s.h_ij, h_fd, atol=1e-6)
        assert s.H == pytest.approx(H_fd, abs=1e-6)

    def test_curved_graph(self):
        phi0 = 0.1
        a = np.array([0.3, -0.2])
        B = np.array([[0.2, 0.1], [0.1, -0.15]])
        g_fd, h_fd, H_fd = embedded_oracle(phi0, a, B)
        s = graph_quantities(2, float(np.exp(phi0)), a, B, np.eye(2))
        np.testing.assert_allclose(s.g_ij, g_fd, atol=1e-6)
        np.testing.assert_allclose(s.h_ij, h_fd, atol=1e-6)
        assert s.H == pytest.approx(H_fd, abs=1e-6)


def test_mean_curvature_scales_inversely_with_u():
    a = np.array([0.3, -0.1])
    B = np.array([[0.1, 0.0], [0.0, -0.2]])
    base = graph_quantities(2, 1.0, a, B, np.eye(2))
    for lam in (2.0, 0.5, 7.3):
        scaled = graph_quantities(2, lam, a, B, np.eye(2))
        assert scaled.H == pytest.approx(base.H / lam, rel=1e-13)
        assert scaled.upsilon == pytest.approx(base.upsilon)


class TestValidation:
    def test_nonpositive_u(self):
        with pytest.raises(InvalidMetric):
            graph_quantities(2, 0.0, np.zeros(2), np.zeros((2, 2)), np.eye(2))
        with pytest.raises(InvalidMetric):
            graph_quantities(2, -1.0, np.zeros(2), np.zeros((2, 2)), np.eye(2))

    def test_shape_mismatch(self):
        with pytest.raises(InvalidMetric):
            graph_quantities(2, 1.0, np.zeros(3), np.zeros((2, 2)), np.eye(2))

    def test_asymmetric_hessian(self):
        bad = np.array([[0.0, 0.5], [-0.5, 0.0]])
        with pytest.raises(InvalidMetric):
            graph_quantities(2, 1.0, np.zeros(2), bad, np.eye(2))

    def test_indefinite_sigma(self):
        with pytest.raises(InvalidMetric):
            graph_quantities(2, 1.0, np.zeros(2), np.zeros((2, 2)),
                             np.diag([1.0, -1.0]))


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_assembled_tensors_are_consistent(data):
    n = data.draw(st.integers(2, 4))
    rng = np.random.default_rng(data.draw(st.integers(0, 10**6)))
    A = rng.normal(size=(n, n))
    sigma = A @ A.T + n * np.eye(n)
    phi_i = rng.normal(scale=0.5, size=n)
    M = rng.normal(scale=0.3, size=(n, n))
    s = graph_quantities(n, float(rng.uniform(0.2, 3.0)), phi_i,
                         (M + M.T) / 2, sigma)
    assert s.upsilon >= 1.0
    np.testing.assert_allclose(s.h_ij, s.h_ij.T, atol=1e-12)
    np.testing.assert_allclose(s.g_inv @ s.g_ij, np.eye(n), atol=1e-12)
    # H is the g-trace of the shape operator
    assert s.H == pytest.approx(float(np.trace(s.g_inv @ s.h_ij)), abs=1e-10)
