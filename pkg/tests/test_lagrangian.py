"""Lagrangian normal-velocity solver and cross-solver agreement."""
import math

import numpy as np
import pytest

from himcf.curves import polygon_hausdorff, polygon_length
from himcf.errors import NotConvex
from himcf.flow import FlowConfig, run_support_flow
from himcf.grids import AngleGrid
from himcf.lagrangian import (
    run_lagrangian_flow,
    step_lagrangian,
    tangential_velocity_max,
)
from himcf.presets import circle_curve, ellipse_curve, ellipse_support
from himcf.support import PlaneCurve, support_to_curve


def radii(c):
    return np.hypot(c.P[:, 0], c.P[:, 1])


class TestStep:
    def test_circle_step_tracks_closed_form(self):
        c = circle_curve(256, 1.0, speed=-1.0)
        out = step_lagrangian(c, 1e-3)
        np.testing.assert_allclose(radii(out), math.exp(-1e-3), atol=1e-9)
        np.testing.assert_allclose(out.sigma, -1.0 + 1e-3, atol=1e-5)

    def test_zero_speed_leaves_positions_and_charges_sigma(self):
        c = circle_curve(128, 2.0, speed=0.0)
        dt = 1e-3
        out = step_lagrangian(c, dt)
        # position drift is second order in dt, sigma picks up dt/k = dt*r
        np.testing.assert_allclose(out.P, c.P, atol=5e-6)
        np.testing.assert_allclose(out.sigma, dt * 2.0, rtol=1e-2)

    def test_rotational_equivariance(self):
        c = ellipse_curve(128, 1.5, 1.0, speed=-0.4)
        phi = 0.7
        R = np.array([[math.cos(phi), -math.sin(phi)],
                      [math.sin(phi), math.cos(phi)]])
        rotated = PlaneCurve(P=c.P @ R.T, sigma=c.sigma, t=c.t)
        a = step_lagrangian(rotated, 1e-3)
        b = step_lagrangian(c, 1e-3)
        np.testing.assert_allclose(a.P, b.P @ R.T, atol=1e-12)
        np.testing.assert_allclose(a.sigma, b.sigma, atol=1e-12)

    def test_nonconvex_input_rejected(self):
        P = np.array([[1.0, 0.0], [0.0, 1.0], [0.2, 0.2], [0.0, -1.0]])
        with pytest.raises(NotConvex):
            step_lagrangian(PlaneCurve(P=P, sigma=np.zeros(4)), 1e-3)


class TestRun:
    def test_shrinking_circle_tracks_exponential(self):
        traj = run_lagrangian_flow(circle_curve(256, 1.0), -1.0,
                                   FlowConfig(t_end=1.0, record_every=10))
        assert traj.termination.kind == "HorizonReached"
        final = traj.snapshots[-1]
        np.testing.assert_allclose(radii(final), math.exp(-1.0), atol=1e-4)

    def test_zero_speed_circle_expands(self):
        traj = run_lagrangian_flow(circle_curve(192, 1.0), 0.0,
                                   FlowConfig(t_end=1.0, record_every=20))
        L = polygon_length(traj.snapshots[-1].P)
        assert L > 2 * math.pi

    def test_normal_flow_keeps_tangential_velocity_tiny(self):
        traj = run_lagrangian_flow(ellipse_curve(128, 1.5, 1.0), 1.0,
                                   FlowConfig(t_end=1.0, record_every=10))
        for snap in traj.snapshots:
            cap = 1e-6 * max(np.max(np.abs(snap.sigma)), 1e-30)
            assert tangential_velocity_max(snap) <= cap

    def test_vertex_count_survives_resampling(self):
        traj = run_lagrangian_flow(ellipse_curve(96, 1.3, 0.9), -0.3,
                                   FlowConfig(t_end=0.6, record_every=25))
        assert all(s.M == 96 for s in traj.snapshots)
        # periodic resampling keeps vertex clustering bounded over the run
        # (edges drift apart between resamples but never run away)
        for snap in traj.snapshots:
            e = np.hypot(*(np.roll(snap.P, -1, axis=0) - snap.P).T)
            assert np.max(e) / np.min(e) < 1.5

    def test_per_vertex_speed_accepted(self):
        c = circle_curve(128, 1.0)
        f = -0.5 + 0.05 * np.cos(np.linspace(0, 2 * np.pi, 128, endpoint=False))
        traj = run_lagrangian_flow(c, f, FlowConfig(t_end=0.3, record_every=50))
        assert traj.termination.kind == "HorizonReached"


def test_cross_solver_hausdorff_on_ellipse():
    # the module's core oracle: two independent solvers, same flow
    t_end = 0.5
    s0 = ellipse_support(AngleGrid(128), 2.0, 1.0, speed=0.5)
    support_traj = run_support_flow(s0.S, s0.V,
                                    FlowConfig(N=128, t_end=t_end,
                                               record_every=1000))
    lag_traj = run_lagrangian_flow(ellipse_curve(256, 2.0, 1.0, speed=0.5), 0.5,
                                   FlowConfig(t_end=t_end, record_every=1000))
    assert support_traj.termination.kind == "HorizonReached"
    assert lag_traj.termination.kind == "HorizonReached"
    P = support_to_curve(support_traj.snapshots[-1]).P
    Q = lag_traj.snapshots[-1].P
    assert polygon_hausdorff(P, Q) <= 1e-3
