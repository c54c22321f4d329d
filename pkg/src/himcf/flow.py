"""Support-function evolution of convex plane curves.

The flow in normal-angle gauge is the quasilinear wave equation

    S_tt = (S_theta_t)^2 / (S_thth + S) + (S_thth + S)
         = k (S_theta_t)^2 + 1/k,          k = 1/(S_thth + S),

integrated as the first-order system S' = V, V' = rhs with classical RK4 and
spectral theta-derivatives.  The principal part has characteristic speeds
|k S_theta_t| +- 1, giving the CFL bound

    dt <= cfl_safety * dtheta / (max |k V_theta| + 1).

cfl_safety is capped at 0.9: with the spectral mode count N/2 the cap lands
on the imaginary-axis stability limit of classical RK4 (0.9*pi ~ 2.83).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import CflViolation, ConvexityLost, InvalidConfig, OutOfDomain
from .grids import TWO_PI, AngleGrid, periodic_derivative
from .report import MonitorReport, margin_record
from .support import DEFAULT_EPS_CONVEX_REL, SupportState, length_from_support

LENGTH_VANISH_REL = 1e-6          # LengthVanished at L <= this * L(0)
DEFAULT_CFL_SAFETY = 0.5
FIXED_DT_CFL_LIMIT = 0.9          # policing bound for user-fixed steps
_BISECT_TOL = 1e-6                # absolute t-resolution of a located violation
_MAX_STEPS = 2_000_000


@dataclass(frozen=True)
class FlowConfig:
    """Solver knobs shared by the support and Lagrangian integrators.

    Exactly one stepping mode is active: fixed dt when dt is given, else
    adaptive CFL stepping with the given (or default) safety factor.
    """

    N: int = 128
    dt: float | None = None
    cfl_safety: float | None = None
    t_end: float = 1.0
    eps_convex: float | None = None     # None: 1e-8 * mean(S0) at run start
    record_every: int = 1

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0.0:
            raise InvalidConfig(f"dt must be positive, got {self.dt}")
        if self.cfl_safety is not None and not (0.0 < self.cfl_safety <= 0.9):
            raise InvalidConfig(
                f"cfl_safety must lie in (0, 0.9], got {self.cfl_safety}")
        if not self.t_end > 0.0:
            raise InvalidConfig(f"t_end must be positive, got {self.t_end}")
        if self.record_every < 1:
            raise InvalidConfig("record_every must be >= 1")

    @property
    def adaptive(self) -> bool:
        return self.dt is None

    @property
    def safety(self) -> float:
        if self.cfl_safety is not None:
            return self.cfl_safety
        return DEFAULT_CFL_SAFETY if self.adaptive else FIXED_DT_CFL_LIMIT


@dataclass(frozen=True)
class Termination:
    kind: str    # HorizonReached | ConvexityLost | LengthVanished | CurvatureBlowup
    t: float
    theta: float | None = None


@dataclass(frozen=True)
class _Violation:
    kind: str
    theta: float | None = None


@dataclass(frozen=True)
class FlowTrajectory:
    snapshots: tuple            # SupportState or PlaneCurve, time-ordered
    termination: Termination
    monitor: MonitorReport

    def __post_init__(self):
        times = [s.t for s in self.snapshots]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise InvalidConfig("snapshot times must be strictly increasing")

    @property
    def times(self) -> np.ndarray:
        return np.array([s.t for s in self.snapshots])

    @property
    def is_support(self) -> bool:
        return isinstance(self.snapshots[0], SupportState)

    def snapshot_at(self, t: float, tol: float = 1e-9):
        times = self.times
        i = int(np.argmin(np.abs(times - t)))
        if abs(times[i] - t) > tol:
            raise OutOfDomain(
                f"no snapshot at t = {t}; nearest recorded time is {times[i]}")
        return self.snapshots[i]


def support_rhs(s: SupportState, eps_convex: float | None = None) -> np.ndarray:
    """Acceleration a = (V_theta)^2/(S''+S) + (S''+S)."""
    eps = s.default_eps_convex() if eps_convex is None else eps_convex
    rho = periodic_derivative(s.S, 2) + s.S
    if np.min(rho) <= eps:
        j = int(np.argmin(rho))
        raise ConvexityLost(
            f"S''+S = {rho[j]:.3e} <= {eps:.3e}", t=s.t,
            theta=float(s.grid.theta[j]))
    V_th = periodic_derivative(s.V, 1)
    return V_th**2 / rho + rho


def cfl_bound(s: SupportState, eps_convex: float | None = None) -> float:
    """Largest stable dt (before safety factor) at the current state."""
    eps = s.default_eps_convex() if eps_convex is None else eps_convex
    rho = periodic_derivative(s.S, 2) + s.S
    k = 1.0 / np.maximum(rho, max(eps, 1e-300))
    V_th = periodic_derivative(s.V, 1)
    speed = float(np.max(np.abs(k * V_th))) + 1.0
    return s.grid.dtheta / speed


def _stage_rhs(S, V):
    # Stages only guard against sign loss; the eps ceiling is enforced on
    # completed candidate states, where the violation can be classified.
    rho = periodic_derivative(S, 2) + S
    if np.min(rho) <= 0.0:
        raise ConvexityLost(f"S''+S = {np.min(rho):.3e} <= 0")
    V_th = periodic_derivative(V, 1)
    return V, V_th**2 / rho + rho


def step_support(s: SupportState, dt: float, eps_convex: float | None = None,
                 *, enforce_cfl: bool = True,
                 cfl_safety: float = FIXED_DT_CFL_LIMIT) -> SupportState:
    """One classical 4th-order step of S' = V, V' = support_rhs."""
    if not dt > 0.0:
        raise InvalidConfig(f"dt must be positive, got {dt}")
    eps = s.default_eps_convex() if eps_convex is None else eps_convex
    if enforce_cfl:
        bound = cfl_safety * cfl_bound(s, eps)
        if dt > bound * (1.0 + 1e-12):
            raise CflViolation(
                f"dt = {dt:.3e} exceeds CFL bound {bound:.3e} at t = {s.t}")
    S, V = s.S, s.V
    k1S, k1V = _stage_rhs(S, V)
    k2S, k2V = _stage_rhs(S + 0.5 * dt * k1S, V + 0.5 * dt * k1V)
    k3S, k3V = _stage_rhs(S + 0.5 * dt * k2S, V + 0.5 * dt * k2V)
    k4S, k4V = _stage_rhs(S + dt * k3S, V + dt * k3V)
    S_new = S + dt / 6.0 * (k1S + 2.0 * k2S + 2.0 * k3S + k4S)
    V_new = V + dt / 6.0 * (k1V + 2.0 * k2V + 2.0 * k3V + k4V)
    return SupportState(grid=s.grid, S=S_new, V=V_new, t=s.t + dt, center=s.center)


def validate_support_state(state: SupportState, eps: float, L0: float) -> _Violation | None:
    """First degeneracy of a candidate state, or None if admissible.

    LengthVanished is tested first (in a collapse it is crossed while the
    state is still convex); a sign loss of S''+S is ConvexityLost; a still
    positive S''+S at or below eps means k >= 1/eps, CurvatureBlowup.
    """
    if not (np.all(np.isfinite(state.S)) and np.all(np.isfinite(state.V))):
        return _Violation("ConvexityLost")
    if length_from_support(state) <= LENGTH_VANISH_REL * L0:
        return _Violation("LengthVanished")
    rho = periodic_derivative(state.S, 2) + state.S
    m = float(np.min(rho))
    if m <= eps:
        j = int(np.argmin(rho))
        theta_j = float(state.grid.theta[j])
        kind = "ConvexityLost" if m <= 0.0 else "CurvatureBlowup"
        return _Violation(kind, theta=theta_j)
    return None


def bisect_to_violation(state, dt, first_bad: _Violation, attempt,
                        tol: float = _BISECT_TOL):
    """Shrink a violating step to the admissibility boundary.

    attempt(state, h) -> (candidate | None, violation | None).  Returns the
    last valid sub-stepped state (None if even tiny steps fail), the boundary
    violation, and its time.
    """
    lo, hi = 0.0, dt
    good = None
    bad = first_bad
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        cand, v = attempt(state, mid)
        if v is None:
            lo = mid
            good = cand
        else:
            hi = mid
            bad = v
    return good, bad, state.t + 0.5 * (lo + hi)


def run_support_flow(S0: np.ndarray, V0: np.ndarray, cfg: FlowConfig) -> FlowTrajectory:
    """Integrate the support-PDE IVP S(theta,0) = S0, S_t(theta,0) = V0.

    Records a snapshot every record_every accepted steps plus the final
    state.  Termination is HorizonReached at t_end, or the first of
    ConvexityLost / CurvatureBlowup / LengthVanished with the violation time
    located by step bisection so the recorded horizon is sharp.
    """
    S0 = np.asarray(S0, dtype=float)
    V0 = np.asarray(V0, dtype=float)
    grid = AngleGrid(S0.size)
    if grid.N != cfg.N:
        raise InvalidConfig(f"config N = {cfg.N} but data has {grid.N} samples")
    state = SupportState(grid=grid, S=S0, V=V0, t=0.0)
    eps = cfg.eps_convex
    if eps is None:
        eps = DEFAULT_EPS_CONVEX_REL * float(np.mean(state.S))
    L0 = length_from_support(state)
    if validate_support_state(state, eps, L0) is not None:
        raise ConvexityLost("initial data is not strictly convex", t=0.0)

    def attempt(st, h):
        try:
            cand = step_support(st, h, eps, enforce_cfl=False)
        except ConvexityLost:
            return None, _Violation("ConvexityLost")
        return cand, validate_support_state(cand, eps, L0)

    snapshots = [state]
    termination = None
    cfl_margin = math.inf
    steps = 0
    while True:
        if state.t >= cfg.t_end - 1e-12:
            termination = Termination("HorizonReached", t=state.t)
            break
        if steps >= _MAX_STEPS:
            raise InvalidConfig("step budget exhausted before t_end")

        bound = cfl_bound(state, eps)
        if cfg.adaptive:
            dt = min(cfg.safety * bound, cfg.t_end - state.t)
        else:
            dt = min(cfg.dt, cfg.t_end - state.t)
            if dt > cfg.safety * bound * (1.0 + 1e-12):
                raise CflViolation(
                    f"fixed dt = {cfg.dt:.3e} exceeds CFL bound "
                    f"{cfg.safety * bound:.3e} at t = {state.t:.6f}")
        cfl_margin = min(cfl_margin, cfg.safety * bound - dt)

        trial, violation = attempt(state, dt)
        if violation is None:
            state = trial
            steps += 1
            if steps % cfg.record_every == 0:
                snapshots.append(state)
            continue

        good, boundary, t_bad = bisect_to_violation(state, dt, violation, attempt)
        if good is not None:
            state = good
        termination = Termination(boundary.kind, t=t_bad, theta=boundary.theta)
        break

    if snapshots[-1].t < state.t - 1e-15:
        snapshots.append(state)

    final_margin = float(
        np.min(periodic_derivative(state.S, 2) + state.S) - eps)
    monitor = MonitorReport(records=(
        margin_record("run-convexity-floor", final_margin, tolerance=0.0,
                      note="final S''+S margin above the configured floor"),
        margin_record("run-cfl-compliance",
                      float(cfl_margin) if math.isfinite(cfl_margin) else 0.0,
                      tolerance=1e-15,
                      note="min over steps of (allowed dt - taken dt)"),
    ))
    return FlowTrajectory(snapshots=tuple(snapshots), termination=termination,
                          monitor=monitor)


def sigma_field(traj: FlowTrajectory, t: float, grid: AngleGrid | None = None) -> np.ndarray:
    """Normal-speed samples sigma~(theta, t) at a recorded time.

    Support trajectories return the stored V.  Lagrangian trajectories
    resample per-vertex sigma to the target grid through each vertex's
    outward-normal angle (periodic cubic interpolation).
    """
    snap = traj.snapshot_at(t)
    if isinstance(snap, SupportState):
        if grid is not None and grid.N != snap.grid.N:
            raise InvalidConfig("grid mismatch against the recorded state")
        return np.array(snap.V)
    if grid is None:
        raise InvalidConfig("a target AngleGrid is required for Lagrangian trajectories")
    from .curves import normal_angles

    th = normal_angles(snap.P)
    th0 = th - th[0]                       # increasing, covers [0, 2*pi)
    values = np.asarray(snap.sigma)
    spline = CubicSpline(np.concatenate([th0, [TWO_PI]]),
                         np.concatenate([values, values[:1]]),
                         bc_type="periodic")
    return spline(np.mod(grid.theta - th[0], TWO_PI))
