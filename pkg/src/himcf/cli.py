"""Command-line driver.

Four subcommands: `radial` (symmetric reductions against their closed forms),
`curve` (support-PDE and/or Lagrangian runs of a preset curve), `containment`
(ordered pairs on a shared recording schedule), and `verify` (the invariant
suites).  Every run writes flat files into --out-dir; identical configuration
produces byte-identical output.

Exit codes: 0 the run reached a classified termination (convexity loss is a
normal outcome, not an error); 1 configuration problem; 2 a monitored
invariant failed or an internal bracket was violated.  Nonzero exits put a
one-object JSON description of the error on stderr.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .curves import discrete_curvature, discrete_tangent_normal, normal_angles, polygon_hausdorff, polygon_length
from .errors import (
    CflViolation,
    ConvexityLost,
    HimcfError,
    InsufficientData,
    InvalidConfig,
    InvalidForcing,
    InvalidInitialRadius,
    NotConvex,
    OriginNotInterior,
    OutOfDomain,
    PreconditionFailed,
)
from .flow import FlowConfig, FlowTrajectory, run_support_flow
from .grids import TWO_PI, AngleGrid
from .lagrangian import run_lagrangian_flow, tangential_velocity_max
from .monitors import (
    check_containment,
    check_length_identities,
    check_simons_sphere,
    classify_outcome,
    curvature_evolution_residual,
    mean_curvature_acceleration_residual,
    metric_acceleration_residual,
    outcome_inputs_from_trajectory,
)
from .output import csv_text, json_text, svg_text, write_text_atomic
from .presets import (
    circle_curve,
    circle_support,
    cosine_series,
    ellipse_curve,
    ellipse_support,
    fourier_support,
)
from .radial import (
    CIRCLE,
    CYLINDER,
    RadialGeometry,
    classify_regime,
    closed_form_radius,
    forced_radial,
    integrate_radial_ode,
    sphere_geometry,
)
from .report import CheckRecord, MonitorReport, margin_record, residual_record
from .support import SupportState, curvature_from_support, length_from_support, support_to_curve

_CONFIG_ERRORS = (
    InvalidConfig,
    InvalidInitialRadius,
    InvalidForcing,
    NotConvex,
    OriginNotInterior,
    ConvexityLost,
    PreconditionFailed,
    InsufficientData,
    OutOfDomain,
    CflViolation,
)


class _Parser(argparse.ArgumentParser):
    # Argparse wants to exit(2) on usage problems; route them through the
    # config-error path so the exit-code contract holds.
    def error(self, message):
        raise InvalidConfig(message)


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InvalidConfig(f"cannot read config file: {e}")
    except json.JSONDecodeError as e:
        raise InvalidConfig(f"config file is not valid JSON: {e}")
    if not isinstance(obj, dict):
        raise InvalidConfig("config file must hold a JSON object")
    return obj


def _opt(args, config: dict, key: str, default=None):
    value = getattr(args, key, None)
    if value is not None:
        return value
    return config.get(key, default)


def _parse_speed(raw):
    """A speed is a constant or a comma list of cosine coefficients."""
    if isinstance(raw, (int, float)):
        return float(raw)
    if isinstance(raw, (list, tuple)):
        return [float(v) for v in raw]
    text = str(raw)
    if "," in text:
        return [float(part) for part in text.split(",")]
    return float(text)


def _parse_coeffs(raw) -> list[float]:
    if isinstance(raw, (list, tuple)):
        return [float(v) for v in raw]
    try:
        return [float(part) for part in str(raw).split(",")]
    except ValueError:
        raise InvalidConfig(f"cannot parse coefficient list {raw!r}")


def _speed_on_grid(speed, theta: np.ndarray) -> np.ndarray:
    if isinstance(speed, list):
        return cosine_series(speed, theta)
    return np.full_like(theta, float(speed))


def _emit_error(exc: BaseException) -> None:
    sys.stderr.write(json_text({"error": type(exc).__name__, "message": str(exc)}))


def _records_json(records) -> list[dict]:
    return [r.as_dict() for r in sorted(records, key=lambda r: r.name)]


# ---------------------------------------------------------------- radial

def _radial_geometry(kind: str, n) -> RadialGeometry:
    if kind == "sphere":
        return sphere_geometry(int(n) if n is not None else 2)
    if kind == "cylinder":
        return CYLINDER
    if kind == "circle":
        return CIRCLE
    raise InvalidConfig(f"unknown geometry {kind!r}")


def _effective_closed_form(stiffness: float, r0: float, r1: float,
                           times: np.ndarray) -> np.ndarray:
    """Constant-coefficient solution of r'' = stiffness * r (stiffness > 0)."""
    lam = math.sqrt(stiffness)
    c_plus = 0.5 * (r0 + r1 / lam)
    c_minus = 0.5 * (r0 - r1 / lam)
    return c_plus * np.exp(lam * times) + c_minus * np.exp(-lam * times)


def cmd_radial(args) -> int:
    config = _load_config(args.config)
    out_dir = _opt(args, config, "out_dir", "out")
    geometry = _radial_geometry(_opt(args, config, "geometry", "sphere"),
                                _opt(args, config, "n"))
    r0 = float(_opt(args, config, "r0", 1.0))
    r1 = float(_opt(args, config, "r1", 0.0))
    dt = float(_opt(args, config, "dt", 1e-3))
    t_end = float(_opt(args, config, "t_end", 2.0))

    forcing = config.get("forcing")
    if args.forcing_constant is not None:
        forcing = {"kind": "constant", "value": float(args.forcing_constant)}
    if forcing is not None and forcing.get("kind") in (None, "none"):
        forcing = None

    records: list[CheckRecord] = []
    flags: list[str] = []
    summary: dict = {
        "kind": "radial",
        "geometry": {"kind": geometry.kind, "n": geometry.n},
        "r0": r0, "r1": r1, "dt": dt, "t_end": t_end,
        "forcing": forcing,
    }

    if forcing is None:
        regime = classify_regime(geometry, r0, r1)
        traj = integrate_radial_ode(geometry, r0, r1, dt, t_end)
        closed = closed_form_radius(geometry, r0, r1, traj.times)
        err = np.abs(traj.r - closed)
        records.append(residual_record("radial/closed-form-agreement",
                                       float(np.max(err)), tolerance=1e-8 * r0))
        flags.extend(regime.flags)
        summary["regime"] = {
            "regime": regime.regime, "d_plus": regime.d_plus,
            "d_minus": regime.d_minus, "T_max": regime.T_max,
            "label": regime.label,
        }
        summary["extinction_time"] = traj.extinction_time
        rows = [(t, rc, rn, e)
                for t, rc, rn, e in zip(traj.times, closed, traj.r, err)]
        header = ["t", "r_closed", "r_numeric", "abs_err"]
    else:
        kind = forcing.get("kind")
        if kind == "constant":
            value = float(forcing["value"])
            func = lambda t: value
            c_lo = c_hi = value
        elif kind == "table":
            ts = np.asarray(forcing.get("times", ()), dtype=float)
            vs = np.asarray(forcing.get("values", ()), dtype=float)
            if ts.size < 2 or ts.size != vs.size or np.any(np.diff(ts) <= 0):
                raise InvalidForcing("forcing table needs increasing times and matching values")
            func = lambda t: float(np.interp(t, ts, vs))
            c_lo = float(np.min(vs))
            c_hi = float(np.max(vs))
        else:
            raise InvalidForcing(f"unknown forcing kind {kind!r}")

        report = forced_radial(geometry, func, c_lo, c_hi, r0, r1, dt, t_end)
        records.append(margin_record("radial/bracket-lower", report.lower_margin,
                                     tolerance=report.tolerance))
        records.append(margin_record("radial/bracket-upper", report.upper_margin,
                                     tolerance=report.tolerance))
        effective = geometry.stiffness + c_lo
        if kind == "constant" and effective > 0.0:
            closed = _effective_closed_form(effective, r0, r1, report.times)
            err = np.abs(report.r - closed)
            records.append(residual_record("radial/closed-form-agreement",
                                           float(np.max(err)), tolerance=1e-8 * r0))
        else:
            closed = np.full_like(report.times, math.nan)
            err = np.full_like(report.times, math.nan)
        summary["regime"] = None
        summary["extinction_time"] = None
        rows = [(t, rc, rn, e, lo, hi)
                for t, rc, rn, e, lo, hi in zip(report.times, closed, report.r,
                                                err, report.r_lo, report.r_hi)]
        header = ["t", "r_closed", "r_numeric", "abs_err", "r_lo", "r_hi"]

    monitor = MonitorReport(records=tuple(records))
    flags.extend(monitor.flags)
    summary["monitors"] = _records_json(records)
    summary["flags"] = sorted(flags)
    summary["passed"] = monitor.passed

    write_text_atomic(os.path.join(out_dir, "radial.csv"), csv_text(header, rows))
    write_text_atomic(os.path.join(out_dir, "radial_summary.json"), json_text(summary))
    regime_text = summary["regime"]["regime"] if summary.get("regime") else "forced"
    print(f"radial: {regime_text}, {len(rows)} samples, "
          f"{'pass' if summary['passed'] else 'FAIL'}")
    return 0 if summary["passed"] else 2


# ----------------------------------------------------------------- curve

def _initial_support(preset: str, args, config, grid: AngleGrid,
                     speed) -> SupportState:
    v = _speed_on_grid(speed, grid.theta)
    if preset == "circle":
        return circle_support(grid, float(_opt(args, config, "r0", 1.0)), v)
    if preset == "ellipse":
        return ellipse_support(grid, float(_opt(args, config, "a", 2.0)),
                               float(_opt(args, config, "b", 1.0)), v)
    if preset == "fourier":
        coeffs = _opt(args, config, "coeffs")
        if coeffs is None:
            raise InvalidConfig("fourier preset needs --coeffs")
        return fourier_support(grid, _parse_coeffs(coeffs), v)
    raise InvalidConfig(f"unknown preset {preset!r}")


def _initial_curve(preset: str, args, config, M: int, speed):
    if preset == "circle":
        r0 = float(_opt(args, config, "r0", 1.0))
        if isinstance(speed, list):
            alpha = TWO_PI * np.arange(M) / M
            return circle_curve(M, r0, cosine_series(speed, alpha))
        return circle_curve(M, r0, speed)
    if preset == "ellipse":
        if isinstance(speed, list):
            raise InvalidConfig("ellipse vertices take a constant speed")
        return ellipse_curve(M, float(_opt(args, config, "a", 2.0)),
                             float(_opt(args, config, "b", 1.0)), speed)
    if preset == "fourier":
        coeffs = _opt(args, config, "coeffs")
        if coeffs is None:
            raise InvalidConfig("fourier preset needs --coeffs")
        grid = AngleGrid(M)
        state = fourier_support(grid, _parse_coeffs(coeffs),
                                _speed_on_grid(speed, grid.theta))
        return support_to_curve(state)
    raise InvalidConfig(f"unknown preset {preset!r}")


def _outline_indices(count: int, limit: int = 13) -> list[int]:
    if count <= limit:
        return list(range(count))
    return sorted(set(np.linspace(0, count - 1, limit).round().astype(int).tolist()))


def _support_csv_rows(traj: FlowTrajectory):
    for snap in traj.snapshots:
        k = curvature_from_support(snap)
        theta = snap.grid.theta
        for j in range(snap.grid.N):
            yield (snap.t, theta[j], snap.S[j], snap.V[j], k[j])


def _curve_csv_rows(traj: FlowTrajectory):
    for snap in traj.snapshots:
        _, nu = discrete_tangent_normal(snap.P)
        th = np.mod(normal_angles(snap.P), TWO_PI)
        S = np.sum(snap.P * nu, axis=1)
        k = discrete_curvature(snap.P)
        for j in range(snap.P.shape[0]):
            yield (snap.t, th[j], S[j], snap.sigma[j], k[j])


def _final_polygon(traj: FlowTrajectory) -> np.ndarray:
    snap = traj.snapshots[-1]
    if isinstance(snap, SupportState):
        return support_to_curve(snap).P
    return snap.P


def cmd_curve(args) -> int:
    config = _load_config(args.config)
    out_dir = _opt(args, config, "out_dir", "out")
    preset = _opt(args, config, "preset", "circle")
    N = int(_opt(args, config, "N", 128))
    M = int(_opt(args, config, "vertices", 256))
    speed = _parse_speed(_opt(args, config, "speed", -1.0))
    solver = _opt(args, config, "solver", "support")
    if getattr(args, "both_solvers", False):
        solver = "both"
    if solver not in ("support", "lagrangian", "both"):
        raise InvalidConfig(f"unknown solver {solver!r}")

    dt = _opt(args, config, "dt")
    cfg = FlowConfig(
        N=N,
        dt=float(dt) if dt is not None else None,
        cfl_safety=_opt(args, config, "cfl_safety"),
        t_end=float(_opt(args, config, "t_end", 1.0)),
        record_every=int(_opt(args, config, "record_every", 1)),
    )

    support_traj = None
    lagrangian_traj = None
    if solver in ("support", "both"):
        state0 = _initial_support(preset, args, config, AngleGrid(N), speed)
        support_traj = run_support_flow(state0.S, state0.V, cfg)
    if solver in ("lagrangian", "both"):
        curve0 = _initial_curve(preset, args, config, M, speed)
        lagrangian_traj = run_lagrangian_flow(curve0, curve0.sigma, cfg)

    primary = support_traj if support_traj is not None else lagrangian_traj
    outcome = classify_outcome(primary, outcome_inputs_from_trajectory(primary))

    records = list(primary.monitor.records)
    if solver == "both":
        records.extend(
            dataclasses.replace(r, name="lagrangian-" + r.name)
            for r in lagrangian_traj.monitor.records)

    hausdorff = None
    if solver == "both":
        both_full = (support_traj.termination.kind == "HorizonReached"
                     and lagrangian_traj.termination.kind == "HorizonReached")
        if both_full:
            hausdorff = polygon_hausdorff(_final_polygon(support_traj),
                                          _final_polygon(lagrangian_traj))

    if primary.is_support:
        rows = _support_csv_rows(primary)
    else:
        rows = _curve_csv_rows(primary)
    write_text_atomic(os.path.join(out_dir, "curve.csv"),
                      csv_text(["t", "theta", "S", "V", "k"], rows))

    outlines = []
    for traj in (support_traj, lagrangian_traj):
        if traj is None:
            continue
        for i in _outline_indices(len(traj.snapshots)):
            snap = traj.snapshots[i]
            outlines.append(support_to_curve(snap).P
                            if isinstance(snap, SupportState) else snap.P)
    write_text_atomic(os.path.join(out_dir, "curve.svg"), svg_text(outlines))

    final = primary.snapshots[-1]
    if isinstance(final, SupportState):
        final_L = length_from_support(final)
        final_k = curvature_from_support(final)
    else:
        final_L = polygon_length(final.P)
        final_k = discrete_curvature(final.P)

    monitor = MonitorReport(records=tuple(records))
    summary = {
        "kind": "curve",
        "preset": preset,
        "solver": solver,
        "N": N,
        "vertices": M if solver != "support" else None,
        "t_end": cfg.t_end,
        "dt": cfg.dt,
        "record_every": cfg.record_every,
        "termination": {
            "kind": primary.termination.kind,
            "t": primary.termination.t,
            "theta": primary.termination.theta,
        },
        "outcome": {
            "predicted": outcome.predicted,
            "observed_termination": outcome.observed_termination,
            "observed_t": outcome.observed_t,
            "agreement": outcome.agreement,
            "T_star": outcome.T_star,
            "sub_label": outcome.sub_label,
            "note": outcome.note,
        },
        "final_length": final_L,
        "final_k_min": float(np.min(final_k)),
        "final_k_max": float(np.max(final_k)),
        "cross_solver_hausdorff": hausdorff,
        "monitors": _records_json(records),
        "flags": sorted(monitor.flags),
        "passed": monitor.passed,
    }
    write_text_atomic(os.path.join(out_dir, "curve_summary.json"), json_text(summary))
    print(f"curve: {primary.termination.kind} at t = {primary.termination.t:.6f}, "
          f"outcome {outcome.predicted}"
          + (f", hausdorff {hausdorff:.2e}" if hausdorff is not None else ""))
    return 0 if summary["passed"] else 2


# ----------------------------------------------------------- containment

# Shrinking runs use an explicit curvature ceiling (k >= 1/eps_convex is
# blowup): with the default microscopic floor, the fixed-dt CFL policing
# would fire before the degeneration is ever reached.
_SCENARIOS = {
    "circle-in-circle": {
        "outer": {"preset": "circle", "r0": 2.0, "speed": 0.5},
        "inner": {"preset": "circle", "r0": 1.0, "speed": 0.3},
        "t_end": 1.0, "dt": 1e-3, "record_every": 10, "eps_convex": None,
    },
    "ellipse-in-circle": {
        "outer": {"preset": "circle", "r0": 2.0, "speed": -1.5},
        "inner": {"preset": "ellipse", "a": 1.2, "b": 0.8, "speed": -1.5},
        "t_end": 1.0, "dt": 5e-4, "record_every": 20, "eps_convex": 2e-2,
    },
}


def _support_from_spec(spec: dict, grid: AngleGrid) -> SupportState:
    if not isinstance(spec, dict) or "preset" not in spec:
        raise InvalidConfig("curve spec must be an object with a 'preset' key")
    speed = _parse_speed(spec.get("speed", 0.0))
    v = _speed_on_grid(speed, grid.theta)
    preset = spec["preset"]
    if preset == "circle":
        return circle_support(grid, float(spec.get("r0", 1.0)), v)
    if preset == "ellipse":
        return ellipse_support(grid, float(spec.get("a", 2.0)),
                               float(spec.get("b", 1.0)), v)
    if preset == "fourier":
        return fourier_support(grid, _parse_coeffs(spec.get("coeffs", "1")), v)
    raise InvalidConfig(f"unknown preset {preset!r}")


def _run_containment_pair(outer_spec: dict, inner_spec: dict, cfg: FlowConfig):
    grid = AngleGrid(cfg.N)
    outer0 = _support_from_spec(outer_spec, grid)
    inner0 = _support_from_spec(inner_spec, grid)
    outer = run_support_flow(outer0.S, outer0.V, cfg)
    inner = run_support_flow(inner0.S, inner0.V, cfg)
    return outer, inner, check_containment(outer, inner)


def cmd_containment(args) -> int:
    config = _load_config(args.config)
    out_dir = _opt(args, config, "out_dir", "out")
    scenario = _opt(args, config, "scenario")
    if scenario is not None:
        if scenario not in _SCENARIOS:
            raise InvalidConfig(
                f"unknown scenario {scenario!r}; valid: {sorted(_SCENARIOS)}")
        preset = _SCENARIOS[scenario]
    elif "outer" in config and "inner" in config:
        preset = {"outer": config["outer"], "inner": config["inner"],
                  "t_end": 1.0, "dt": 1e-3, "record_every": 10,
                  "eps_convex": None}
    else:
        scenario = "circle-in-circle"
        preset = _SCENARIOS[scenario]
    outer_spec = preset["outer"]
    inner_spec = preset["inner"]

    # Fixed steps keep the two recording schedules aligned for comparison.
    eps = _opt(args, config, "eps_convex", preset["eps_convex"])
    cfg = FlowConfig(
        N=int(_opt(args, config, "N", 128)),
        dt=float(_opt(args, config, "dt", preset["dt"])),
        t_end=float(_opt(args, config, "t_end", preset["t_end"])),
        eps_convex=float(eps) if eps is not None else None,
        record_every=int(_opt(args, config, "record_every", preset["record_every"])),
    )
    outer, inner, record = _run_containment_pair(outer_spec, inner_spec, cfg)

    rows = []
    for a, b in zip(outer.snapshots, inner.snapshots):
        if abs(a.t - b.t) > 1e-9:
            break
        rows.append((a.t, float(np.min(a.S - b.S))))
    write_text_atomic(os.path.join(out_dir, "containment.csv"),
                      csv_text(["t", "min_gap"], rows))

    summary = {
        "kind": "containment",
        "scenario": scenario,
        "outer": outer_spec,
        "inner": inner_spec,
        "N": cfg.N, "dt": cfg.dt, "t_end": cfg.t_end,
        "record_every": cfg.record_every, "eps_convex": cfg.eps_convex,
        "outer_termination": {"kind": outer.termination.kind, "t": outer.termination.t},
        "inner_termination": {"kind": inner.termination.kind, "t": inner.termination.t},
        "monitors": _records_json([record]),
        "flags": [],
        "passed": record.passed,
    }
    write_text_atomic(os.path.join(out_dir, "containment_summary.json"),
                      json_text(summary))
    print(f"containment: margin {record.worst:.3e} (tolerance {record.tolerance:.3e}), "
          f"{'pass' if record.passed else 'FAIL'}")
    return 0 if record.passed else 2


# ---------------------------------------------------------------- verify

def _suite_radial() -> list[CheckRecord]:
    worst = 0.0
    for n in (2, 3):
        geom = sphere_geometry(n)
        for r0 in (1.0, 2.0):
            for r1 in (-1.0, 0.0, 1.0):
                regime = classify_regime(geom, r0, r1)
                t_end = 2.0 if regime.T_max is None else min(2.0, 0.9 * regime.T_max)
                traj = integrate_radial_ode(geom, r0, r1, 1e-3, t_end)
                closed = closed_form_radius(geom, r0, r1, traj.times)
                worst = max(worst, float(np.max(np.abs(traj.r - closed))) / r0)

    half_log3 = 0.5 * math.log(3.0)
    horizon = classify_regime(CIRCLE, 1.0, -2.0)
    horizon_err = abs(horizon.T_max - half_log3)
    labels_ok = (
        horizon.regime == "ConvergesToPointFiniteTime"
        and classify_regime(CIRCLE, 1.0, -1.0).regime == "ConvergesToPointInfiniteTime"
        and classify_regime(CIRCLE, 1.0, 0.0).regime == "ExpandsForever"
        and bool(classify_regime(CYLINDER, 1.0, -2.0).flags)
    )
    return [
        residual_record("radial/closed-form-agreement", worst, tolerance=1e-8),
        residual_record("radial/circle-horizon", horizon_err, tolerance=1e-9),
        margin_record("radial/regime-labels", 0.0 if labels_ok else -1.0,
                      tolerance=0.0),
    ]


def _suite_sphere_identities() -> list[CheckRecord]:
    worst_closed = 0.0
    for n in (2, 3, 5):
        for r0 in (0.5, 1.0, 2.0):
            for r1 in (-0.5, 0.0, 1.0):
                for t in (0.0, 0.5, 1.0):
                    try:
                        a = metric_acceleration_residual(n, r0, r1, t)
                        b = mean_curvature_acceleration_residual(n, r0, r1, t)
                    except OutOfDomain:
                        continue
                    worst_closed = max(worst_closed, a, b)

    # The second central difference at dt = 1e-4 is only meaningful on
    # O(1)-scale solutions: near extinction the truncation term blows up
    # with H, and large radii promote roundoff in d^2(r^2)/dt^2.  The grid
    # stays where the check conditions well.
    worst_fd = 0.0
    for n in (2, 3, 5):
        geom = sphere_geometry(n)
        for r0 in (0.8, 1.0, 1.25):
            for r1 in (-0.3, 0.0, 0.5):
                for t in (0.0, 0.3, 0.6):
                    regime = classify_regime(geom, r0, r1)
                    if regime.T_max is not None and t >= regime.T_max:
                        continue
                    if not 0.5 <= closed_form_radius(geom, r0, r1, t) <= 2.0:
                        continue
                    af = metric_acceleration_residual(
                        n, r0, r1, t, method="finite_difference")
                    bf = mean_curvature_acceleration_residual(
                        n, r0, r1, t, method="finite_difference")
                    worst_fd = max(worst_fd, af, bf)

    worst_simons = max(check_simons_sphere(n, r)
                       for n in (2, 3, 5) for r in (0.5, 1.0, 2.0))
    return [
        residual_record("sphere-identities/closed-form", worst_closed,
                        tolerance=1e-10),
        residual_record("sphere-identities/finite-difference", worst_fd,
                        tolerance=1e-6),
        residual_record("sphere-identities/simons-contraction", worst_simons,
                        tolerance=1e-12),
    ]


def _suite_containment() -> list[CheckRecord]:
    out = []
    for name, scenario in sorted(_SCENARIOS.items()):
        cfg = FlowConfig(N=128, dt=scenario["dt"], t_end=scenario["t_end"],
                         eps_convex=scenario["eps_convex"],
                         record_every=scenario["record_every"])
        _, _, record = _run_containment_pair(scenario["outer"], scenario["inner"], cfg)
        out.append(dataclasses.replace(record, name=f"containment/{name}"))
    return out


def _suite_length() -> list[CheckRecord]:
    grid = AngleGrid(128)
    circle = circle_support(grid, 1.0, -1.0)
    cfg = FlowConfig(N=128, dt=2.5e-4, t_end=0.05, record_every=2)
    circle_report = check_length_identities(run_support_flow(circle.S, circle.V, cfg))
    first = circle_report.records[0]

    ellipse = ellipse_support(grid, 1.5, 1.0, -0.8)
    cfg = FlowConfig(N=128, dt=1e-3, t_end=0.5, record_every=5)
    ellipse_report = check_length_identities(run_support_flow(ellipse.S, ellipse.V, cfg))
    return [
        # The circle has spatially constant speed, so the first identity is
        # exact and the residual is pure time-differencing error.
        residual_record("length/circle-first-identity", first.worst,
                        tolerance=1e-6, t_worst=first.t_worst),
        dataclasses.replace(ellipse_report.records[0],
                            name="length/ellipse-first-identity"),
        dataclasses.replace(ellipse_report.records[1],
                            name="length/ellipse-second-identity"),
    ]


def _suite_outcomes() -> list[CheckRecord]:
    grid = AngleGrid(128)
    growing = ellipse_support(grid, 1.5, 1.0, 1.0)
    cfg = FlowConfig(N=128, t_end=2.0, record_every=5)
    traj = run_support_flow(growing.S, growing.V, cfg)
    outcome = classify_outcome(traj, outcome_inputs_from_trajectory(traj))
    long_ok = outcome.predicted == "LongTime" and outcome.agreement
    L = np.array([length_from_support(s) for s in traj.snapshots])
    late = L[traj.times >= 0.5 * traj.times[-1]]
    growth_margin = float(np.min(np.diff(late)))

    shrinking = circle_support(grid, 1.0, -2.0)
    traj2 = run_support_flow(shrinking.S, shrinking.V, cfg)
    outcome2 = classify_outcome(traj2, outcome_inputs_from_trajectory(traj2))
    finite_ok = outcome2.predicted == "FiniteTime" and outcome2.agreement
    horizon_margin = outcome2.T_star + 1e-2 - outcome2.observed_t
    return [
        margin_record("outcomes/expanding-agreement", 0.0 if long_ok else -1.0,
                      tolerance=0.0),
        margin_record("outcomes/expanding-length-growth", growth_margin,
                      tolerance=0.0),
        margin_record("outcomes/shrinking-agreement", 0.0 if finite_ok else -1.0,
                      tolerance=0.0),
        margin_record("outcomes/shrinking-horizon-bound", horizon_margin,
                      tolerance=0.0),
    ]


def _suite_normal_flow() -> list[CheckRecord]:
    curve = ellipse_curve(128, 1.5, 1.0, 1.0)
    cfg = FlowConfig(N=128, t_end=1.0, record_every=10)
    traj = run_lagrangian_flow(curve, curve.sigma, cfg)
    worst = max(tangential_velocity_max(s) for s in traj.snapshots)
    scale = max(float(np.max(np.abs(s.sigma))) for s in traj.snapshots)
    return [residual_record("normal-flow/tangential-velocity", worst,
                            tolerance=1e-6 * scale)]


def _suite_curvature_equation() -> list[CheckRecord]:
    grid = AngleGrid(128)
    state = ellipse_support(grid, 1.5, 1.0, -0.5)
    cfg = FlowConfig(N=128, dt=1e-3, t_end=0.3, record_every=10)
    residual = curvature_evolution_residual(run_support_flow(state.S, state.V, cfg))
    return [residual_record("curvature-equation/ellipse-run", residual,
                            tolerance=1e-2)]


def _suite_forced_bracket() -> list[CheckRecord]:
    report = forced_radial(sphere_geometry(2), lambda t: 0.5 * math.sin(t),
                           -0.5, 0.5, 1.0, 0.0, 1e-3, 2.0)
    return [
        margin_record("forced-bracket/lower", report.lower_margin,
                      tolerance=report.tolerance),
        margin_record("forced-bracket/upper", report.upper_margin,
                      tolerance=report.tolerance),
    ]


_SUITES = {
    "radial": _suite_radial,
    "sphere-identities": _suite_sphere_identities,
    "containment": _suite_containment,
    "length": _suite_length,
    "outcomes": _suite_outcomes,
    "normal-flow": _suite_normal_flow,
    "curvature-equation": _suite_curvature_equation,
    "forced-bracket": _suite_forced_bracket,
}


def _thread_count(n_tasks: int) -> int:
    raw = os.environ.get("HIMCF_THREADS")
    if raw is None:
        return max(1, n_tasks)
    try:
        count = int(raw)
    except ValueError:
        raise InvalidConfig(f"HIMCF_THREADS must be an integer, got {raw!r}")
    if count < 1:
        raise InvalidConfig("HIMCF_THREADS must be >= 1")
    return count


def cmd_verify(args) -> int:
    config = _load_config(args.config)
    out_dir = _opt(args, config, "out_dir", "out")
    names = list(args.suites) or sorted(_SUITES)
    unknown = [n for n in names if n not in _SUITES]
    if unknown:
        raise InvalidConfig(
            f"unknown suite(s) {unknown}; valid: {sorted(_SUITES)}")

    with ThreadPoolExecutor(max_workers=_thread_count(len(names))) as pool:
        futures = {name: pool.submit(_SUITES[name]) for name in names}
        records: list[CheckRecord] = []
        for name in names:
            records.extend(futures[name].result())

    records.sort(key=lambda r: r.name)
    monitor = MonitorReport(records=tuple(records))
    summary = {
        "kind": "verify",
        "suites": sorted(names),
        "monitors": _records_json(records),
        "flags": sorted(monitor.flags),
        "passed": monitor.passed,
    }
    write_text_atomic(os.path.join(out_dir, "verify_report.json"), json_text(summary))
    for r in records:
        status = "PASS" if (r.passed or r.flagged) else "FAIL"
        suffix = " [flagged]" if r.flagged else ""
        print(f"{status} {r.name} ({r.kind} {r.worst:.3e}, tolerance "
              f"{r.tolerance:.3e}){suffix}")
    print(f"verify: {'all checks passed' if monitor.passed else 'CHECKS FAILED'}")
    return 0 if monitor.passed else 2


# ------------------------------------------------------------------ main

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="himcf",
                     description="Hyperbolic inverse mean curvature flow toolkit")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(p):
        p.add_argument("--out-dir", dest="out_dir")
        p.add_argument("--config")

    p = sub.add_parser("radial", help="symmetric reductions vs closed forms")
    common(p)
    p.add_argument("--geometry", choices=["sphere", "cylinder", "circle"])
    p.add_argument("--n", type=int)
    p.add_argument("--r0", type=float)
    p.add_argument("--r1", type=float)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--forcing-constant", dest="forcing_constant", type=float)
    p.set_defaults(func=cmd_radial)

    p = sub.add_parser("curve", help="support-PDE / Lagrangian curve flow")
    common(p)
    p.add_argument("--preset", choices=["circle", "ellipse", "fourier"])
    p.add_argument("--r0", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--coeffs")
    p.add_argument("--speed")
    p.add_argument("--solver", choices=["support", "lagrangian", "both"])
    p.add_argument("--both-solvers", dest="both_solvers", action="store_true")
    p.add_argument("--N", dest="N", type=int)
    p.add_argument("--vertices", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--cfl-safety", dest="cfl_safety", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--record-every", dest="record_every", type=int)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("containment", help="ordered pairs stay ordered")
    common(p)
    p.add_argument("--scenario", choices=sorted(_SCENARIOS))
    p.add_argument("--N", dest="N", type=int)
    p.add_argument("--dt", type=float)
    p.add_argument("--t-end", dest="t_end", type=float)
    p.add_argument("--eps-convex", dest="eps_convex", type=float)
    p.add_argument("--record-every", dest="record_every", type=int)
    p.set_defaults(func=cmd_containment)

    p = sub.add_parser("verify", help="run the invariant suites")
    common(p)
    p.add_argument("suites", nargs="*", metavar="suite",
                   help=f"subset of {sorted(_SUITES)} (default: all)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            raise InvalidConfig("a subcommand is required "
                                "(radial | curve | containment | verify)")
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        _emit_error(exc)
        return 1
    except HimcfError as exc:
        _emit_error(exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
