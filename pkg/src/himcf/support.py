"""Support-function states of convex plane curves and the curve conversions.

A strictly convex closed curve is parametrized by its outward normal angle
theta; the support function S(theta) is the distance from the (interior)
origin to the tangent line with normal (cos theta, sin theta).  Key relations:

    boundary point  x = S cos(theta) - S' sin(theta)
                    y = S sin(theta) + S' cos(theta)
    curvature       k = 1/(S'' + S)        (strict convexity: S'' + S > 0)
    length          L = integral of S dtheta   (S'' integrates to zero)
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConvexityLost, NotConvex, OriginNotInterior
from .grids import TWO_PI, AngleGrid, _readonly, periodic_derivative

# Default relative convexity floor: eps = DEFAULT_EPS_CONVEX_REL * mean(S).
DEFAULT_EPS_CONVEX_REL = 1e-8


@dataclass(frozen=True)
class SupportState:
    """Support samples S, velocity samples V = dS/dt, at flow time t.

    center is the point the support values are measured about; it is only
    nonzero for states produced by curve_to_support on input whose origin was
    not interior (the recorded recentering shift).
    """

    grid: AngleGrid
    S: np.ndarray
    V: np.ndarray
    t: float = 0.0
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        object.__setattr__(self, "S", _readonly(self.S))
        object.__setattr__(self, "V", _readonly(self.V))
        if self.S.shape != (self.grid.N,) or self.V.shape != (self.grid.N,):
            raise ValueError("S and V must match the grid size")
        if not (np.all(np.isfinite(self.S)) and np.all(np.isfinite(self.V))):
            raise ValueError("non-finite support state")

    def default_eps_convex(self) -> float:
        return DEFAULT_EPS_CONVEX_REL * float(np.mean(self.S))

    def curvature_denominator(self) -> np.ndarray:
        """S'' + S, the reciprocal curvature in normal-angle gauge."""
        return periodic_derivative(self.S, 2) + self.S

    def with_velocity(self, V: np.ndarray) -> "SupportState":
        return replace(self, V=V)


@dataclass(frozen=True)
class PlaneCurve:
    """Closed discrete convex curve: vertex positions and normal speeds.

    Vertices are ordered counterclockwise; index arithmetic is modulo the
    vertex count.
    """

    P: np.ndarray       # (M, 2) vertex positions
    sigma: np.ndarray   # (M,) normal velocity per vertex
    t: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "P", _readonly(self.P))
        object.__setattr__(self, "sigma", _readonly(self.sigma))
        if self.P.ndim != 2 or self.P.shape[1] != 2 or self.P.shape[0] < 3:
            raise ValueError("P must be (M, 2) with M >= 3")
        if self.sigma.shape != (self.P.shape[0],):
            raise ValueError("sigma must have one entry per vertex")
        if not (np.all(np.isfinite(self.P)) and np.all(np.isfinite(self.sigma))):
            raise ValueError("non-finite curve data")

    @property
    def M(self) -> int:
        return self.P.shape[0]


def convexity_check(s: SupportState, eps_convex: float | None = None) -> np.ndarray:
    """Return S''+S, raising ConvexityLost if any sample is <= eps_convex."""
    eps = s.default_eps_convex() if eps_convex is None else eps_convex
    rho = s.curvature_denominator()
    if np.min(rho) <= eps:
        j = int(np.argmin(rho))
        theta_j = float(s.grid.theta[j])
        raise ConvexityLost(
            f"S''+S = {rho[j]:.3e} <= {eps:.3e} near theta = {theta_j:.4f}",
            t=s.t,
            theta=theta_j,
        )
    return rho


def curvature_from_support(s: SupportState, eps_convex: float | None = None) -> np.ndarray:
    """Pointwise curvature k = 1/(S'' + S)."""
    return 1.0 / convexity_check(s, eps_convex)


def length_from_support(s: SupportState) -> float:
    """Curve length: the trapezoid (here: exact spectral) quadrature of S."""
    return TWO_PI * float(np.mean(s.S))


def support_to_curve(s: SupportState, eps_convex: float | None = None) -> PlaneCurve:
    """Reconstruct the boundary polygon at the grid's normal angles."""
    convexity_check(s, eps_convex)
    theta = s.grid.theta
    Sp = periodic_derivative(s.S, 1)
    cx, cy = s.center
    x = s.S * np.cos(theta) - Sp * np.sin(theta) + cx
    y = s.S * np.sin(theta) + Sp * np.cos(theta) + cy
    return PlaneCurve(P=np.column_stack([x, y]), sigma=s.V, t=s.t)


def turning_cross(P: np.ndarray) -> np.ndarray:
    """Cross products of consecutive edge pairs; positive iff locally convex CCW."""
    e = np.roll(P, -1, axis=0) - P
    e_prev = np.roll(e, 1, axis=0)
    return e_prev[:, 0] * e[:, 1] - e_prev[:, 1] * e[:, 0]


def _point_in_convex(P: np.ndarray, q: np.ndarray) -> bool:
    # Strict interiority wrt every edge half-plane of a CCW convex polygon.
    e = np.roll(P, -1, axis=0) - P
    rel = q[None, :] - P
    cross = e[:, 0] * rel[:, 1] - e[:, 1] * rel[:, 0]
    return bool(np.all(cross > 0.0))


def _trig_eval(coeff: np.ndarray, weights: np.ndarray, freq: np.ndarray,
               a: float, order: int = 0) -> float:
    phase = np.exp(1j * freq * a) * (1j * freq) ** order
    return float(np.real(np.sum(weights * coeff * phase)))


def curve_to_support(c: PlaneCurve, grid: AngleGrid, *, recenter: bool = True) -> SupportState:
    """Sample the support function of a convex polygon on a normal-angle grid.

    For each grid angle the integer arg-max of <P_i, nu> is refined by a local
    quadratic fit; on smoothly sampled curves the fit seeds a Newton polish on
    the trigonometric interpolant of the vertex coordinates, which recovers
    the smooth curve's support to near machine precision.  If Newton cannot be
    trusted (non-negative local second derivative, or no convergence, as on
    coarse polygonal data) the quadratic value is kept.

    The returned state has V = 0; velocities are the caller's to supply.
    """
    P = np.asarray(c.P, dtype=float)
    if np.min(turning_cross(P)) <= 0.0:
        raise NotConvex("input polygon is not strictly convex (CCW)")

    shift = np.zeros(2)
    origin = np.zeros(2)
    if not _point_in_convex(P, origin):
        if not recenter:
            raise OriginNotInterior("origin is not strictly inside the curve")
        shift = P.mean(axis=0)
        P = P - shift
        if not _point_in_convex(P, origin):
            raise OriginNotInterior("centroid recentering failed to give an interior origin")

    M = P.shape[0]
    fx = np.fft.rfft(P[:, 0])
    fy = np.fft.rfft(P[:, 1])
    freq = np.fft.rfftfreq(M, d=1.0 / M)
    weights = np.full(freq.shape, 2.0 / M)
    weights[0] = 1.0 / M
    if M % 2 == 0:
        weights[-1] = 1.0 / M

    theta = grid.theta
    S = np.empty(grid.N)
    for j in range(grid.N):
        nu = (np.cos(theta[j]), np.sin(theta[j]))
        g = P[:, 0] * nu[0] + P[:, 1] * nu[1]
        i = int(np.argmax(g))
        gm, g0, gp = g[i - 1], g[i], g[(i + 1) % M]
        denom = 2.0 * g0 - gp - gm
        if denom > 0.0:
            value = g0 + (gp - gm) ** 2 / (8.0 * denom)
            offset = 0.5 * (gp - gm) / denom
        else:
            value = g0
            offset = 0.0

        coeff = fx * nu[0] + fy * nu[1]
        a = TWO_PI * (i + offset) / M
        converged = False
        for _ in range(8):
            d1 = _trig_eval(coeff, weights, freq, a, order=1)
            d2 = _trig_eval(coeff, weights, freq, a, order=2)
            if d2 >= 0.0:
                break
            step = d1 / d2
            a -= step
            if abs(step) < 1e-14:
                converged = True
                break
        if converged and abs(a - TWO_PI * i / M) <= 1.5 * TWO_PI / M:
            polished = _trig_eval(coeff, weights, freq, a)
            # Newton may only improve on the quadratic fit, never undercut the
            # attained discrete maximum.
            if polished >= g0:
                value = polished
        S[j] = value

    return SupportState(grid=grid, S=S, V=np.zeros(grid.N), t=c.t,
                        center=(float(shift[0]), float(shift[1])))
