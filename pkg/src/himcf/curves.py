"""Discrete geometry of closed convex polygons.

Tangents are chord central differences, outward normals their -90 degree
rotation (CCW curves), and curvature the signed circumscribed-circle value of
each vertex triple: exact on uniformly sampled circles, second order on
general smooth curves.
"""
from __future__ import annotations

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import DegenerateEdge, NotConvex
from .grids import TWO_PI
from .support import PlaneCurve, turning_cross


def edge_vectors(P: np.ndarray) -> np.ndarray:
    return np.roll(P, -1, axis=0) - P


def edge_lengths(P: np.ndarray) -> np.ndarray:
    return np.hypot(*edge_vectors(P).T)


def polygon_length(P: np.ndarray) -> float:
    return float(edge_lengths(P).sum())


def discrete_tangent_normal(P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit tangent (chord central difference) and outward unit normal."""
    chord = np.roll(P, -1, axis=0) - np.roll(P, 1, axis=0)
    norm = np.hypot(chord[:, 0], chord[:, 1])
    if np.min(norm) <= 0.0:
        raise DegenerateEdge("coincident neighbor vertices")
    T = chord / norm[:, None]
    nu = np.column_stack([T[:, 1], -T[:, 0]])
    return T, nu


def discrete_curvature(P: np.ndarray) -> np.ndarray:
    """Signed curvature from the circumscribed circle of each vertex triple."""
    e = edge_vectors(P)
    e_prev = np.roll(e, 1, axis=0)
    cross = e_prev[:, 0] * e[:, 1] - e_prev[:, 1] * e[:, 0]
    l_prev = np.hypot(e_prev[:, 0], e_prev[:, 1])
    l_next = np.hypot(e[:, 0], e[:, 1])
    chord = np.hypot(*(e_prev + e).T)
    denom = l_prev * l_next * chord
    if np.min(denom) <= 0.0:
        raise DegenerateEdge("zero-length edge in curvature stencil")
    return 2.0 * cross / denom


def turning_angles(P: np.ndarray) -> np.ndarray:
    """Exterior angle at each vertex; all positive for strictly convex CCW."""
    e = edge_vectors(P)
    e_prev = np.roll(e, 1, axis=0)
    cross = e_prev[:, 0] * e[:, 1] - e_prev[:, 1] * e[:, 0]
    dot = np.sum(e_prev * e, axis=1)
    return np.arctan2(cross, dot)


def require_convex(P: np.ndarray) -> None:
    if np.min(turning_cross(P)) <= 0.0:
        j = int(np.argmin(turning_cross(P)))
        raise NotConvex(f"non-positive turning at vertex {j}")


def require_nondegenerate(P: np.ndarray) -> None:
    lengths = edge_lengths(P)
    mean = float(lengths.mean())
    if np.min(lengths) < 1e-12 * mean:
        raise DegenerateEdge("adjacent vertices collide")


def normal_angles(P: np.ndarray) -> np.ndarray:
    """Unwrapped outward-normal angle per vertex, increasing by 2*pi per loop."""
    _, nu = discrete_tangent_normal(P)
    raw = np.arctan2(nu[:, 1], nu[:, 0])
    return np.unwrap(raw)


def resample_equal_arclength(P: np.ndarray, fields: list[np.ndarray] = (),
                             count: int | None = None) -> tuple[np.ndarray, list[np.ndarray]]:
    """Redistribute vertices to equal arc-length spacing.

    Positions and the given per-vertex fields are interpolated by periodic
    cubic splines in the cumulative arc-length parameter.  Vertex count is
    preserved unless count says otherwise; vertex 0 stays fixed.
    """
    lengths = edge_lengths(P)
    s = np.concatenate([[0.0], np.cumsum(lengths)])
    total = s[-1]
    closed_P = np.vstack([P, P[:1]])
    targets = np.linspace(0.0, total, count or P.shape[0], endpoint=False)
    spline = CubicSpline(s, closed_P, bc_type="periodic")
    newP = spline(targets)
    out_fields = []
    for f in fields:
        closed_f = np.concatenate([f, f[:1]])
        fs = CubicSpline(s, closed_f, bc_type="periodic")
        out_fields.append(fs(targets))
    return newP, out_fields


def polygon_hausdorff(P: np.ndarray, Q: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two closed polygons.

    Vertex-to-segment distances in both directions, so the value is not
    inflated by mismatched vertex placement along the boundaries.
    """
    return max(_directed_hausdorff(P, Q), _directed_hausdorff(Q, P))


def _directed_hausdorff(P: np.ndarray, Q: np.ndarray) -> float:
    a = Q
    b = np.roll(Q, -1, axis=0)
    ab = b - a                   # (m, 2)
    ab2 = np.sum(ab * ab, axis=1)
    ab2 = np.where(ab2 == 0.0, 1.0, ab2)
    rel = P[:, None, :] - a[None, :, :]          # (n, m, 2)
    proj = np.sum(rel * ab[None, :, :], axis=2) / ab2[None, :]
    proj = np.clip(proj, 0.0, 1.0)
    closest = a[None, :, :] + proj[:, :, None] * ab[None, :, :]
    d = np.hypot(*(P[:, None, :] - closest).transpose(2, 0, 1))
    return float(np.max(np.min(d, axis=1)))


def curve_from_radius_profile(radius: float, M: int, sigma_value: float = 0.0,
                              t: float = 0.0) -> PlaneCurve:
    """Uniformly sampled circle, the degenerate but ubiquitous test curve."""
    alpha = TWO_PI * np.arange(M) / M
    P = radius * np.column_stack([np.cos(alpha), np.sin(alpha)])
    return PlaneCurve(P=P, sigma=np.full(M, float(sigma_value)), t=t)
