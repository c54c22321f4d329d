"""Pointwise quantities of a radial graph over the round n-sphere.

For a hypersurface written as X = u(x)*e(x) with e on the unit sphere and
phi = log u, the induced metric, second fundamental form, and mean curvature
at a point are algebraic in (u, phi_i, phi_ij, sigma_ij):

    upsilon^2 = 1 + sigma^{ij} phi_i phi_j
    g_ij   = u^2 (sigma_ij + phi_i phi_j)
    g^ij   = u^{-2} (sigma^{ij} - phi^i phi^j / upsilon^2)
    h_ij   = (u/upsilon) (sigma_ij - phi_ij + phi_i phi_j)
    H      = (1/(u upsilon)) (n + (-sigma^{ij} + phi^i phi^j/upsilon^2) phi_ij)

Covariant derivatives are inputs, not computed here; field-level assembly is
the caller's business.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import log, sqrt

import numpy as np

from .errors import InvalidMetric
from .grids import _readonly


@dataclass(frozen=True)
class GraphSample:
    n: int
    u: float
    phi: float
    phi_i: np.ndarray
    phi_ij: np.ndarray
    sigma_ij: np.ndarray
    upsilon: float
    g_ij: np.ndarray
    g_inv: np.ndarray
    h_ij: np.ndarray
    H: float


def graph_quantities(n: int, u: float, phi_i, phi_ij, sigma_ij) -> GraphSample:
    """Assemble the pointwise graph bundle; validates the metric inversion."""
    if n < 1:
        raise InvalidMetric(f"dimension must be >= 1, got {n}")
    if not (u > 0.0 and np.isfinite(u)):
        raise InvalidMetric(f"graph value must be positive and finite, got {u}")
    phi_i = np.asarray(phi_i, dtype=float)
    phi_ij = np.asarray(phi_ij, dtype=float)
    sigma = np.asarray(sigma_ij, dtype=float)
    if phi_i.shape != (n,) or phi_ij.shape != (n, n) or sigma.shape != (n, n):
        raise InvalidMetric("shape mismatch against dimension n")
    if not np.allclose(phi_ij, phi_ij.T, atol=1e-12, rtol=0.0):
        raise InvalidMetric("phi_ij must be symmetric")
    if not np.allclose(sigma, sigma.T, atol=1e-12, rtol=0.0):
        raise InvalidMetric("sigma_ij must be symmetric")
    try:
        np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        raise InvalidMetric("sigma_ij is not positive definite") from None

    sigma_inv = np.linalg.inv(sigma)
    phi_up = sigma_inv @ phi_i                       # phi^i
    grad_sq = float(phi_i @ phi_up)                  # |D phi|^2
    upsilon = sqrt(1.0 + grad_sq)

    outer = np.outer(phi_i, phi_i)
    g = u**2 * (sigma + outer)
    g_inv = u**-2 * (sigma_inv - np.outer(phi_up, phi_up) / upsilon**2)

    resid = g_inv @ g - np.eye(n)
    if np.max(np.abs(resid)) > 1e-12:
        raise InvalidMetric(f"metric inversion residual {np.max(np.abs(resid)):.3e}")

    h = (u / upsilon) * (sigma - phi_ij + outer)
    H = (n + float((np.outer(phi_up, phi_up) / upsilon**2 - sigma_inv).flatten()
                   @ phi_ij.flatten())) / (u * upsilon)

    return GraphSample(
        n=n, u=float(u), phi=log(u),
        phi_i=_readonly(phi_i), phi_ij=_readonly(phi_ij), sigma_ij=_readonly(sigma),
        upsilon=upsilon, g_ij=_readonly(g), g_inv=_readonly(g_inv),
        h_ij=_readonly(h), H=float(H),
    )
