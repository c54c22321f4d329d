"""Uniform normal-angle grids and trigonometric-interpolation differentiation.

The flow solvers and monitors all live on a periodic grid theta_j = 2*pi*j/N.
Differentiation is spectral (FFT multipliers), exact for trigonometric
polynomials of degree < N/2; the curvature denominator S_thth + S needs the
second derivative at high accuracy, which rules out low-order stencils.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

TWO_PI = 2.0 * np.pi


def _readonly(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class AngleGrid:
    """N uniform samples of the normal angle on [0, 2*pi)."""

    N: int

    def __post_init__(self):
        if self.N < 16 or self.N % 2 != 0:
            raise ValueError(f"grid size must be even and >= 16, got {self.N}")

    @property
    def theta(self) -> np.ndarray:
        return _grid_theta(self.N)

    @property
    def dtheta(self) -> float:
        return TWO_PI / self.N


@lru_cache(maxsize=64)
def _grid_theta(n: int) -> np.ndarray:
    return _readonly(TWO_PI * np.arange(n) / n)


@lru_cache(maxsize=64)
def _derivative_multipliers(n: int, order: int) -> np.ndarray:
    freq = np.fft.rfftfreq(n, d=1.0 / n)
    mult = (1j * freq) ** order
    if order % 2 == 1 and n % 2 == 0:
        # Nyquist mode of a real sequence carries no sign information for odd
        # derivatives; the symmetric interpolant assigns it derivative zero.
        mult = mult.copy()
        mult[-1] = 0.0
    mult.setflags(write=False)
    return mult


def periodic_derivative(values: np.ndarray, order: int) -> np.ndarray:
    """Spectral order-th derivative of a real periodic sample sequence."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    v = np.asarray(values, dtype=float)
    if v.ndim != 1:
        raise ValueError("expected a 1-d sample sequence")
    if not np.all(np.isfinite(v)):
        raise ValueError("non-finite samples")
    mult = _derivative_multipliers(v.size, order)
    return np.fft.irfft(np.fft.rfft(v) * mult, v.size)
