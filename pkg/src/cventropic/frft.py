"""Fractional Fourier transform on uniform symmetric grids.

The angle-theta transform maps an amplitude array sampled at
x_j = (j - N/2) dx to the same sample points of

    Phi(w) = sqrt(exp(i(theta - pi/2)) / (2 pi sin theta))
             * exp(i w^2 cot(theta) / 2)
             * Integral exp(-i w x / sin(theta) + i x^2 cot(theta) / 2) psi(x) dx

evaluated by a chirp-multiply, chirped-convolution (Bluestein), chirp-multiply
factorization whose inner step is the Fourier integral taken directly on the
scaled output frequencies w_i / sin(theta). Angle 0 is the identity, +/-pi/2
the unitary forward/inverse Fourier transform, pi the parity flip, and the
family composes additively in theta.

Angles with |sin theta| below sin(pi/4) are reduced through an exact quarter
turn, frft(theta) = core(theta -/+ pi/2) o frft(+/- pi/2), because the scaled
frequency grid of the direct factorization would undercover [-L, L] there.
Plans (precomputed chirp tables per (N, dx, theta)) are cached and safe for
concurrent readers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .states import GridSpec, WaveFunction

TAU = 2.0 * math.pi

# Exact shortcuts only in a vanishing neighborhood of the singular angles;
# anything wider breaks additivity at the 1e-5 level (see ledger).
EXACT_ANGLE_TOL = 1e-9

# Direct chirp factorization only where the scaled frequencies stay on-grid.
CORE_MIN_SIN = 0.70


def wrap_angle(theta: float) -> float:
    """Reduce an angle to the principal interval (-pi, pi]."""
    w = math.remainder(float(theta), TAU)
    if w <= -math.pi:
        w = math.pi
    return w


@dataclass(frozen=True)
class FrftPlan:
    """Precomputed chirp tables for one (grid axis, angle) pair.

    chirp is exp(-i beta d^2) with beta = dx^2 tan(theta/2) / 2 and
    d = j - N/2; kernel_hat is the FFT of the Bluestein chirp
    exp(i alpha m^2 / 2), alpha = dx^2 / sin(theta), laid out for circular
    convolution of length fft_length; prefactor collects
    dx * sqrt(exp(i(theta - pi/2)) / (2 pi sin theta)).
    """

    n: int
    spacing: float
    theta: float
    chirp: np.ndarray
    kernel_hat: np.ndarray
    prefactor: complex
    fft_length: int

    def apply(self, amplitudes: np.ndarray, axis: int) -> np.ndarray:
        """Transform `amplitudes` along `axis` (no normalization)."""
        a = np.moveaxis(np.asarray(amplitudes, dtype=np.complex128), axis, -1)
        a = a * self.chirp
        spectrum = np.fft.fft(a, n=self.fft_length, axis=-1)
        conv = np.fft.ifft(spectrum * self.kernel_hat, axis=-1)[..., : self.n]
        out = self.prefactor * self.chirp * conv
        return np.moveaxis(out, -1, axis)


@lru_cache(maxsize=256)
def _build_plan(n: int, spacing: float, theta: float) -> FrftPlan:
    if abs(math.sin(theta)) < CORE_MIN_SIN:
        raise ValueError(f"no direct plan at theta={theta!r}; reduce the angle first")
    d = np.arange(n, dtype=np.float64) - n // 2
    alpha = spacing**2 / math.sin(theta)
    beta = 0.5 * spacing**2 * math.tan(theta / 2.0)
    chirp = np.exp(-1j * beta * d**2)

    m = 1 << max(2 * n - 1, 2).bit_length()
    lags = np.arange(n, dtype=np.float64)
    kernel = np.zeros(m, dtype=np.complex128)
    kernel[:n] = np.exp(0.5j * alpha * lags**2)
    kernel[m - n + 1 :] = kernel[1:n][::-1]
    kernel_hat = np.fft.fft(kernel)

    prefactor = spacing * complex(
        np.sqrt(np.exp(1j * (theta - math.pi / 2.0)) / (TAU * math.sin(theta)))
    )
    for arr in (chirp, kernel_hat):
        arr.setflags(write=False)
    return FrftPlan(n, spacing, theta, chirp, kernel_hat, prefactor, m)


def frft_plan(grid: GridSpec, theta: float) -> FrftPlan:
    """Fetch (building once) the direct plan for a core-range angle."""
    return _build_plan(grid.points_per_axis, grid.spacing, float(theta))


def _parity(amplitudes: np.ndarray, axis: int) -> np.ndarray:
    # x_j = (j - N/2) dx maps to -x_j at index (N - j) mod N; index 0 (the
    # unpaired -L sample) stays put.
    return np.roll(np.flip(amplitudes, axis=axis), 1, axis=axis)


def _apply_reduced(grid: GridSpec, amps: np.ndarray, axis: int, theta: float) -> np.ndarray:
    """Apply angle `theta` in (-pi, pi] along one axis, raw amplitudes out."""
    if abs(theta) <= EXACT_ANGLE_TOL:
        return np.array(amps, dtype=np.complex128)
    if abs(theta - math.pi) <= EXACT_ANGLE_TOL:
        return _parity(amps, axis)
    if abs(math.sin(theta)) >= CORE_MIN_SIN:
        return frft_plan(grid, theta).apply(amps, axis)
    # Near-singular band: exact quarter turn first, remainder lands in core.
    quarter = math.copysign(math.pi / 2.0, theta)
    staged = frft_plan(grid, quarter).apply(amps, axis)
    return frft_plan(grid, wrap_angle(theta - quarter)).apply(staged, axis)


def _retag(state: WaveFunction, axis: int, theta: float) -> tuple[float, ...]:
    tag = list(state.representation_tag)
    tag[axis] = wrap_angle(tag[axis] + theta)
    return tuple(tag)


def frft_apply(state: WaveFunction, theta: float, axis: int = 0) -> WaveFunction:
    """Fractional Fourier transform of one axis of a state.

    Parameters
    ----------
    state : WaveFunction
        Input state, any axes.
    theta : float
        Transform angle; reduced to (-pi, pi] first.
    axis : int
        Grid axis to transform.

    Returns
    -------
    WaveFunction
        Transformed state on the same grid, representation tag advanced by
        theta on `axis`. meta carries norm_drift (pre-renormalization
        unitarity defect) and edge_mass.
    """
    if not 0 <= axis < state.grid.axes:
        raise ValueError(f"axis {axis} out of range for {state.grid.axes}-axis state")
    theta = wrap_angle(theta)
    raw = _apply_reduced(state.grid, state.amplitudes, axis, theta)
    return WaveFunction.normalized(state.grid, raw, _retag(state, axis, theta))


def fourier_apply(state: WaveFunction, axis: int = 0, inverse: bool = False) -> WaveFunction:
    """Unitary Fourier transform (angle +pi/2, or -pi/2 when inverse).

    Output samples live on the same grid as the input, which for general
    (N, dx) is not the FFT's natural conjugate grid; the chirp-z evaluation
    of the plan handles that, so this agrees with frft_apply at +/-pi/2 by
    construction.
    """
    theta = -math.pi / 2.0 if inverse else math.pi / 2.0
    return frft_apply(state, theta, axis=axis)
