"""Linear quadrature observables and their distributions on gridded states.

A quadrature observable over n modes is sum_i (a_i x_i + a'_i p_i),
stored as the interleaved coefficient vector d = (a_1, a'_1, ..., a_n, a'_n).
The commutator of two such observables is the scalar i * d^T Omega d' with
Omega the block-diagonal symplectic form, and the whole algebra is covariant
under per-mode phase-space rotations and under orthogonal rotations of the
mode index ("local" and "global" rotations).

distribution_of realizes the observable's probability distribution on a
gridded state: each active mode is rotated so its contribution becomes a
pure position term (fractional Fourier transform), the joint density is
projected onto the coefficient direction (for two active modes, by a
band-limited grid rotation that aligns the direction with the first axis
followed by an exact marginal), and the support is rescaled by the
coefficient norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResolutionError
from .frft import frft_apply, wrap_angle
from .states import (
    GriddedDensity,
    GridSpec,
    PureEnsemble,
    WaveFunction,
    joint_density,
    mixture_density,
)

ORTHOGONALITY_TOL = 1e-10
CORNER_MASS_TOL = 1e-8


@dataclass(frozen=True)
class QuadratureOp:
    """Observable sum_i (a_i x_i + a'_i p_i) with interleaved coefficients."""

    coefficients: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coefficients, dtype=np.float64)
        if coeffs.ndim != 1 or coeffs.size == 0 or coeffs.size % 2 != 0:
            raise ValueError("coefficients must be a flat (a_i, a'_i, ...) vector")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n(self) -> int:
        return self.coefficients.size // 2

    def x_part(self) -> np.ndarray:
        return self.coefficients[0::2]

    def p_part(self) -> np.ndarray:
        return self.coefficients[1::2]

    def is_zero(self) -> bool:
        return not np.any(self.coefficients)

    def __add__(self, other: "QuadratureOp") -> "QuadratureOp":
        if self.n != other.n:
            raise ValueError("operands act on different mode counts")
        return QuadratureOp(self.coefficients + other.coefficients)

    def __mul__(self, c: float) -> "QuadratureOp":
        return QuadratureOp(self.coefficients * float(c))

    __rmul__ = __mul__

    @staticmethod
    def from_parts(x_part, p_part) -> "QuadratureOp":
        x = np.asarray(x_part, dtype=np.float64)
        p = np.asarray(p_part, dtype=np.float64)
        if x.shape != p.shape or x.ndim != 1:
            raise ValueError("x_part and p_part must be 1-D and the same length")
        coeffs = np.empty(2 * x.size)
        coeffs[0::2] = x
        coeffs[1::2] = p
        return QuadratureOp(coeffs)


def position_op(n: int = 1, mode: int = 0) -> QuadratureOp:
    coeffs = np.zeros(2 * n)
    coeffs[2 * mode] = 1.0
    return QuadratureOp(coeffs)


def momentum_op(n: int = 1, mode: int = 0) -> QuadratureOp:
    coeffs = np.zeros(2 * n)
    coeffs[2 * mode + 1] = 1.0
    return QuadratureOp(coeffs)


def symplectic_form(n: int) -> np.ndarray:
    """Block-diagonal form with [[0, 1], [-1, 0]] per mode."""
    omega = np.zeros((2 * n, 2 * n))
    for i in range(n):
        omega[2 * i, 2 * i + 1] = 1.0
        omega[2 * i + 1, 2 * i] = -1.0
    return omega


def commutator_value(op_a: QuadratureOp, op_b: QuadratureOp) -> float:
    """Scalar kappa with [A, B] = i * kappa: kappa = d_A^T Omega d_B."""
    if op_a.n != op_b.n:
        raise ValueError("operands act on different mode counts")
    return float(
        np.dot(op_a.x_part(), op_b.p_part()) - np.dot(op_b.x_part(), op_a.p_part())
    )


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def local_rotate(op: QuadratureOp, angles) -> QuadratureOp:
    """Per-mode phase-space rotation: (a_i, a'_i) -> (a_i, a'_i) @ R(theta_i).

    The matching state transform is the fractional Fourier transform of each
    axis by the same angle; the commutator of any pair is preserved.
    """
    angles = np.atleast_1d(np.asarray(angles, dtype=np.float64))
    if angles.size != op.n:
        raise ValueError("need one rotation angle per mode")
    coeffs = op.coefficients.copy()
    for i, theta in enumerate(angles):
        pair = coeffs[2 * i : 2 * i + 2]
        coeffs[2 * i : 2 * i + 2] = pair @ rotation_matrix(theta)
    return QuadratureOp(coeffs)


def global_rotate(op: QuadratureOp, matrix: np.ndarray) -> QuadratureOp:
    """Orthogonal mode-space rotation applied to x and p parts alike."""
    r = np.asarray(matrix, dtype=np.float64)
    if r.shape != (op.n, op.n):
        raise ValueError(f"rotation matrix must be {op.n}x{op.n}")
    if not np.allclose(r @ r.T, np.eye(op.n), atol=ORTHOGONALITY_TOL, rtol=0.0):
        raise ValueError("rotation matrix must be orthogonal within 1e-10")
    return QuadratureOp.from_parts(op.x_part() @ r, op.p_part() @ r)


@dataclass(frozen=True)
class ReducedPair:
    """Canonical form of an operator pair under local/global rotations.

    Applying local_rotate(first_local_angles), then global_rotate(global_matrix),
    then local_rotate(second_local_angles) to the input pair yields
    (op_a, op_b) = (c_a*(cos(theta) x_1 + sin(theta) p_1) + c_a*mu x_2, c_b x_1),
    with the x_2 term absent for one mode and mu = nan when the first-mode
    part of op_a vanishes. The commutator is preserved exactly by every step.
    """

    first_local_angles: tuple[float, ...]
    global_matrix: np.ndarray
    second_local_angles: tuple[float, ...]
    op_a: QuadratureOp
    op_b: QuadratureOp
    c_a: float
    c_b: float
    theta: float
    mu: float

    def apply_forward(self, op: QuadratureOp) -> QuadratureOp:
        out = local_rotate(op, self.first_local_angles)
        out = global_rotate(out, self.global_matrix)
        return local_rotate(out, self.second_local_angles)

    def apply_inverse(self, op: QuadratureOp) -> QuadratureOp:
        out = local_rotate(op, tuple(-t for t in self.second_local_angles))
        out = global_rotate(out, self.global_matrix.T)
        return local_rotate(out, tuple(-t for t in self.first_local_angles))


def reduce_pair(op_a: QuadratureOp, op_b: QuadratureOp) -> ReducedPair:
    """Rotate a 1- or 2-mode pair into its canonical single-mode-plus-tail form.

    First each mode is rotated so op_b loses its momentum components, then a
    global rotation concentrates op_b on mode 1, then a final local rotation
    of the last mode removes its momentum component from op_a.
    """
    if op_a.n != op_b.n:
        raise ValueError("operands act on different mode counts")
    n = op_a.n
    if n > 2:
        raise ValueError("reduction is implemented for 1 or 2 modes")
    if op_a.is_zero() or op_b.is_zero():
        raise ValueError("reduction needs two nonzero operators")

    first = tuple(
        math.atan2(op_b.p_part()[i], op_b.x_part()[i])
        if (op_b.x_part()[i] or op_b.p_part()[i])
        else 0.0
        for i in range(n)
    )
    a1 = local_rotate(op_a, first)
    b1 = local_rotate(op_b, first)

    if n == 2:
        beta = b1.x_part()
        phi = math.atan2(beta[1], beta[0])
        rot = rotation_matrix(phi)
    else:
        rot = np.eye(1)
    a2 = global_rotate(a1, rot)
    b2 = global_rotate(b1, rot)

    if n == 2 and (a2.x_part()[1] or a2.p_part()[1]):
        second = (0.0, math.atan2(a2.p_part()[1], a2.x_part()[1]))
    else:
        second = (0.0,) * n
    a3 = local_rotate(a2, second)
    b3 = local_rotate(b2, second)

    c_b = float(b3.x_part()[0])
    c_a = float(math.hypot(a3.x_part()[0], a3.p_part()[0]))
    theta = math.atan2(a3.p_part()[0], a3.x_part()[0]) if c_a > 0 else 0.0
    if n == 2:
        tail = float(a3.x_part()[1])
        mu = tail / c_a if c_a > 0 else math.nan
    else:
        mu = 0.0
    return ReducedPair(first, rot, second, a3, b3, c_a, c_b, theta, mu)


def _quarter_turn(amps: np.ndarray) -> np.ndarray:
    # psi'(y1, y2) = psi(-y2, y1): transpose, then reindex axis 1 through the
    # centered-grid sign flip j -> (N - j) mod N.
    n = amps.shape[0]
    flip = (n - np.arange(n)) % n
    return amps.T[:, flip]


def _shear(amps: np.ndarray, axis: int, shift_per_unit: float) -> np.ndarray:
    """psi'(y) = psi(..., y_axis + shift_per_unit * y_other, ...) via FFT phases.

    A shear is a per-line fractional translation, exact for band-limited
    data; the circular wrap only touches lines whose far ends carry mass.
    """
    n = amps.shape[axis]
    # Shift in samples: shift_per_unit * (other coordinate) / spacing, and the
    # common spacing cancels, leaving the centered sample index.
    shift_samples = shift_per_unit * (np.arange(n) - n // 2)
    freqs = np.fft.fftfreq(n)
    phase = np.exp(2j * np.pi * np.outer(freqs, shift_samples))
    if axis == 1:
        phase = phase.T
    spectrum = np.fft.fft(amps, axis=axis)
    return np.fft.ifft(spectrum * phase, axis=axis)


def _corner_mass(grid: GridSpec, prob_mass: np.ndarray) -> float:
    """Probability mass outside the grid's inscribed circle."""
    x = grid.coords()
    outside = (
        x[:, None] ** 2 + x[None, :] ** 2
        > (grid.half_extent - grid.spacing) ** 2
    )
    return float(prob_mass[outside].sum())


def _require_rotatable(grid: GridSpec, prob_mass: np.ndarray) -> None:
    corner = _corner_mass(grid, prob_mass)
    if corner > CORNER_MASS_TOL:
        raise ResolutionError(
            f"corner mass {corner:.3e} exceeds {CORNER_MASS_TOL:.0e}; "
            "a rotation would push probability off the grid"
        )


def _rotate_padded(amps: np.ndarray, theta: float) -> np.ndarray:
    """Rotate a square centered array by substitution y -> R(theta) y.

    The nearest multiple of pi/2 is an exact index permutation; the residual
    in [-pi/4, pi/4] is a three-shear FFT rotation. The array is zero-padded
    to twice its side first so the intermediate shears of any guard-passing
    state cannot wrap around the periodic boundary; the result stays on the
    padded grid (same spacing, doubled extent).
    """
    n = amps.shape[0]
    padded = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    padded[n // 2 : n // 2 + n, n // 2 : n // 2 + n] = amps

    quarters = int(round(theta / (math.pi / 2.0)))
    residual = theta - quarters * (math.pi / 2.0)
    for _ in range(quarters % 4):
        padded = _quarter_turn(padded)
    if abs(residual) > 1e-15:
        # R(r) = SX(-tan(r/2)) SY(sin r) SX(-tan(r/2)) acting by substitution.
        a = -math.tan(residual / 2.0)
        b = math.sin(residual)
        padded = _shear(padded, 0, a)
        padded = _shear(padded, 1, b)
        padded = _shear(padded, 0, a)
    return padded


def distribution_of(
    state: WaveFunction | PureEnsemble, op: QuadratureOp
) -> GriddedDensity:
    """Probability distribution of a quadrature observable in a state.

    Per active mode i the coefficients factor as (a_i, a'_i) =
    c_i (cos t_i, sin t_i); the axis is brought into the t_i representation
    with a fractional Fourier transform, modes with c_i = 0 are integrated
    out, the remaining joint density is projected onto the unit coefficient
    direction, and the support is stretched by |c| (exact on the grid).

    With two active modes the projection rotates the state so the direction
    falls on the first axis and reads off that axis marginal; the rotation
    is band-limited and unitary, so no interpolation bias enters. States
    carrying more than 1e-8 mass outside the grid's inscribed circle abort
    with a resolution error rather than silently losing probability.

    Ensembles yield the weighted mixture of their members' distributions.
    """
    if isinstance(state, PureEnsemble):
        parts = [(w, distribution_of(s, op)) for w, s in state.members]
        return mixture_density(parts)

    if op.n != state.grid.axes:
        raise ValueError(
            f"operator acts on {op.n} modes but the state has {state.grid.axes}"
        )
    if op.is_zero():
        raise ValueError("cannot take the distribution of the zero operator")

    c = np.hypot(op.x_part(), op.p_part())
    active = [i for i in range(op.n) if c[i] > 0.0]
    work = state
    for i in active:
        angle = math.atan2(op.p_part()[i], op.x_part()[i])
        if angle != 0.0:
            work = frft_apply(work, angle, axis=i)

    grid = work.grid
    if len(active) == 1:
        axis = active[0]
        prob = np.abs(work.amplitudes) ** 2
        if grid.axes == 2:
            prob = prob.sum(axis=1 - axis) * grid.spacing
        values = prob / (prob.sum() * grid.spacing)
        base = GriddedDensity(
            support_min=float(grid.coords()[0]),
            spacing=grid.spacing,
            values=values,
        )
        return base.scaled(float(c[active[0]]))

    _require_rotatable(grid, joint_density(work) * grid.cell_volume())
    phi = math.atan2(c[1], c[0])
    rotated = _rotate_padded(work.amplitudes, phi)
    marginal = (np.abs(rotated) ** 2).sum(axis=1) * grid.spacing**2
    values = marginal / (marginal.sum() * grid.spacing)
    half = marginal.size // 2
    base = GriddedDensity(
        support_min=-half * grid.spacing,
        spacing=grid.spacing,
        values=values,
    )
    return base.scaled(float(np.linalg.norm(c)))


def rotate_state_2d(state: WaveFunction, theta: float) -> WaveFunction:
    """Resample a 2-axis state under the mode rotation matched to global_rotate.

    Produces psi'(y) = psi(R(theta) y): exact grid quarter-turns for the
    nearest multiple of pi/2 plus a three-shear FFT rotation for the
    residual angle, run on a zero-padded copy so smooth confined states lose
    nothing to interpolation or wrap-around. distribution_of(op) is
    invariant under this transform when op's coefficients are rotated by
    the same matrix. Mass outside the inscribed circle would leave the grid
    for some angle, so more than 1e-8 of it aborts with a resolution error.
    """
    if state.grid.axes != 2:
        raise ValueError("state rotation needs a 2-axis state")
    tags = state.representation_tag
    if abs(wrap_angle(tags[0] - tags[1])) > 1e-12:
        raise ValueError("both axes must share one representation angle")

    grid = state.grid
    _require_rotatable(
        grid, np.abs(state.amplitudes) ** 2 * grid.cell_volume()
    )
    n = grid.points_per_axis
    padded = _rotate_padded(state.amplitudes, wrap_angle(theta))
    amps = padded[n // 2 : n // 2 + n, n // 2 : n // 2 + n]
    return WaveFunction.normalized(grid, amps, tags)


def random_quadrature_pair(
    n: int,
    rng: np.random.Generator,
    min_commutator: float = 0.2,
) -> tuple[QuadratureOp, QuadratureOp]:
    """Standard-normal coefficient pair, redrawn until the commutator is sizable."""
    while True:
        op_a = QuadratureOp(rng.normal(size=2 * n))
        op_b = QuadratureOp(rng.normal(size=2 * n))
        if abs(commutator_value(op_a, op_b)) >= min_commutator:
            return op_a, op_b
