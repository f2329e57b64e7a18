"""Gridded pure states, densities, and finite pure-state ensembles.

States live on uniform symmetric grids: axis samples x_j = (j - N/2) * dx
with dx = 2 L / N, so the grid spans [-L, L - dx]. Wave functions are
complex amplitude arrays normalized so that sum(|psi|^2) * dx^axes = 1.
All value objects are frozen; transforms return new instances.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import EdgeMassWarning, NormalizationWarning, ResolutionError

NORM_TOL = 1e-9
DRIFT_TOL = 1e-6
EDGE_MASS_TOL = 1e-6
EDGE_SAMPLES = 5

# Width checks for Gaussian constructors: at least this many samples per
# standard deviation, and the +/- 5 sigma ellipse must fit inside the grid.
MIN_SAMPLES_PER_SIGMA = 3.0
SUPPORT_SIGMAS = 5.0

SQUEEZE_RANGE = (1.0 / 16.0, 16.0)


@dataclass(frozen=True)
class GridSpec:
    """Uniform symmetric sampling grid, identical along every axis."""

    points_per_axis: int
    half_extent: float
    axes: int = 1

    def __post_init__(self) -> None:
        if self.points_per_axis < 8:
            raise ValueError("points_per_axis must be at least 8")
        if self.half_extent <= 0:
            raise ValueError("half_extent must be positive")
        if self.axes not in (1, 2):
            raise ValueError("axes must be 1 or 2")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_extent / self.points_per_axis

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.axes

    def coords(self) -> np.ndarray:
        """Axis sample positions (j - N/2) * dx, shared by every axis."""
        n = self.points_per_axis
        return (np.arange(n) - n // 2) * self.spacing

    def cell_volume(self) -> float:
        return self.spacing**self.axes


def default_grid_1d() -> GridSpec:
    return GridSpec(points_per_axis=2048, half_extent=20.0, axes=1)


def default_grid_2d() -> GridSpec:
    return GridSpec(points_per_axis=256, half_extent=12.0, axes=2)


def _norm_squared(grid: GridSpec, amplitudes: np.ndarray) -> float:
    return float(np.sum(np.abs(amplitudes) ** 2) * grid.cell_volume())


def _edge_mass(grid: GridSpec, amplitudes: np.ndarray) -> float:
    """Probability mass within EDGE_SAMPLES samples of any grid boundary."""
    prob = np.abs(amplitudes) ** 2 * grid.cell_volume()
    interior = prob
    for ax in range(grid.axes):
        sl = [slice(None)] * grid.axes
        sl[ax] = slice(EDGE_SAMPLES, grid.points_per_axis - EDGE_SAMPLES)
        interior = interior[tuple(sl)]
    return float(prob.sum() - interior.sum())


@dataclass(frozen=True)
class WaveFunction:
    """Pure state: complex amplitudes over a grid.

    representation_tag records the quadrature angle each axis is currently
    expressed in (0.0 = position representation). meta carries advisory
    diagnostics from the transform that produced the state; it is not part
    of the state's value.
    """

    grid: GridSpec
    amplitudes: np.ndarray
    representation_tag: tuple[float, ...] = ()
    meta: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != self.grid.shape:
            raise ValueError(
                f"amplitudes shape {amps.shape} does not match grid {self.grid.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        tag = self.representation_tag or (0.0,) * self.grid.axes
        if len(tag) != self.grid.axes:
            raise ValueError("representation_tag needs one angle per axis")
        norm_sq = _norm_squared(self.grid, amps)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(
                f"state not normalized: sum |psi|^2 dV = {norm_sq!r}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "representation_tag", tuple(float(t) for t in tag))

    @classmethod
    def normalized(
        cls,
        grid: GridSpec,
        amplitudes: np.ndarray,
        representation_tag: tuple[float, ...] = (),
        meta: dict | None = None,
        warn_drift: bool = True,
    ) -> "WaveFunction":
        """Construct after renormalizing, warning if the drift exceeds 1e-6.

        The pre-normalization drift and the boundary mass are recorded in
        meta as norm_drift and edge_mass. Pass warn_drift=False when the
        input is a raw superposition with no norm to preserve.
        """
        amps = np.asarray(amplitudes, dtype=np.complex128)
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        norm_sq = _norm_squared(grid, amps)
        if norm_sq <= 0.0:
            raise ValueError("cannot normalize a zero state")
        drift = abs(np.sqrt(norm_sq) - 1.0)
        if warn_drift and drift > DRIFT_TOL:
            warnings.warn(
                f"renormalizing state: norm drifted by {drift:.3e}",
                NormalizationWarning,
                stacklevel=2,
            )
        amps = amps / np.sqrt(norm_sq)
        out_meta = dict(meta or {})
        out_meta["norm_drift"] = drift
        edge = _edge_mass(grid, amps)
        out_meta["edge_mass"] = edge
        if edge > EDGE_MASS_TOL:
            warnings.warn(
                f"probability mass {edge:.3e} within {EDGE_SAMPLES} samples of the "
                "grid boundary",
                EdgeMassWarning,
                stacklevel=2,
            )
        return cls(grid, amps, representation_tag, meta=out_meta)


@dataclass(frozen=True)
class GriddedDensity:
    """Probability density sampled on a uniform 1-D support grid."""

    support_min: float
    spacing: float
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ValueError("values must be a nonempty 1-D array")
        if self.spacing <= 0:
            raise ValueError("spacing must be positive")
        if not np.all(np.isfinite(vals)):
            raise ValueError("density values must be finite")
        if np.any(vals < 0):
            floor = vals.min()
            if floor < -1e-12:
                raise ValueError(f"density values must be nonnegative, min {floor!r}")
            vals = np.clip(vals, 0.0, None)
        total = float(vals.sum() * self.spacing)
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"density must integrate to 1, got {total!r}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def centers(self) -> np.ndarray:
        return self.support_min + self.spacing * np.arange(self.values.size)

    def scaled(self, c: float) -> "GriddedDensity":
        """Density of c * Y when this is the density of Y (c != 0), exact.

        Negative c reverses the sample order; the last sample point
        m + (n-1)*spacing maps to the new support_min.
        """
        if c == 0:
            raise ValueError("scale must be nonzero")
        if c > 0:
            return GriddedDensity(
                support_min=self.support_min * c,
                spacing=self.spacing * c,
                values=self.values / c,
            )
        last = self.support_min + (self.values.size - 1) * self.spacing
        return GriddedDensity(
            support_min=last * c,
            spacing=self.spacing * -c,
            values=self.values[::-1] / -c,
        )


@dataclass(frozen=True)
class PureEnsemble:
    """Finite convex mixture of pure states on a common grid."""

    members: tuple[tuple[float, WaveFunction], ...]

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("ensemble needs at least one member")
        weights = np.array([w for w, _ in self.members], dtype=np.float64)
        if np.any(weights < 0):
            raise ValueError("ensemble weights must be nonnegative")
        if abs(weights.sum() - 1.0) > NORM_TOL:
            raise ValueError(f"ensemble weights must sum to 1, got {weights.sum()!r}")
        grid = self.members[0][1].grid
        for _, state in self.members:
            if state.grid != grid:
                raise ValueError("all ensemble members must share one grid")
        object.__setattr__(
            self, "members", tuple((float(w), s) for w, s in self.members)
        )

    @property
    def grid(self) -> GridSpec:
        return self.members[0][1].grid


def _gaussian_axis_profile(
    grid: GridSpec,
    center_x: float,
    center_p: float,
    squeeze: float,
    rotation: float,
) -> np.ndarray:
    """1-D Gaussian amplitude profile with the requested phase-space moments.

    The pure state exp(-a (x - x0)^2 / 2 + i p0 x) has position variance
    1/(2 Re a), momentum variance |a|^2/(2 Re a) and symmetrized covariance
    -Im a / (2 Re a). The target second moments are the squeezed vacuum's
    diag(s/2, 1/(2s)) rotated by the phase-space rotation `rotation`,
    which pins a = (1 - 2 i Vxp) / (2 Vxx).
    """
    lo, hi = SQUEEZE_RANGE
    if not (lo <= squeeze <= hi):
        raise ValueError(f"squeeze must lie in [{lo}, {hi}], got {squeeze!r}")
    c, s = np.cos(rotation), np.sin(rotation)
    vxx = (squeeze * c**2 + s**2 / squeeze) / 2.0
    vxp = (squeeze - 1.0 / squeeze) * s * c / 2.0
    a = (1.0 - 2.0j * vxp) / (2.0 * vxx)

    sigma = np.sqrt(vxx)
    dx = grid.spacing
    if sigma < MIN_SAMPLES_PER_SIGMA * dx:
        raise ResolutionError(
            f"position width {sigma:.4g} needs spacing <= "
            f"{sigma / MIN_SAMPLES_PER_SIGMA:.4g}, grid has {dx:.4g}"
        )
    sigma_p = np.sqrt((abs(a) ** 2) / (2.0 * a.real))
    band = np.pi / dx
    if abs(center_p) + SUPPORT_SIGMAS * sigma_p > band:
        raise ResolutionError(
            f"momentum support {abs(center_p) + SUPPORT_SIGMAS * sigma_p:.4g} "
            f"exceeds the representable band {band:.4g}"
        )
    if abs(center_x) + SUPPORT_SIGMAS * sigma > grid.half_extent:
        raise ResolutionError(
            f"position support {abs(center_x) + SUPPORT_SIGMAS * sigma:.4g} "
            f"exceeds the grid half-extent {grid.half_extent:.4g}"
        )

    x = grid.coords()
    profile = np.exp(-a * (x - center_x) ** 2 / 2.0 + 1j * center_p * (x - center_x))
    profile /= np.sqrt(np.sum(np.abs(profile) ** 2) * dx)
    return profile.astype(np.complex128)


def make_gaussian(
    grid: GridSpec,
    center_x: float | tuple[float, ...] = 0.0,
    center_p: float | tuple[float, ...] = 0.0,
    squeeze: float | tuple[float, ...] = 1.0,
    rotation: float | tuple[float, ...] = 0.0,
) -> WaveFunction:
    """Displaced, squeezed, phase-space-rotated Gaussian product state.

    Parameters
    ----------
    grid : GridSpec
        Target grid; one Gaussian factor per axis.
    center_x, center_p : float or per-axis tuple
        Phase-space displacement of each factor.
    squeeze : float or per-axis tuple
        Position-variance scale: squeeze s gives position variance s/2 and
        momentum variance 1/(2 s) before rotation. Must lie in [1/16, 16].
    rotation : float or per-axis tuple
        Phase-space rotation angle applied to each factor's covariance.

    Raises
    ------
    ResolutionError
        If the grid cannot resolve the requested widths or displacements.
    """

    def per_axis(v) -> tuple[float, ...]:
        if np.isscalar(v):
            return (float(v),) * grid.axes
        out = tuple(float(x) for x in v)
        if len(out) != grid.axes:
            raise ValueError("per-axis parameter length must equal grid.axes")
        return out

    xs, ps = per_axis(center_x), per_axis(center_p)
    sq, rot = per_axis(squeeze), per_axis(rotation)
    profiles = [
        _gaussian_axis_profile(grid, xs[i], ps[i], sq[i], rot[i])
        for i in range(grid.axes)
    ]
    amps = profiles[0] if grid.axes == 1 else np.multiply.outer(profiles[0], profiles[1])
    return WaveFunction.normalized(grid, amps)


def make_vacuum(grid: GridSpec) -> WaveFunction:
    """Ground-state Gaussian: variance 1/2 in position and momentum per axis."""
    return make_gaussian(grid)


def hermite_levels(grid: GridSpec, count: int) -> np.ndarray:
    """First `count` harmonic-oscillator eigenfunctions sampled on the axis.

    Stable two-term recurrence phi_n = sqrt(2/n) x phi_{n-1}
    - sqrt((n-1)/n) phi_{n-2}; rows are grid-orthonormal to the quadrature
    accuracy of the grid. 1-D grids only.
    """
    if grid.axes != 1:
        raise ValueError("hermite levels are defined on 1-D grids")
    if count < 1:
        raise ValueError("count must be positive")
    x = grid.coords()
    out = np.empty((count, x.size), dtype=np.float64)
    out[0] = np.pi**-0.25 * np.exp(-(x**2) / 2.0)
    if count > 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(2, count):
        out[n] = np.sqrt(2.0 / n) * x * out[n - 1] - np.sqrt((n - 1) / n) * out[n - 2]
    return out


def hermite_superposition(grid: GridSpec, coefficients: np.ndarray) -> WaveFunction:
    """Normalized superposition of the lowest oscillator eigenfunctions."""
    coeff = np.asarray(coefficients, dtype=np.complex128)
    if coeff.ndim != 1 or coeff.size == 0:
        raise ValueError("coefficients must be a nonempty 1-D array")
    if not np.any(np.abs(coeff) > 0):
        raise ValueError("coefficients must not all vanish")
    levels = hermite_levels(grid, coeff.size)
    amps = coeff @ levels
    return WaveFunction.normalized(grid, amps, warn_drift=False)


def position_density(state: WaveFunction, axis: int = 0) -> GriddedDensity:
    """Marginal density of the state's current representation along `axis`.

    For 1-D states this is |psi|^2; for 2-D states the other axis is
    integrated out. The representation tag is the caller's concern: the
    density is over whatever quadrature the axis currently encodes.
    """
    if not 0 <= axis < state.grid.axes:
        raise ValueError(f"axis {axis} out of range for {state.grid.axes}-axis state")
    prob = np.abs(state.amplitudes) ** 2
    if state.grid.axes == 2:
        other = 1 - axis
        prob = prob.sum(axis=other) * state.grid.spacing
    values = prob / (prob.sum() * state.grid.spacing)
    return GriddedDensity(
        support_min=float(state.grid.coords()[0]),
        spacing=state.grid.spacing,
        values=values,
    )


def joint_density(state: WaveFunction) -> np.ndarray:
    """|psi|^2 over the full grid (any axes), normalized to the cell volume."""
    prob = np.abs(state.amplitudes) ** 2
    return prob / (prob.sum() * state.grid.cell_volume())


def mixture_density(densities: list[tuple[float, GriddedDensity]]) -> GriddedDensity:
    """Convex combination of densities on one common support grid."""
    if not densities:
        raise ValueError("need at least one density")
    w0, d0 = densities[0]
    acc = w0 * d0.values
    for w, d in densities[1:]:
        if (
            d.values.shape != d0.values.shape
            or abs(d.support_min - d0.support_min) > 1e-9 * max(1.0, abs(d0.support_min))
            or abs(d.spacing - d0.spacing) > 1e-12 * d0.spacing
        ):
            raise ValueError("densities must share one support grid")
        acc = acc + w * d.values
    total = acc.sum() * d0.spacing
    return GriddedDensity(d0.support_min, d0.spacing, acc / total)


def random_superposition(
    grid: GridSpec,
    rng: np.random.Generator,
    max_components: int = 6,
) -> WaveFunction:
    """Random smooth pure state: superposed displaced/squeezed Gaussians.

    Components stay well inside the grid (|x|,|p| <= 3, squeeze in [1/3, 3])
    so downstream transforms see resolvable, confined states.
    """
    k = int(rng.integers(1, max_components + 1))
    amps = np.zeros(grid.shape, dtype=np.complex128)
    for _ in range(k):
        part = make_gaussian(
            grid,
            center_x=tuple(rng.uniform(-3.0, 3.0, grid.axes)),
            center_p=tuple(rng.uniform(-3.0, 3.0, grid.axes)),
            squeeze=tuple(np.exp(rng.uniform(np.log(1 / 3), np.log(3.0), grid.axes))),
            rotation=tuple(rng.uniform(-np.pi, np.pi, grid.axes)),
        )
        weight = rng.normal() + 1j * rng.normal()
        amps = amps + weight * part.amplitudes
    return WaveFunction.normalized(grid, amps, warn_drift=False)


def random_ensemble(
    grid: GridSpec,
    rng: np.random.Generator,
    members: int = 2,
    max_components: int = 3,
) -> PureEnsemble:
    """Random mixture of `members` random superpositions with Dirichlet weights."""
    weights = rng.dirichlet(np.ones(members))
    pairs = tuple(
        (float(w), random_superposition(grid, rng, max_components)) for w in weights
    )
    return PureEnsemble(pairs)
