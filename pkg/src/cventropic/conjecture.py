"""Numerical probe of the entropic bound beyond quadratures.

The probe class is A = f(x), diagonal in position, against B = g(p),
diagonal in momentum, on 1-D states. Both entropies come from the
pushforward of the basis density through the observable's values
(weighted histogram; no inverse functions), and the commutator expectation
|<[A, B]>| comes from pointwise multiplication in each basis with Fourier
round-trips in between. Records carry margins as findings; nothing here
asserts the conjectured inequality.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bounds import BASE_ENTROPY_SUM
from .entropy import EntropyEstimate
from .errors import ConfigError, ResolutionError
from .frft import frft_plan
from .quadrature import QuadratureOp
from .states import GriddedDensity, WaveFunction, position_density

SUPPORT_FLOOR = 1e-12
MIN_HISTOGRAM_BINS = 64
HERMITICITY_TOL = 1e-6
CONFIDENCE_TOL = 5e-3


@dataclass(frozen=True)
class DiagonalObservable:
    """f(x) or g(p): values sampled on the grid coordinates of its basis."""

    basis: str
    values: np.ndarray
    label: str = ""

    def __post_init__(self) -> None:
        if self.basis not in ("position", "momentum"):
            raise ValueError("basis must be 'position' or 'momentum'")
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("observable values must be a 1-D array")
        if not np.all(np.isfinite(values)):
            raise ValueError("observable values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @staticmethod
    def from_function(
        grid, basis: str, fn: Callable[[np.ndarray], np.ndarray], label: str = ""
    ) -> "DiagonalObservable":
        return DiagonalObservable(basis, fn(grid.coords()), label)


@dataclass(frozen=True)
class ProbeRecord:
    """One conjecture data point: margin = H_A + H_B - rhs, negative or not."""

    state_label: str
    f_label: str
    g_label: str
    h_a: float
    h_b: float
    commutator: float
    rhs: float
    margin: float
    low_confidence: bool

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.rhs)


_OBSERVABLE_PATTERN = re.compile(
    r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?|[+-])?\s*\*?\s*"
    r"([xp])\s*(?:\^\s*(\d+))?\s*"
    r"([+-]\s*(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*$"
)


def parse_observable(grid, text: str) -> DiagonalObservable:
    """Parse 'a*x^k+b' style observable specs (variable x or p).

    Accepted forms: x, p, x^2, x^3, 2*x, -p, 0.5*x^2-1, p+0.25, ... The
    variable decides the basis; powers 1 through 6 are allowed.
    """
    match = _OBSERVABLE_PATTERN.match(text)
    if match is None:
        raise ConfigError(f"cannot parse observable {text!r}")
    coeff_text, variable, power_text, offset_text = match.groups()
    if coeff_text in (None, "", "+"):
        coeff = 1.0
    elif coeff_text == "-":
        coeff = -1.0
    else:
        coeff = float(coeff_text)
    if coeff == 0.0:
        raise ConfigError(f"observable {text!r} is constant (zero coefficient)")
    power = int(power_text) if power_text else 1
    if not 1 <= power <= 6:
        raise ConfigError(f"observable power must be 1..6, got {power}")
    offset = float(offset_text.replace(" ", "")) if offset_text else 0.0
    basis = "position" if variable == "x" else "momentum"
    values = coeff * grid.coords() ** power + offset
    return DiagonalObservable(basis, values, label=text.strip())


def affine_quadrature(observable: DiagonalObservable, grid) -> QuadratureOp | None:
    """The QuadratureOp matching an affine observable, or None if nonlinear.

    The constant offset shifts the distribution without changing its
    entropy, so only the linear coefficient survives. `grid` must be the
    grid the observable was sampled on.
    """
    values = observable.values
    if values.size != grid.points_per_axis:
        raise ValueError("observable values must match the grid length")
    diffs = np.diff(values)
    step = float(diffs[0])
    if not np.allclose(diffs, step, atol=1e-12 * max(1.0, abs(step)), rtol=0.0):
        return None
    if step == 0.0:
        return None
    slope = step / grid.spacing
    if observable.basis == "position":
        return QuadratureOp((slope, 0.0))
    return QuadratureOp((0.0, slope))


def _basis_density(state: WaveFunction, basis: str) -> GriddedDensity:
    if state.grid.axes != 1:
        raise ValueError("diagonal-observable probes are 1-D only")
    if basis == "position":
        return position_density(state)
    plan = frft_plan(state.grid, math.pi / 2.0)
    momentum_amps = plan.apply(state.amplitudes, axis=0)
    prob = np.abs(momentum_amps) ** 2
    values = prob / (prob.sum() * state.grid.spacing)
    return GriddedDensity(
        support_min=float(state.grid.coords()[0]),
        spacing=state.grid.spacing,
        values=values,
    )


def observable_entropy(
    state: WaveFunction, observable: DiagonalObservable, bins: int | None = None
) -> EntropyEstimate:
    """Entropy of the observable's pushforward distribution.

    The basis density is restricted to its effective support (cells above
    1e-12), the observable values there are binned into a weighted
    histogram over [min f, max f], and the differential entropy uses the
    bin-width correction. A constant observable has a zero-width
    pushforward; its entropy is the -inf sentinel, fully flagged.
    """
    density = _basis_density(state, observable.basis)
    if observable.values.size != density.values.size:
        raise ValueError("observable values must match the grid length")
    mask = density.values > SUPPORT_FLOOR
    masses = density.values[mask] * density.spacing
    masses = masses / masses.sum()
    sampled = observable.values[mask]
    vmin = float(sampled.min())
    vmax = float(sampled.max())
    if vmax == vmin:
        return EntropyEstimate(value=-math.inf, bias_diagnostic=1.0)
    if bins is None:
        bins = max(MIN_HISTOGRAM_BINS, round(math.sqrt(observable.values.size)))
    counts, _ = np.histogram(sampled, bins=bins, range=(vmin, vmax), weights=masses)
    width = (vmax - vmin) / bins
    positive = counts[counts > 0.0]
    entropy = float(-np.sum(positive * np.log(positive / width)))
    # Boundary-bin mass flags distributions pressed against the value range.
    edge = float(counts[0] + counts[-1])
    return EntropyEstimate(value=entropy, bias_diagnostic=min(1.0, edge))


def commutator_expectation(
    state: WaveFunction,
    f_obs: DiagonalObservable,
    g_obs: DiagonalObservable,
) -> float:
    """|<state| [f(x), g(p)] |state>| via pointwise action in each basis.

    g acts through a forward/backward Fourier round-trip. The expectation
    of a commutator of Hermitian operators is purely imaginary; a real
    part above 1e-6 means the grid cannot support the operators and raises
    a resolution error.
    """
    if f_obs.basis != "position" or g_obs.basis != "momentum":
        raise ValueError("need f in the position basis and g in the momentum basis")
    grid = state.grid
    if grid.axes != 1:
        raise ValueError("commutator expectation is 1-D only")
    forward = frft_plan(grid, math.pi / 2.0)
    backward = frft_plan(grid, -math.pi / 2.0)

    def apply_g(amps: np.ndarray) -> np.ndarray:
        return backward.apply(g_obs.values * forward.apply(amps, axis=0), axis=0)

    psi = state.amplitudes
    weight = grid.spacing
    a_b_psi = f_obs.values * apply_g(psi)
    b_a_psi = apply_g(f_obs.values * psi)
    expectation = complex(np.vdot(psi, a_b_psi - b_a_psi) * weight)
    if abs(expectation.real) > HERMITICITY_TOL:
        raise ResolutionError(
            f"commutator expectation has real part {expectation.real:.3e}; "
            "the grid cannot represent these observables"
        )
    return abs(expectation.imag)


def probe(
    state: WaveFunction,
    f_obs: DiagonalObservable,
    g_obs: DiagonalObservable,
    state_label: str = "",
) -> ProbeRecord:
    """Assemble one conjecture record; negative margins are findings.

    Confidence: the pushforward entropies are recomputed with doubled
    histogram bins, and a shift of 5e-3 or more in either flags the record.
    """
    est_a = observable_entropy(state, f_obs)
    est_b = observable_entropy(state, g_obs)
    fine_a = observable_entropy(state, f_obs, bins=2 * MIN_HISTOGRAM_BINS)
    fine_b = observable_entropy(state, g_obs, bins=2 * MIN_HISTOGRAM_BINS)
    low_confidence = (
        abs(fine_a.value - est_a.value) >= CONFIDENCE_TOL
        or abs(fine_b.value - est_b.value) >= CONFIDENCE_TOL
    )

    kappa = commutator_expectation(state, f_obs, g_obs)
    rhs = -math.inf if kappa == 0.0 else BASE_ENTROPY_SUM + math.log(kappa)
    # An annihilated commutator leaves the bound unbounded below; the record
    # is trivially satisfied whatever the entropies are.
    margin = math.inf if math.isinf(rhs) else est_a.value + est_b.value - rhs
    return ProbeRecord(
        state_label=state_label,
        f_label=f_obs.label,
        g_label=g_obs.label,
        h_a=est_a.value,
        h_b=est_b.value,
        commutator=kappa,
        rhs=rhs,
        margin=margin,
        low_confidence=bool(low_confidence),
    )
