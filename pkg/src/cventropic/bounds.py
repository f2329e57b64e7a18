"""Uncertainty-relation checks for quadrature observables.

Every relation is evaluated numerically against a gridded state and reported
as a BoundReport with the measured left side, the analytic right side, the
margin, and a diagnostics map carrying the intermediate quantities:

  entropic    H(A) + H(B) >= 1 + ln(pi) + ln|[A, B]|
  robertson   Var(A) Var(B) >= [A, B]^2 / 4
  xp_product  the same product relation specialized to (x, p) of one mode
  covariance_psd   gamma + i Omega >= 0 for the 2n x 2n covariance matrix
  entropy_variance_chain   Var >= exp(2H - 1) / (2 pi) per observable, then
                           Var(A) + Var(B) >= 2 sqrt(Var(A) Var(B)) >= |[A, B]|

A zero commutator makes the entropic and product right sides degenerate
(unbounded below / zero), which is reported as a trivial pass rather than an
error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .entropy import differential_entropy, entropy_variance_floor, variance
from .quadrature import (
    QuadratureOp,
    commutator_value,
    distribution_of,
    momentum_op,
    position_op,
    symplectic_form,
)
from .states import PureEnsemble, WaveFunction

# Bound on H(x) + H(p) for the vacuum; the general right side adds ln|kappa|.
BASE_ENTROPY_SUM = 1.0 + math.log(math.pi)

ENTROPIC_TOL = 5e-3
VARIANCE_TOL = 1e-4
PSD_TOL = 1e-8
SYMMETRY_TOL = 1e-10


@dataclass(frozen=True)
class CovarianceMatrix:
    """2n x 2n real covariance matrix over (x_1, p_1, ..., x_n, p_n)."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        gamma = np.asarray(self.matrix, dtype=np.float64)
        if gamma.ndim != 2 or gamma.shape[0] != gamma.shape[1]:
            raise ValueError("covariance matrix must be square")
        if gamma.shape[0] % 2 != 0 or gamma.shape[0] == 0:
            raise ValueError("covariance matrix must be 2n x 2n")
        if not np.all(np.isfinite(gamma)):
            raise ValueError("covariance matrix entries must be finite")
        if not np.allclose(gamma, gamma.T, atol=SYMMETRY_TOL, rtol=0.0):
            raise ValueError("covariance matrix must be symmetric within 1e-10")
        if np.any(np.diag(gamma) <= 0.0):
            raise ValueError("covariance diagonal entries must be positive")
        gamma = (gamma + gamma.T) / 2.0
        gamma.setflags(write=False)
        object.__setattr__(self, "matrix", gamma)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2


@dataclass(frozen=True)
class BoundReport:
    """Outcome of one relation check: pass iff margin >= -tolerance."""

    relation_id: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    diagnostics: dict = field(default_factory=dict)

    def __str__(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return (
            f"{self.relation_id}: lhs={self.lhs:.6g} rhs={self.rhs:.6g} "
            f"margin={self.margin:+.3e} [{verdict}]"
        )


def entropic_rhs(op_a: QuadratureOp, op_b: QuadratureOp) -> float:
    """1 + ln(pi) + ln|[A, B]|, or -inf for a commuting pair."""
    kappa = commutator_value(op_a, op_b)
    if kappa == 0.0:
        return -math.inf
    return BASE_ENTROPY_SUM + math.log(abs(kappa))


def check_entropic(
    state: WaveFunction | PureEnsemble,
    op_a: QuadratureOp,
    op_b: QuadratureOp,
    tolerance: float = ENTROPIC_TOL,
) -> BoundReport:
    """H(A) + H(B) against 1 + ln(pi) + ln|[A, B]|."""
    est_a = differential_entropy(distribution_of(state, op_a))
    est_b = differential_entropy(distribution_of(state, op_b))
    lhs = est_a.value + est_b.value
    rhs = entropic_rhs(op_a, op_b)
    margin = lhs - rhs
    diagnostics = {
        "tolerance": tolerance,
        "h_a": est_a.value,
        "h_b": est_b.value,
        "h_a_bias": est_a.bias_diagnostic,
        "h_b_bias": est_b.bias_diagnostic,
        "commutator": commutator_value(op_a, op_b),
    }
    if math.isinf(rhs):
        diagnostics["degenerate"] = "zero commutator; bound unbounded below"
    return BoundReport(
        relation_id="entropic",
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        passed=bool(margin >= -tolerance),
        diagnostics=diagnostics,
    )


def _product_report(
    relation_id: str,
    state: WaveFunction | PureEnsemble,
    op_a: QuadratureOp,
    op_b: QuadratureOp,
    tolerance: float,
) -> BoundReport:
    var_a = variance(distribution_of(state, op_a))
    var_b = variance(distribution_of(state, op_b))
    kappa = commutator_value(op_a, op_b)
    lhs = var_a.value * var_b.value
    rhs = kappa * kappa / 4.0
    margin = lhs - rhs
    return BoundReport(
        relation_id=relation_id,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        passed=bool(margin >= -tolerance),
        diagnostics={
            "tolerance": tolerance,
            "var_a": var_a.value,
            "var_b": var_b.value,
            "mean_a": var_a.mean,
            "mean_b": var_b.mean,
            "commutator": kappa,
        },
    )


def check_robertson(
    state: WaveFunction | PureEnsemble,
    op_a: QuadratureOp,
    op_b: QuadratureOp,
    tolerance: float = VARIANCE_TOL,
) -> BoundReport:
    """Var(A) Var(B) against [A, B]^2 / 4."""
    return _product_report("robertson", state, op_a, op_b, tolerance)


def check_xp_product(
    state: WaveFunction | PureEnsemble,
    mode: int = 0,
    tolerance: float = VARIANCE_TOL,
) -> BoundReport:
    """Var(x) Var(p) >= 1/4 for one mode (commutator fixed at 1)."""
    n = state.grid.axes
    report = _product_report(
        "xp_product", state, position_op(n, mode), momentum_op(n, mode), tolerance
    )
    return report


def check_chain(
    state: WaveFunction | PureEnsemble,
    op_a: QuadratureOp,
    op_b: QuadratureOp,
    tolerance: float = VARIANCE_TOL,
) -> BoundReport:
    """Entropy-to-variance implication chain, link by link.

    floor(H) = exp(2H - 1) / (2 pi) lower-bounds each variance, the
    arithmetic-geometric mean inequality relates sum and product, and twice
    the geometric mean dominates the commutator. The reported lhs/rhs pair
    is the weakest link's; diagnostics carry every intermediate.
    """
    dist_a = distribution_of(state, op_a)
    dist_b = distribution_of(state, op_b)
    est_a = differential_entropy(dist_a)
    est_b = differential_entropy(dist_b)
    var_a = variance(dist_a).value
    var_b = variance(dist_b).value
    floor_a = entropy_variance_floor(est_a.value)
    floor_b = entropy_variance_floor(est_b.value)
    kappa = abs(commutator_value(op_a, op_b))
    arithmetic = var_a + var_b
    geometric2 = 2.0 * math.sqrt(var_a * var_b)

    links = [
        ("variance_floor_a", var_a, floor_a),
        ("variance_floor_b", var_b, floor_b),
        ("mean_inequality", arithmetic, geometric2),
        ("commutator_link", geometric2, kappa),
    ]
    weakest = min(links, key=lambda link: link[1] - link[2])
    margin = weakest[1] - weakest[2]
    diagnostics = {
        "tolerance": tolerance,
        "h_a": est_a.value,
        "h_b": est_b.value,
        "var_a": var_a,
        "var_b": var_b,
        "floor_a": floor_a,
        "floor_b": floor_b,
        "variance_sum": arithmetic,
        "twice_geometric_mean": geometric2,
        "commutator": kappa,
        "weakest_link": weakest[0],
    }
    diagnostics.update(
        {f"margin_{name}": lhs - rhs for name, lhs, rhs in links}
    )
    return BoundReport(
        relation_id="entropy_variance_chain",
        lhs=weakest[1],
        rhs=weakest[2],
        margin=margin,
        passed=bool(margin >= -tolerance),
        diagnostics=diagnostics,
    )


def covariance_of(state: WaveFunction | PureEnsemble) -> CovarianceMatrix:
    """Covariance matrix from quadrature distributions alone.

    Diagonal entries are twice the variance of x_i or p_i; off-diagonal
    symmetrized moments come from the variance of the rotated quadrature
    (R_j + R_k)/sqrt(2), so no operator products are ever formed.
    """
    n = state.grid.axes
    ops = []
    for mode in range(n):
        ops.append(position_op(n, mode))
        ops.append(momentum_op(n, mode))

    variances = [variance(distribution_of(state, op)).value for op in ops]
    dim = 2 * n
    gamma = np.zeros((dim, dim))
    for j in range(dim):
        gamma[j, j] = 2.0 * variances[j]
    for j in range(dim):
        for k in range(j + 1, dim):
            mixed = (ops[j] + ops[k]) * (1.0 / math.sqrt(2.0))
            var_mix = variance(distribution_of(state, mixed)).value
            cov_sym = var_mix - (variances[j] + variances[k]) / 2.0
            gamma[j, k] = gamma[k, j] = 2.0 * cov_sym
    return CovarianceMatrix(gamma)


def check_covariance_psd(
    gamma: CovarianceMatrix, tolerance: float = PSD_TOL
) -> BoundReport:
    """Physicality: the Hermitian matrix gamma + i Omega has no eigenvalue
    below -tolerance."""
    omega = symplectic_form(gamma.n)
    eigenvalues = np.linalg.eigvalsh(gamma.matrix + 1j * omega)
    smallest = float(eigenvalues[0])
    return BoundReport(
        relation_id="covariance_psd",
        lhs=smallest,
        rhs=0.0,
        margin=smallest,
        passed=bool(smallest >= -tolerance),
        diagnostics={
            "tolerance": tolerance,
            "eigenvalues": ", ".join(f"{v:.6g}" for v in eigenvalues),
            "modes": gamma.n,
        },
    )
