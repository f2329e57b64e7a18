"""Entropic and variance uncertainty relations for continuous-variable
states sampled on uniform grids.

The package builds wave functions on 1-D or 2-D grids, rotates them with
fractional Fourier transforms, projects them onto arbitrary quadrature
directions, and checks the resulting marginal distributions against the
entropic bound, the variance product bound, the covariance-matrix
positivity condition, and the chain of implications connecting them.
A derivative-free optimizer searches state families for bound-attaining
members, and a probe module measures pushforward entropies of
non-quadrature observables against the same bound template.
"""

from .bounds import (
    BASE_ENTROPY_SUM,
    BoundReport,
    CovarianceMatrix,
    check_chain,
    check_covariance_psd,
    check_entropic,
    check_robertson,
    check_xp_product,
    covariance_of,
    entropic_rhs,
)
from .conjecture import (
    DiagonalObservable,
    ProbeRecord,
    commutator_expectation,
    observable_entropy,
    parse_observable,
    probe,
)
from .entropy import (
    EntropyEstimate,
    VarianceEstimate,
    differential_entropy,
    entropy_variance_floor,
    variance,
)
from .errors import ConfigError, EdgeMassWarning, NormalizationWarning, ResolutionError
from .frft import fourier_apply, frft_apply, frft_plan, wrap_angle
from .optimize import FAMILY_IDS, OptResult, StateFamily, minimize, objective
from .quadrature import (
    QuadratureOp,
    ReducedPair,
    commutator_value,
    distribution_of,
    global_rotate,
    local_rotate,
    momentum_op,
    position_op,
    random_quadrature_pair,
    reduce_pair,
    rotate_state_2d,
    rotation_matrix,
    symplectic_form,
)
from .states import (
    GriddedDensity,
    GridSpec,
    PureEnsemble,
    WaveFunction,
    default_grid_1d,
    default_grid_2d,
    hermite_levels,
    hermite_superposition,
    joint_density,
    make_gaussian,
    make_vacuum,
    mixture_density,
    position_density,
    random_ensemble,
    random_superposition,
)

__version__ = "0.1.0"

__all__ = [
    "BASE_ENTROPY_SUM",
    "BoundReport",
    "ConfigError",
    "CovarianceMatrix",
    "DiagonalObservable",
    "EdgeMassWarning",
    "EntropyEstimate",
    "FAMILY_IDS",
    "GriddedDensity",
    "GridSpec",
    "NormalizationWarning",
    "OptResult",
    "ProbeRecord",
    "PureEnsemble",
    "QuadratureOp",
    "ReducedPair",
    "ResolutionError",
    "StateFamily",
    "VarianceEstimate",
    "WaveFunction",
    "check_chain",
    "check_covariance_psd",
    "check_entropic",
    "check_robertson",
    "check_xp_product",
    "commutator_expectation",
    "commutator_value",
    "covariance_of",
    "default_grid_1d",
    "default_grid_2d",
    "differential_entropy",
    "distribution_of",
    "entropic_rhs",
    "entropy_variance_floor",
    "fourier_apply",
    "frft_apply",
    "frft_plan",
    "global_rotate",
    "hermite_levels",
    "hermite_superposition",
    "joint_density",
    "local_rotate",
    "make_gaussian",
    "make_vacuum",
    "minimize",
    "mixture_density",
    "momentum_op",
    "objective",
    "parse_observable",
    "position_density",
    "position_op",
    "probe",
    "random_ensemble",
    "random_quadrature_pair",
    "random_superposition",
    "reduce_pair",
    "rotate_state_2d",
    "rotation_matrix",
    "symplectic_form",
    "variance",
    "wrap_angle",
]
