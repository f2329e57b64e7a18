import math

import numpy as np
import pytest

from cventropic import (
    BASE_ENTROPY_SUM,
    FAMILY_IDS,
    QuadratureOp,
    StateFamily,
    entropic_rhs,
    minimize,
    momentum_op,
    objective,
    position_op,
)


def test_family_ids_frozen():
    assert FAMILY_IDS == ("gaussian", "gaussian_mixture_k", "hermite_superposition_m")


def test_parameter_counts(grid1, grid2):
    assert StateFamily("gaussian", grid1).parameter_count == 4
    assert StateFamily("gaussian", grid2).parameter_count == 8
    assert StateFamily("gaussian_mixture_k", grid1, components=2).parameter_count == 10
    assert StateFamily("hermite_superposition_m", grid1, components=3).parameter_count == 6


def test_family_validation(grid1, grid2):
    with pytest.raises(ValueError):
        StateFamily("gaussian", grid1, components=2)
    with pytest.raises(ValueError):
        StateFamily("hermite_superposition_m", grid2, components=2)
    with pytest.raises(ValueError):
        StateFamily("unknown_family", grid1)


def test_neutral_params_build_ground_state(grid1, vacuum1):
    family = StateFamily("gaussian", grid1)
    state = family.build(family.neutral_params())
    np.testing.assert_allclose(state.amplitudes, vacuum1.amplitudes, atol=1e-12)


def test_objective_at_neutral_is_base_sum(grid1):
    family = StateFamily("gaussian", grid1)
    value = objective(family.neutral_params(), family, position_op(), momentum_op())
    np.testing.assert_allclose(value, BASE_ENTROPY_SUM, atol=1e-9)


def test_objective_out_of_bounds_is_inf(grid1):
    family = StateFamily("gaussian", grid1)
    params = family.neutral_params()
    params[0] = 100.0
    assert objective(params, family, position_op(), momentum_op()) == math.inf


def test_budget_validation(grid1):
    family = StateFamily("gaussian", grid1)
    with pytest.raises(ValueError):
        minimize(family, position_op(), momentum_op(), budget=50)


def test_minimize_deterministic(grid1):
    family = StateFamily("gaussian", grid1)
    a = QuadratureOp((2.0, 1.0))
    b = QuadratureOp((1.0, -1.0))
    one = minimize(family, a, b, budget=400, restarts=2, seed=11)
    two = minimize(family, a, b, budget=400, restarts=2, seed=11)
    assert one.best_value == two.best_value
    np.testing.assert_array_equal(one.best_params, two.best_params)
    assert one.evaluations == two.evaluations


def test_minimize_reaches_scaled_bound(grid1):
    family = StateFamily("gaussian", grid1)
    a = QuadratureOp((2.0, 1.0))
    b = QuadratureOp((1.0, -1.0))
    result = minimize(family, a, b, budget=800, restarts=2, seed=3)
    assert result.gap_to_bound <= 0.02
    assert result.gap_to_bound >= -5e-3
    np.testing.assert_allclose(
        result.best_value, entropic_rhs(a, b) + result.gap_to_bound, rtol=1e-12
    )


def test_minimize_respects_budget(grid1):
    family = StateFamily("gaussian", grid1)
    result = minimize(family, position_op(), momentum_op(), budget=300, restarts=3, seed=0)
    # simplex may finish a step past maxfev; allow slack, not runaway
    assert result.evaluations <= 400


def test_mixture_family_never_beats_bound(grid1):
    family = StateFamily("gaussian_mixture_k", grid1, components=2)
    result = minimize(family, position_op(), momentum_op(), budget=600, restarts=2, seed=5)
    assert result.gap_to_bound >= -5e-3


def test_hermite_family_finds_ground_state(grid1):
    family = StateFamily("hermite_superposition_m", grid1, components=2)
    result = minimize(family, position_op(), momentum_op(), budget=600, restarts=2, seed=7)
    assert result.gap_to_bound >= -5e-3
    assert result.gap_to_bound <= 0.02
