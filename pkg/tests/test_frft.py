import math

import numpy as np
import pytest

from cventropic import (
    fourier_apply,
    frft_apply,
    frft_plan,
    joint_density,
    make_gaussian,
    position_density,
    random_superposition,
    wrap_angle,
)


def l2_distance(state_a, state_b):
    volume = state_a.grid.cell_volume()
    return math.sqrt(np.sum(np.abs(state_a.amplitudes - state_b.amplitudes) ** 2) * volume)


def test_wrap_angle_oracles():
    np.testing.assert_allclose(wrap_angle(0.3), 0.3)
    np.testing.assert_allclose(wrap_angle(3.0 * math.pi), math.pi)
    np.testing.assert_allclose(wrap_angle(-math.pi), math.pi)
    np.testing.assert_allclose(wrap_angle(5.0 * math.pi / 2.0), math.pi / 2.0)
    np.testing.assert_allclose(wrap_angle(-0.1), -0.1)


def test_identity_angle_exact(grid1):
    state = random_superposition(grid1, np.random.default_rng(0))
    for theta in (0.0, 1e-10, -1e-10):
        out = frft_apply(state, theta)
        np.testing.assert_allclose(out.amplitudes, state.amplitudes, atol=1e-12)


def test_half_turn_is_parity(grid1):
    state = random_superposition(grid1, np.random.default_rng(1))
    flipped = frft_apply(state, math.pi)
    expected = np.roll(np.flip(state.amplitudes), 1)
    np.testing.assert_allclose(np.abs(flipped.amplitudes), np.abs(expected), atol=1e-12)


def test_quarter_matches_fourier(grid1):
    state = random_superposition(grid1, np.random.default_rng(2))
    np.testing.assert_allclose(
        frft_apply(state, math.pi / 2.0).amplitudes,
        fourier_apply(state).amplitudes,
        atol=1e-12,
    )


def test_fourier_inverse_round_trip(grid1):
    state = random_superposition(grid1, np.random.default_rng(3))
    back = fourier_apply(fourier_apply(state), inverse=True)
    assert l2_distance(back, state) < 1e-10


def test_additivity_sweep(grid1):
    worst = 0.0
    for i in range(20):
        rng = np.random.default_rng(100 + i)
        state = random_superposition(grid1, rng, max_components=3)
        theta1, theta2 = rng.uniform(-math.pi, math.pi, size=2)
        stepped = frft_apply(frft_apply(state, theta1), theta2)
        direct = frft_apply(state, wrap_angle(theta1 + theta2))
        worst = max(worst, l2_distance(stepped, direct))
    assert worst < 1e-5


def test_unitarity_drift(grid1):
    worst = 0.0
    for i in range(20):
        rng = np.random.default_rng(200 + i)
        state = random_superposition(grid1, rng, max_components=3)
        moved = frft_apply(state, rng.uniform(-math.pi, math.pi))
        worst = max(worst, abs(moved.meta.get("norm_drift", 0.0)))
    assert worst < 1e-6


def test_vacuum_density_invariant(grid1, vacuum1):
    # eigenstate of every fractional angle, up to a global phase
    for theta in (0.3, -1.1, 2.5):
        moved = frft_apply(vacuum1, theta)
        np.testing.assert_allclose(
            np.abs(moved.amplitudes) ** 2,
            np.abs(vacuum1.amplitudes) ** 2,
            atol=1e-10,
        )


def test_quarter_turn_phase_space_map(grid1):
    # (x0, p0) -> (p0, -x0) after a quarter rotation
    state = make_gaussian(grid1, center_x=2.0, center_p=1.0)
    moved = frft_apply(state, math.pi / 2.0)
    density = position_density(moved)
    centers = density.centers()
    mean = np.sum(centers * density.values) * density.spacing
    np.testing.assert_allclose(mean, 1.0, atol=1e-9)

    back = frft_apply(state, -math.pi / 2.0)
    density = position_density(back)
    mean = np.sum(density.centers() * density.values) * density.spacing
    np.testing.assert_allclose(mean, -1.0, atol=1e-9)


def test_core_window_composition(grid1):
    # small angles route through quarter-turn pre-composition; check a chain
    state = random_superposition(grid1, np.random.default_rng(4))
    tiny = 0.05
    stepped = state
    for _ in range(4):
        stepped = frft_apply(stepped, tiny)
    direct = frft_apply(state, 4 * tiny)
    assert l2_distance(stepped, direct) < 1e-6


def test_plan_cache_and_raw_apply(grid1):
    # plans exist only for core-range angles (|sin theta| >= 0.70)
    plan_a = frft_plan(grid1, 1.0)
    plan_b = frft_plan(grid1, 1.0)
    assert plan_a is plan_b
    with pytest.raises(ValueError):
        frft_plan(grid1, 0.1)

    raw = np.exp(-grid1.coords() ** 2)  # deliberately unnormalized
    forward = frft_plan(grid1, math.pi / 2.0).apply(raw, axis=0)
    back = frft_plan(grid1, -math.pi / 2.0).apply(forward, axis=0)
    np.testing.assert_allclose(back, raw, atol=1e-10)


def test_axis_selection(grid2, vacuum2):
    state = make_gaussian(grid2, center_x=(1.0, -2.0))
    moved = frft_apply(state, math.pi / 2.0, axis=1)
    # axis 0 untouched, axis 1 rotated to momentum (center_p = 0)
    d0 = position_density(moved, axis=0)
    mean0 = np.sum(d0.centers() * d0.values) * d0.spacing
    np.testing.assert_allclose(mean0, 1.0, atol=1e-9)
    d1 = position_density(moved, axis=1)
    mean1 = np.sum(d1.centers() * d1.values) * d1.spacing
    np.testing.assert_allclose(mean1, 0.0, atol=1e-9)

    joint = joint_density(moved)
    np.testing.assert_allclose(np.sum(joint) * grid2.cell_volume(), 1.0, atol=1e-9)
