import math

import numpy as np
import pytest

from cventropic import (
    GridSpec,
    PureEnsemble,
    QuadratureOp,
    ResolutionError,
    commutator_value,
    differential_entropy,
    distribution_of,
    frft_apply,
    global_rotate,
    joint_density,
    local_rotate,
    make_gaussian,
    make_vacuum,
    momentum_op,
    position_op,
    random_quadrature_pair,
    random_superposition,
    reduce_pair,
    rotate_state_2d,
    rotation_matrix,
    symplectic_form,
    variance,
)


def density_l1(d_a, d_b):
    # compare two gridded densities on d_a's support
    centers = d_a.centers()
    other = np.interp(
        centers, d_b.centers(), d_b.values, left=0.0, right=0.0
    )
    return float(np.sum(np.abs(d_a.values - other)) * d_a.spacing)


def test_op_parts_and_algebra():
    op = QuadratureOp((2.0, 1.0, 0.0, -3.0))
    assert op.n == 2
    np.testing.assert_array_equal(op.x_part(), [2.0, 0.0])
    np.testing.assert_array_equal(op.p_part(), [1.0, -3.0])
    total = op + QuadratureOp((0.0, 0.0, 1.0, 3.0))
    np.testing.assert_array_equal(total.coefficients, (2.0, 1.0, 1.0, 0.0))
    np.testing.assert_array_equal((op * 2.0).coefficients, (4.0, 2.0, 0.0, -6.0))
    assert QuadratureOp((0.0, 0.0)).is_zero()
    rebuilt = QuadratureOp.from_parts([2.0, 0.0], [1.0, -3.0])
    np.testing.assert_array_equal(rebuilt.coefficients, op.coefficients)


def test_commutator_oracles():
    np.testing.assert_allclose(commutator_value(position_op(), momentum_op()), 1.0)
    np.testing.assert_allclose(commutator_value(momentum_op(), position_op()), -1.0)
    a = QuadratureOp((2.0, 1.0))
    b = QuadratureOp((1.0, -1.0))
    np.testing.assert_allclose(commutator_value(a, b), -3.0)
    # commuting pair
    np.testing.assert_allclose(
        commutator_value(position_op(2, 0), position_op(2, 1)), 0.0
    )


def test_symplectic_form_blocks():
    omega = symplectic_form(2)
    assert omega.shape == (4, 4)
    np.testing.assert_array_equal(omega, -omega.T)
    np.testing.assert_array_equal(omega[0:2, 0:2], [[0.0, 1.0], [-1.0, 0.0]])
    np.testing.assert_array_equal(omega @ omega, -np.eye(4))


def test_rotations_preserve_commutator(rng):
    for n in (1, 2):
        for _ in range(10):
            op_a, op_b = random_quadrature_pair(n, rng)
            kappa = commutator_value(op_a, op_b)
            angles = tuple(rng.uniform(-math.pi, math.pi, size=n))
            rotated = commutator_value(
                local_rotate(op_a, angles), local_rotate(op_b, angles)
            )
            np.testing.assert_allclose(rotated, kappa, atol=1e-12)
            if n == 2:
                rot = rotation_matrix(rng.uniform(-math.pi, math.pi))
                swept = commutator_value(
                    global_rotate(op_a, rot), global_rotate(op_b, rot)
                )
                np.testing.assert_allclose(swept, kappa, atol=1e-12)


def test_global_rotate_rejects_non_orthogonal():
    with pytest.raises(ValueError):
        global_rotate(position_op(2, 0), np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_reduce_pair_canonical_form(rng):
    for _ in range(20):
        op_a, op_b = random_quadrature_pair(2, rng)
        reduced = reduce_pair(op_a, op_b)
        kappa = commutator_value(op_a, op_b)
        np.testing.assert_allclose(
            commutator_value(reduced.op_a, reduced.op_b), kappa, atol=1e-10
        )
        # op_b collapses to c_b x_1
        np.testing.assert_allclose(
            reduced.op_b.coefficients,
            (reduced.c_b, 0.0, 0.0, 0.0),
            atol=1e-10,
        )
        # op_a keeps no momentum on the tail mode
        np.testing.assert_allclose(reduced.op_a.p_part()[1], 0.0, atol=1e-10)
        # forward map reproduces the canonical operators
        np.testing.assert_allclose(
            reduced.apply_forward(op_a).coefficients,
            reduced.op_a.coefficients,
            atol=1e-10,
        )
        np.testing.assert_allclose(
            reduced.apply_inverse(reduced.op_b).coefficients,
            op_b.coefficients,
            atol=1e-10,
        )


def test_vacuum_quadrature_distribution(grid1, vacuum1):
    # every unit quadrature of the vacuum is N(0, 1/2)
    for theta in (0.0, 0.4, math.pi / 2.0, 2.2):
        op = QuadratureOp((math.cos(theta), math.sin(theta)))
        density = distribution_of(vacuum1, op)
        centers = density.centers()
        expected = np.exp(-(centers**2)) / math.sqrt(math.pi)
        np.testing.assert_allclose(density.values, expected, atol=1e-9)


def test_distribution_scaling(grid1, vacuum1):
    base = distribution_of(vacuum1, position_op())
    doubled = distribution_of(vacuum1, position_op() * 2.0)
    np.testing.assert_allclose(
        variance(doubled).value, 4.0 * variance(base).value, rtol=1e-9
    )
    h_base = differential_entropy(base).value
    h_doubled = differential_entropy(doubled).value
    np.testing.assert_allclose(h_doubled - h_base, math.log(2.0), atol=1e-9)


def test_two_mode_balanced_sum(grid2, vacuum2):
    # (x1 + x2)/sqrt(2) of the two-mode vacuum is again N(0, 1/2)
    op = QuadratureOp((1.0 / math.sqrt(2.0), 0.0, 1.0 / math.sqrt(2.0), 0.0))
    density = distribution_of(vacuum2, op)
    np.testing.assert_allclose(variance(density).value, 0.5, atol=1e-9)
    np.testing.assert_allclose(
        differential_entropy(density).value, 1.0723649429247002, atol=1e-9
    )


def test_mixed_basis_two_mode_sum(grid2, vacuum2):
    # x1 + p2 on the product vacuum: variance 1/2 + 1/2
    op = QuadratureOp((1.0, 0.0, 0.0, 1.0))
    density = distribution_of(vacuum2, op)
    np.testing.assert_allclose(variance(density).value, 1.0, atol=1e-9)


def test_single_mode_op_on_product_state(grid2):
    # a one-mode quadrature of a product state matches the 1-D computation
    grid1 = GridSpec(grid2.points_per_axis, grid2.half_extent, 1)
    state2 = make_gaussian(grid2, center_x=(1.0, -0.5), squeeze=(2.0, 0.5))
    state1 = make_gaussian(grid1, center_x=1.0, squeeze=2.0)
    op2 = QuadratureOp((math.cos(0.7), math.sin(0.7), 0.0, 0.0))
    op1 = QuadratureOp((math.cos(0.7), math.sin(0.7)))
    d2 = distribution_of(state2, op2)
    d1 = distribution_of(state1, op1)
    assert density_l1(d1, d2) < 1e-9


def test_brute_force_projection_cross_check(small_grid2):
    # independent oracle: bin u.(x1, x2) over subdivided joint probability masses
    state = make_gaussian(small_grid2, center_x=(0.8, -0.6), squeeze=(1.5, 0.7))
    direction = np.array([math.cos(0.5), math.sin(0.5)])
    op = QuadratureOp((direction[0], 0.0, direction[1], 0.0))
    spectral = distribution_of(state, op)

    # bins of two spectral cells each, edges half a cell left of each even sample
    d = spectral.spacing
    n_pairs = spectral.values.size // 2
    edges = (spectral.support_min - 0.5 * d) + 2.0 * d * np.arange(n_pairs + 1)
    spec_mass = (spectral.values[0::2] + spectral.values[1::2]) * d

    # split each grid cell into k x k subcells so projected mass lands in the
    # right bin (a whole cell projects onto a span wider than half a bin)
    k = 8
    coords = small_grid2.coords()
    masses = joint_density(state) * small_grid2.cell_volume()
    offsets = (np.arange(k) + 0.5) / k - 0.5
    sub = (coords[:, None] + offsets[None, :] * small_grid2.spacing).ravel()
    submass = np.repeat(np.repeat(masses, k, axis=0), k, axis=1) / (k * k)
    projected = np.add.outer(direction[0] * sub, direction[1] * sub)
    brute, _ = np.histogram(projected.ravel(), bins=edges, weights=submass.ravel())

    assert float(np.sum(np.abs(brute - spec_mass))) < 5e-3


def test_local_rotation_invariance(grid2):
    # rotating each mode and the operator together leaves the distribution fixed
    state = make_gaussian(grid2, center_x=(1.0, -0.8), squeeze=(2.0, 0.8))
    op = QuadratureOp((0.9, 0.3, -0.4, 0.7))
    base = distribution_of(state, op)
    angles = (0.6, -1.1)
    moved = frft_apply(frft_apply(state, angles[0], axis=0), angles[1], axis=1)
    rotated = distribution_of(moved, local_rotate(op, angles))
    assert density_l1(base, rotated) < 1e-4


def test_global_rotation_invariance(grid2):
    state = make_gaussian(grid2, center_x=(0.9, -0.7), squeeze=(1.4, 0.75))
    op = QuadratureOp((0.8, 0.1, 0.5, -0.2))
    base = distribution_of(state, op)
    theta = 0.85
    rotated = distribution_of(
        rotate_state_2d(state, theta), global_rotate(op, rotation_matrix(theta))
    )
    assert density_l1(base, rotated) < 1e-3


def test_rotate_state_round_trip(grid2):
    state = make_gaussian(grid2, center_x=(1.0, 0.5), squeeze=(1.5, 0.8))
    back = rotate_state_2d(rotate_state_2d(state, 0.7), -0.7)
    volume = grid2.cell_volume()
    err = math.sqrt(np.sum(np.abs(back.amplitudes - state.amplitudes) ** 2) * volume)
    assert err < 1e-9


def test_rotate_state_quarter_turn(grid2):
    state = make_gaussian(grid2, center_x=(2.0, 0.0))
    turned = rotate_state_2d(state, math.pi / 2.0)
    # psi'(y) = psi(R(theta) y): center moves from (2, 0) to R(-theta)(2, 0) = (0, -2)
    from cventropic import position_density

    d0 = position_density(turned, axis=0)
    d1 = position_density(turned, axis=1)
    mean0 = np.sum(d0.centers() * d0.values) * d0.spacing
    mean1 = np.sum(d1.centers() * d1.values) * d1.spacing
    np.testing.assert_allclose(mean0, 0.0, atol=1e-9)
    np.testing.assert_allclose(mean1, -2.0, atol=1e-9)


def test_rotate_vacuum_invariant(grid2, vacuum2):
    turned = rotate_state_2d(vacuum2, 0.9)
    np.testing.assert_allclose(
        np.abs(turned.amplitudes) ** 2,
        np.abs(vacuum2.amplitudes) ** 2,
        atol=1e-10,
    )


def test_corner_mass_guard():
    from cventropic import EdgeMassWarning

    grid = GridSpec(128, 6.0, 2)
    # per-axis support fits, but the diagonal displacement parks mass
    # outside the inscribed circle: a rotation would wrap it
    with pytest.warns(EdgeMassWarning):
        state = make_gaussian(grid, center_x=(2.4, 2.4))
    with pytest.raises(ResolutionError):
        rotate_state_2d(state, 0.5)


def test_ensemble_distribution_is_mixture(grid1):
    state_a = make_gaussian(grid1, center_x=-1.0)
    state_b = make_gaussian(grid1, center_x=1.0)
    ensemble = PureEnsemble(((0.3, state_a), (0.7, state_b)))
    op = position_op()
    mix = distribution_of(ensemble, op)
    expected = 0.3 * distribution_of(state_a, op).values + 0.7 * distribution_of(
        state_b, op
    ).values
    np.testing.assert_allclose(mix.values, expected, atol=1e-12)


def test_zero_direction_rejected(vacuum1):
    with pytest.raises(ValueError):
        distribution_of(vacuum1, QuadratureOp((0.0, 0.0)))


def test_random_pair_properties(rng):
    for n in (1, 2):
        for _ in range(10):
            op_a, op_b = random_quadrature_pair(n, rng, min_commutator=0.2)
            assert op_a.n == n and op_b.n == n
            assert abs(commutator_value(op_a, op_b)) >= 0.2

    one = random_quadrature_pair(2, np.random.default_rng(5))
    two = random_quadrature_pair(2, np.random.default_rng(5))
    np.testing.assert_array_equal(one[0].coefficients, two[0].coefficients)
    np.testing.assert_array_equal(one[1].coefficients, two[1].coefficients)
