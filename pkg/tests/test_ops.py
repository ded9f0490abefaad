# tests/test_ops.py
import numpy as np
import pytest

from pi_crossed.linalg import DimensionMismatch, spectral_norm
from pi_crossed.ops import (
    FlatBasis,
    GridBasis,
    NotAPartialIsometry,
    NotAProjection,
    Operator,
    TruncationError,
    compress,
    direct_sum,
    embed,
    grid_shift,
    guarded_norm,
    guarded_residual,
    indicator_projection,
    is_partial_isometry,
    matrix_unit,
    product_pi_criterion,
    random_partial_isometry,
    semigroup_rep_check,
    toeplitz_shift,
    truncated_J,
    truncated_K,
)
from pi_crossed.spaces import SemigroupElement, enumerate_semigroup

E = SemigroupElement.of


@pytest.fixture
def z():
    return enumerate_semigroup([1], 12)


class TestToeplitz:
    def test_shift_moves_labels(self, z):
        t2 = toeplitz_shift(z, 2)
        assert t2.matrix[z.index(E(5)), z.index(E(3))] == 1
        assert t2.budget == 2
        # the top labels fall off the truncation
        assert not np.any(t2.matrix[:, z.index(E(11))])

    def test_isometry_on_guard_band(self, z):
        t3 = toeplitz_shift(z, 3)
        assert guarded_residual(t3.adjoint() @ t3, Operator.identity(t3.basis)) == 0.0
        # without the guard band the truncation is not an isometry
        assert spectral_norm((t3.adjoint() @ t3).matrix - np.eye(len(z))) == pytest.approx(1.0)

    def test_semigroup_law(self, z):
        v = {s: toeplitz_shift(z, s) for s in range(0, 5)}
        assert semigroup_rep_check(v, z).max_residual == 0.0

    def test_indicator_is_range_projection(self, z):
        t4 = toeplitz_shift(z, 4)
        assert guarded_residual(indicator_projection(z, 4), t4 @ t4.adjoint()) == 0.0

    def test_shift_past_cutoff(self, z):
        with pytest.raises(Exception):
            toeplitz_shift(z, 20)


class TestIntervalShifts:
    def test_J_and_K_shapes(self, z):
        assert truncated_J(z, 4, 1).dim == 5
        assert truncated_K(z, 4, 1).dim == 4

    def test_J_nilpotent(self, z):
        j = truncated_J(z, 4, 1)
        assert spectral_norm(j.power(5).matrix) == 0.0
        assert spectral_norm(j.power(4).matrix) == pytest.approx(1.0)

    def test_zero_beyond_interval(self, z):
        assert not np.any(truncated_J(z, 3, 4).matrix)
        assert not np.any(truncated_K(z, 3, 3).matrix)

    def test_J_family_is_a_rep(self, z):
        fam = {t: truncated_J(z, 5, t) for t in range(0, 8)}
        report = semigroup_rep_check(fam)
        assert report.max_residual == 0.0


class TestGrid:
    def test_tau_moves_diagonally(self):
        tau = grid_shift(6, "tau", 2)
        basis = tau.basis
        assert tau.matrix[basis.index((3, 1)), basis.index((1, 3))] == 1
        assert not np.any(tau.matrix[:, basis.index((1, 1))])

    def test_sigma_lowers_second_coordinate(self):
        sigma = grid_shift(6, "sigma", 1)
        assert sigma.matrix[sigma.basis.index((2, 0)), sigma.basis.index((2, 1))] == 1

    def test_sigma_coisometry_holds_on_guard_only(self):
        sigma = grid_shift(6, "sigma", 2)
        assert sigma.budget == 2
        ssa = sigma @ sigma.adjoint()
        identity = Operator.identity(sigma.basis)
        assert guarded_residual(ssa, identity) == 0.0
        # σ* leaves the window on the top rows
        assert spectral_norm((ssa - identity).matrix) == pytest.approx(1.0)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            grid_shift(4, "rho", 1)

    def test_guard_band(self):
        basis = GridBasis(4)
        assert basis.guard(2).size == 9
        assert basis.guard(5).size == 0


class TestConstructions:
    def test_matrix_unit_and_direct_sum(self):
        a = matrix_unit(FlatBasis(2), 1, 0)
        b = matrix_unit(FlatBasis(3), 0, 2)
        s = direct_sum([a, b])
        assert s.dim == 5
        assert s.matrix[1, 0] == 1 and s.matrix[2, 4] == 1

    def test_direct_sum_rejects_truncations(self, z):
        with pytest.raises(TruncationError):
            direct_sum([toeplitz_shift(z, 1)])

    def test_compress_restricts_to_range(self, z):
        t2 = toeplitz_shift(z, 2)
        corner = Operator.identity(t2.basis) - t2 @ t2.adjoint()
        squeezed = compress(corner, toeplitz_shift(z, 1))
        assert np.array_equal(squeezed.matrix, truncated_K(z, 2, 1).matrix)

    def test_compress_needs_projection(self):
        basis = FlatBasis(2)
        with pytest.raises(NotAProjection):
            compress(Operator(2 * np.eye(2), basis), Operator.identity(basis))

    def test_embed(self, z):
        k = truncated_K(z, 3, 1)
        big = embed(k, truncated_J(z, 3, 0).basis)
        assert big.dim == 4
        assert np.array_equal(big.matrix[:3, :3], k.matrix)

    def test_mismatched_bases(self):
        with pytest.raises(DimensionMismatch):
            Operator.identity(FlatBasis(2)) @ Operator.identity(FlatBasis(3))

    def test_empty_guard_band_raises(self):
        op = grid_shift(3, "tau", 4)
        with pytest.raises(TruncationError):
            guarded_norm(op)


class TestPredicates:
    def test_random_partial_isometries(self):
        rng = np.random.default_rng(7)
        for dim in range(2, 9):
            assert is_partial_isometry(random_partial_isometry(rng, dim)).ok

    def test_scaled_unit_is_not_partial_isometry(self):
        assert not is_partial_isometry(Operator(0.5 * np.eye(2), FlatBasis(2))).ok

    def test_criterion_on_commuting_pair(self):
        basis = FlatBasis(3)
        s = matrix_unit(basis, 0, 1)
        t = matrix_unit(basis, 1, 2)
        crit = product_pi_criterion(s, t)
        assert crit.product_is_pi and crit.comm_norm == 0.0 and crit.agree

    def test_criterion_on_noncommuting_pair(self):
        basis = FlatBasis(2)
        h = np.array([[1.0, 1.0], [1.0, 1.0]]) / 2
        s = Operator(h, basis)
        t = matrix_unit(basis, 0, 0)
        crit = product_pi_criterion(s, t)
        assert not crit.product_is_pi
        assert crit.comm_norm > 0.1
        assert crit.agree

    def test_criterion_requires_partial_isometries(self):
        basis = FlatBasis(2)
        with pytest.raises(NotAPartialIsometry):
            product_pi_criterion(Operator(0.3 * np.ones((2, 2)), basis), Operator.identity(basis))
