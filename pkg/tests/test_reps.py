# tests/test_reps.py
from dataclasses import replace

import numpy as np
import pytest

from pi_crossed.ops import Operator, grid_shift, indicator_projection, toeplitz_shift
from pi_crossed.reps import (
    Action,
    CovariantPair,
    NonMonotoneFamily,
    OutOfInterval,
    ProjectionFamily,
    check_covariance,
    faithfulness_witness,
    induced_rep,
    interval_J_sum,
    pi_from_V,
    range_difference_residual,
    rep_from_projections,
)
from pi_crossed.spaces import SemigroupElement, enumerate_semigroup


@pytest.fixture
def z():
    return enumerate_semigroup([1], 20)


def toeplitz_family(z, top=5):
    return {s: toeplitz_shift(z, s) for s in range(top + 1)}


class TestAction:
    def test_tau(self):
        assert Action("tau").apply(2, 3) == 5

    def test_tau_interval(self):
        closed = Action("tauI", 4, True)
        assert closed.apply(1, 3) == 4
        assert closed.apply(2, 3) is None
        assert Action("tauI", 4, False).apply(1, 3) is None

    def test_sigma(self):
        sigma = Action("sigma")
        assert sigma.apply(2, 5) == 3
        assert sigma.apply(4, 1) == 0
        assert sigma.unit_image(3) == 0

    def test_bad_kind(self):
        with pytest.raises(ValueError):
            Action("rho")
        with pytest.raises(ValueError):
            Action("tauI")


class TestProjectionReps:
    def test_faithful_iff_distinct(self, z):
        labels = tuple(range(0, 6))
        distinct = ProjectionFamily(labels, {r: indicator_projection(z, r) for r in labels})
        assert rep_from_projections(distinct).faithful
        collapsed = ProjectionFamily(labels, {r: indicator_projection(z, min(r, 2)) for r in labels})
        assert not rep_from_projections(collapsed).faithful

    def test_increasing_family_rejected(self, z):
        labels = (0, 1)
        fam = ProjectionFamily(labels, {0: indicator_projection(z, 1), 1: indicator_projection(z, 0)})
        with pytest.raises(NonMonotoneFamily):
            rep_from_projections(fam)

    def test_image_of_combination(self, z):
        labels = (0, 1)
        rep = rep_from_projections(ProjectionFamily(labels, {r: indicator_projection(z, r) for r in labels}))
        diff = rep.image({0: 1, 1: -1})
        assert np.array_equal(diff.matrix, (indicator_projection(z, 0) - indicator_projection(z, 1)).matrix)


class TestCovariance:
    def test_toeplitz_pair_is_covariant(self, z):
        report = check_covariance(pi_from_V(toeplitz_family(z)))
        assert report.covrep_ok and report.altcov_ok and report.agree
        assert report.unit == 0.0

    def test_grid_pair_is_covariant(self):
        pair = pi_from_V({p: grid_shift(12, "tau", p) for p in range(5)})
        report = check_covariance(pair)
        assert report.covrep_ok and report.altcov_ok

    def test_interval_pair_is_covariant(self):
        pair = pi_from_V(interval_J_sum(5, range(0, 8)), interval_spec=(5, True))
        report = check_covariance(pair)
        assert report.covrep_ok and report.altcov_ok

    def test_induced_pair_is_covariant(self):
        z = enumerate_semigroup([1], 12)
        pair = induced_rep(lambda t: [1, float(t <= 5), float(t <= 2)], z, 3, shifts=range(0, 5))
        report = check_covariance(pair)
        assert report.covrep_ok and report.altcov_ok

    def test_perturbed_V_fails_both(self, z):
        pair = pi_from_V(toeplitz_family(z, 4))
        v1 = pair.V[1]
        bumped = Operator(v1.matrix + 1e-3 * np.eye(v1.dim), v1.basis, v1.budget)
        report = check_covariance(replace(pair, V={**pair.V, 1: bumped}))
        assert not report.covrep_ok and not report.altcov_ok

    def test_perturbed_pi_fails_both(self, z):
        pair = pi_from_V(toeplitz_family(z, 4))
        p2 = pair.pi_images[2]
        bumped = Operator(p2.matrix + 1e-3 * np.eye(p2.dim), p2.basis, p2.budget)
        report = check_covariance(replace(pair, pi_images={**pair.pi_images, 2: bumped}))
        assert not report.covrep_ok and not report.altcov_ok

    def test_missing_unit_rejected(self, z):
        v = {s: toeplitz_shift(z, s) for s in range(1, 4)}
        with pytest.raises(ValueError):
            check_covariance(CovariantPair({}, v))

    def test_interval_rejects_nonzero_outside(self, z):
        with pytest.raises(OutOfInterval):
            pi_from_V(toeplitz_family(z, 4), interval_spec=(2, True))

    def test_range_difference_identity(self, z):
        assert range_difference_residual(toeplitz_family(z)) == 0.0
        assert range_difference_residual(interval_J_sum(4, range(0, 6))) == 0.0


class TestFaithfulness:
    def test_grid_witness(self):
        v = {p: grid_shift(16, "tau", p) for p in range(7)}
        result = faithfulness_witness(v, range(1, 4), range(0, 4))
        assert result.ok
        assert result.min_norm == pytest.approx(1.0)

    def test_isometries_fail(self, z):
        result = faithfulness_witness(toeplitz_family(z, 6), range(1, 4), range(0, 4))
        assert not result.ok

    def test_empty_range(self, z):
        with pytest.raises(ValueError):
            faithfulness_witness(toeplitz_family(z), [0], range(0, 3))

    def test_interval_sum_has_all_blocks(self):
        fam = interval_J_sum(3, range(0, 5))
        assert fam[0].dim == 1 + 2 + 3 + 4
        assert not np.any(fam[4].matrix)
        assert fam[0].basis == fam[1].basis


def test_semigroup_labels_work_as_keys(z):
    fam = {SemigroupElement.of(s): op for s, op in toeplitz_family(z, 3).items()}
    report = check_covariance(pi_from_V(fam, index_set=z))
    assert report.covrep_ok
