# tests/test_linalg.py
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pi_crossed.linalg import (
    DimensionMismatch,
    Tolerance,
    as_matrix,
    compose,
    norm_rank,
    orthonormal_extend,
    span_dimension,
    spectral_norm,
    trace_inner,
)


class TestTolerance:
    def test_defaults(self):
        tol = Tolerance()
        assert tol.eq_tol == 1e-10
        assert tol.rank_tol == 1e-8

    def test_aliases(self):
        tol = Tolerance.model_validate({"eqTol": 1e-6, "rankTol": 1e-4})
        assert (tol.eq_tol, tol.rank_tol) == (1e-6, 1e-4)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            Tolerance(eq_tol=0.0)


class TestBasics:
    def test_as_matrix_rejects_vectors_and_nan(self):
        with pytest.raises(DimensionMismatch):
            as_matrix(np.ones(3))
        with pytest.raises(ValueError):
            as_matrix([[1.0, np.nan]])

    def test_compose_checks_shapes(self):
        with pytest.raises(DimensionMismatch):
            compose(np.ones((2, 3)), np.ones((2, 3)))

    def test_spectral_norm_of_zero_is_exact(self):
        assert spectral_norm(np.zeros((4, 4))) == 0.0

    def test_spectral_norm_of_diagonal(self):
        assert spectral_norm(np.diag([1.0, -3.0, 2.0])) == pytest.approx(3.0)

    def test_norm_rank(self):
        a = np.diag([2.0, 1.0, 1e-12])
        nr = norm_rank(a)
        assert nr.rank == 2
        assert nr.spec_norm == pytest.approx(2.0)

    def test_trace_inner(self):
        a = np.array([[1j, 0], [0, 1]])
        assert trace_inner(a, a) == pytest.approx(2.0)


class TestSpans:
    def test_orthonormal_extend_adds_new_direction(self):
        e = np.eye(2)
        first = orthonormal_extend([], e)
        assert first.added and first.residual == pytest.approx(np.sqrt(2))
        again = orthonormal_extend(first.basis, 3 * e)
        assert not again.added
        assert len(again.basis) == 1

    def test_orthonormal_extend_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            orthonormal_extend([np.eye(2)], np.eye(3))

    def test_matrix_units_span_full_algebra(self):
        units = []
        for i in range(3):
            for j in range(3):
                m = np.zeros((3, 3))
                m[i, j] = 1
                units.append(m)
        assert span_dimension(units) == 9
        assert span_dimension(units + [np.ones((3, 3))]) == 9
        assert span_dimension([]) == 0

    @given(st.integers(1, 6), st.integers(0, 2**32 - 1))
    def test_span_of_dependent_family(self, n, seed):
        rng = np.random.default_rng(seed)
        mats = [rng.standard_normal((3, 3)) for _ in range(n)]
        combos = [sum(c * m for c, m in zip(rng.standard_normal(n), mats)) for _ in range(3)]
        assert span_dimension(mats + combos) == span_dimension(mats)
