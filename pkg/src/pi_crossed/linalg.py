# pi_crossed/linalg.py
"""
Dense complex-matrix substrate.

Everything here is a thin, pure wrapper around :mod:`numpy` / :mod:`scipy.linalg`.
Operator equality throughout the package is *spectral-norm residual ≤ eqTol*;
ranks are counts of singular values above ``rankTol``.  Spans of matrices use
the trace inner product ``⟨A, B⟩ = trace(A* B)`` (Frobenius on vectorised
matrices).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from pydantic import BaseModel, ConfigDict, Field

__all__ = [
    "DimensionMismatch",
    "Tolerance",
    "NormRank",
    "ExtendResult",
    "as_matrix",
    "compose",
    "adjoint",
    "spectral_norm",
    "norm_rank",
    "trace_inner",
    "orthonormal_extend",
    "project_out",
    "span_dimension",
]

logger = logging.getLogger(__name__)


class DimensionMismatch(ValueError):
    """Raised when matrix shapes are incompatible."""


class Tolerance(BaseModel):
    """Thresholds shared by every numeric decision."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    eq_tol: float = Field(default=1e-10, gt=0, alias="eqTol")
    rank_tol: float = Field(default=1e-8, gt=0, alias="rankTol")


@dataclass(frozen=True)
class NormRank:
    spec_norm: float
    rank: int


@dataclass(frozen=True)
class ExtendResult:
    basis: list[np.ndarray]
    added: bool
    residual: float


# ---------------------------------------------------------------------------
# Basic algebra
# ---------------------------------------------------------------------------

def as_matrix(a) -> np.ndarray:
    """Return *a* as a 2-D complex array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or 0 in m.shape:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product ``a @ b``."""
    if a.shape[1] != b.shape[0]:
        raise DimensionMismatch(f"cannot compose {a.shape} with {b.shape}")
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def _singular_values(a: np.ndarray) -> np.ndarray:
    # LinAlgError on non-convergence propagates to the caller
    return scipy.linalg.svd(a, compute_uv=False, lapack_driver="gesdd")


def spectral_norm(a: np.ndarray) -> float:
    """Largest singular value; exact ``0.0`` for an all-zero (or empty) matrix."""
    if a.size == 0 or not np.any(a):
        return 0.0
    return float(_singular_values(a)[0])


def norm_rank(a: np.ndarray, tol: Tolerance | None = None) -> NormRank:
    tol = tol or Tolerance()
    if a.size == 0 or not np.any(a):
        return NormRank(0.0, 0)
    sv = _singular_values(a)
    return NormRank(float(sv[0]), int(np.count_nonzero(sv > tol.rank_tol)))


def trace_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """``trace(a* b)``."""
    return complex(np.vdot(a, b))


# ---------------------------------------------------------------------------
# Gram-Schmidt under the trace inner product
# ---------------------------------------------------------------------------

def project_out(q: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Remove from vector *v* its component in the row space of orthonormal *q*.

    Two classical Gram-Schmidt sweeps; the second one restores orthogonality
    lost to cancellation.
    """
    if q.shape[0] == 0:
        return v
    for _ in range(2):
        v = v - q.T @ (np.conj(q) @ v)
    return v


def orthonormal_extend(
    basis: Sequence[np.ndarray],
    m: np.ndarray,
    tol: Tolerance | None = None,
) -> ExtendResult:
    """One Gram-Schmidt step of *m* against an orthonormal *basis*.

    ``added`` is true iff the orthogonal component has trace-norm above
    ``rankTol``; the normalised component is then appended.
    """
    tol = tol or Tolerance()
    shape = m.shape
    for b in basis:
        if b.shape != shape:
            raise DimensionMismatch(f"basis element {b.shape} vs candidate {shape}")

    q = (
        np.stack([b.ravel() for b in basis])
        if basis
        else np.zeros((0, m.size), dtype=np.complex128)
    )
    r = project_out(q, m.ravel().astype(np.complex128))
    residual = float(np.linalg.norm(r))
    if residual > tol.rank_tol:
        return ExtendResult([*basis, (r / residual).reshape(shape)], True, residual)
    return ExtendResult(list(basis), False, residual)


def span_dimension(mats: Sequence[np.ndarray], tol: Tolerance | None = None) -> int:
    """Dimension of the linear span of *mats* (numeric rank of the stacked vectors)."""
    if not mats:
        return 0
    stacked = np.stack([np.asarray(m, dtype=np.complex128).ravel() for m in mats])
    return norm_rank(stacked, tol).rank
