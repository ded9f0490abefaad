# pi_crossed/algebra.py
"""
Span-closure engine for finite-dimensional *-algebras of matrices, plus the
dimension and decomposition statements built on it.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from pi_crossed.linalg import DimensionMismatch, Tolerance, norm_rank, project_out
from pi_crossed.ops import (
    Operator,
    TruncationError,
    direct_sum,
    embed,
    guarded_residual,
    matrix_unit,
    toeplitz_shift,
    truncated_J,
    truncated_K,
)
from pi_crossed.spaces import (
    IndexSet,
    SemigroupElement,
    enumerate_group_cone,
    enumerate_semigroup,
    interval,
    parse_element,
)

__all__ = [
    "AlgebraBasis",
    "Membership",
    "JKReport",
    "generate",
    "contains",
    "truncated_shift",
    "truncated_shift_sum",
    "commutator_ideal_span",
    "commutator_ideal_cases",
    "jk_decomposition_check",
    "rank_growth_K",
]

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 1600


@dataclass(frozen=True)
class AlgebraBasis:
    """Orthonormal basis (trace inner product) of a span of matrices.

    When ``columns`` is set, every element was restricted to those columns
    (the guard band for ``guard_budget``) before orthonormalisation.
    """

    ambient_dim: int
    basis: tuple[np.ndarray, ...]
    converged: bool
    iterations: int
    columns: np.ndarray | None = None
    guard_budget: object = None

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def stacked(self) -> np.ndarray:
        if not self.basis:
            size = self.ambient_dim * (self.ambient_dim if self.columns is None else self.columns.size)
            return np.zeros((0, size), dtype=np.complex128)
        return np.stack([b.ravel() for b in self.basis])


@dataclass(frozen=True)
class Membership:
    residual: float
    member: bool


class _Span:
    """Incrementally orthonormalised span of same-shape matrices."""

    def __init__(self, shape: tuple[int, int], tol: Tolerance) -> None:
        self.shape = shape
        self.tol = tol
        self.mats: list[np.ndarray] = []
        self._rows: list[np.ndarray] = []
        self._q = np.zeros((0, shape[0] * shape[1]), dtype=np.complex128)

    def add(self, m: np.ndarray) -> bool:
        if m.shape != self.shape:
            raise DimensionMismatch(f"{m.shape} vs {self.shape}")
        r = project_out(self._q, m.ravel().astype(np.complex128))
        norm = float(np.linalg.norm(r))
        if norm <= self.tol.rank_tol:
            return False
        r = r / norm
        self._rows.append(r)
        self._q = np.vstack([self._q, r[None, :]])
        self.mats.append(r.reshape(self.shape))
        return True

    def __len__(self) -> int:
        return len(self.mats)


def generate(
    gens: Sequence[Operator],
    max_dim: int = DEFAULT_MAX_DIM,
    tol: Tolerance | None = None,
) -> AlgebraBasis:
    """Orthonormal basis of the (non-unital) *-algebra generated by *gens*.

    Starts from ``gens ∪ gens*`` and adds pairwise products of basis elements
    until a full pass adds nothing.  A *-closed spanning set stays *-closed
    under products, so adjoints are only needed for the generators.
    """
    tol = tol or Tolerance()
    if not gens:
        raise ValueError("no generators")
    n = gens[0].dim
    for g in gens:
        if g.dim != n:
            raise DimensionMismatch("generators must share an ambient dimension")

    span = _Span((n, n), tol)
    for g in gens:
        span.add(g.matrix)
        span.add(np.conj(g.matrix).T)

    iterations = 0
    done = 0  # products among the first `done` elements are already in the span
    while True:
        iterations += 1
        size = len(span)
        grew = False
        for i in range(size):
            for j in range(size):
                if i < done and j < done:
                    continue
                if span.add(span.mats[i] @ span.mats[j]):
                    grew = True
                    if len(span) > max_dim:
                        logger.warning("generate: dimension exceeded max_dim=%d", max_dim)
                        return AlgebraBasis(n, tuple(span.mats), False, iterations)
        done = size
        logger.debug("generate pass %d: dimension %d", iterations, len(span))
        if not grew:
            return AlgebraBasis(n, tuple(span.mats), True, iterations)


def contains(ab: AlgebraBasis, a: Operator, tol: Tolerance | None = None) -> Membership:
    """Distance (trace norm) from *a* to the span; member iff ``≤ rankTol·‖a‖``."""
    tol = tol or Tolerance()
    if a.dim != ab.ambient_dim:
        raise DimensionMismatch(f"operator of dim {a.dim} vs algebra on {ab.ambient_dim}")
    m = a.matrix
    if ab.columns is not None:
        if ab.guard_budget is not None and a.budget > ab.guard_budget:
            raise TruncationError(f"budget {a.budget!r} exceeds the span's guard budget {ab.guard_budget!r}")
        m = m[:, ab.columns]
    v = m.ravel().astype(np.complex128)
    scale = float(np.linalg.norm(v))
    residual = float(np.linalg.norm(project_out(ab.stacked(), v)))
    return Membership(residual, residual <= tol.rank_tol * max(scale, 1e-300) or scale == 0.0)


# ---------------------------------------------------------------------------
# Truncated shifts J_k
# ---------------------------------------------------------------------------

def truncated_shift(k: int) -> Operator:
    """``J_k`` on ``ℂ^{k+1}``: ``e_j ↦ e_{j+1}``, last basis vector killed."""
    z = enumerate_semigroup([1], max(k, 1))
    return direct_sum([truncated_J(z, k, 1)])


def truncated_shift_sum(n: int, start: int = 1) -> Operator:
    """``⊕_{start ≤ k ≤ n} J_k``."""
    z = enumerate_semigroup([1], max(n, 1))
    return direct_sum([truncated_J(z, k, 1) for k in range(start, n + 1)])


# ---------------------------------------------------------------------------
# Commutator ideal of the Toeplitz algebra
# ---------------------------------------------------------------------------

def _ideal_element(index_set: IndexSet, r, u, t) -> Operator:
    tr, tu, tt = (toeplitz_shift(index_set, x) for x in (r, u, t))
    ident = Operator.identity(tr.basis)
    return tr @ (ident - tu @ tu.adjoint()) @ tt.adjoint()


def commutator_ideal_span(
    index_set: IndexSet,
    r_range: Sequence,
    u_range: Sequence,
    t_range: Sequence,
    guard_budget=None,
    tol: Tolerance | None = None,
) -> AlgebraBasis:
    """Span of ``T_r(1 − T_uT_u*)T_t*`` restricted to a common guard band."""
    tol = tol or Tolerance()
    elements = [
        _ideal_element(index_set, r, u, t) for r in r_range for u in u_range for t in t_range
    ]
    if guard_budget is None:
        guard_budget = max(e.budget for e in elements)
    guard_budget = parse_element(guard_budget)
    basis = elements[0].basis
    columns = basis.guard(guard_budget)
    if columns.size == 0:
        raise TruncationError("commutator ideal span: empty guard band")

    n = len(basis)
    span = _Span((n, columns.size), tol)
    for e in elements:
        if e.budget > guard_budget:
            raise TruncationError("spanning element exceeds the guard budget")
        span.add(np.ascontiguousarray(e.matrix[:, columns]))
    return AlgebraBasis(n, tuple(span.mats), True, 1, columns, guard_budget)


def commutator_ideal_cases(
    index_set: IndexSet,
    span: AlgebraBasis,
    s_values: Sequence,
    r_range: Sequence,
    u_range: Sequence,
    t_range: Sequence,
    tol: Tolerance | None = None,
) -> dict[str, float]:
    """Residuals of the ideal's closure cases.

    ``shift_down``, ``absorb``, ``vanish``: the three reductions of
    ``T_s*·T_r(1 − T_uT_u*)T_t*`` as operator identities.  ``left`` and
    ``right``: worst distance from the span of all products with ``T_s``,
    ``T_s*`` on either side.  ``projections``: worst distance of ``1 − T_uT_u*``.
    """
    tol = tol or Tolerance()
    out = dict.fromkeys(("shift_down", "absorb", "vanish", "left", "right", "projections"), 0.0)
    ident = Operator.identity(toeplitz_shift(index_set, 0).basis)

    for u in u_range:
        if not u:
            continue
        tu = toeplitz_shift(index_set, u)
        out["projections"] = max(out["projections"], contains(span, ident - tu @ tu.adjoint(), tol).residual)

    for s in s_values:
        s = parse_element(s)
        ts = toeplitz_shift(index_set, s)
        for r in r_range:
            for u in u_range:
                for t in t_range:
                    r_, u_, t_ = (parse_element(x) for x in (r, u, t))
                    x = _ideal_element(index_set, r_, u_, t_)
                    lhs = ts.adjoint() @ x
                    if r_ >= s:
                        key, rhs = "shift_down", _ideal_element(index_set, r_ - s, u_, t_)
                    elif s - r_ < u_:
                        key = "absorb"
                        rhs = _ideal_element(index_set, 0, u_ - (s - r_), s - r_ + t_)
                    else:
                        key, rhs = "vanish", Operator.zeros(lhs.basis)
                    out[key] = max(out[key], guarded_residual(lhs, rhs))

                    for side, products in (
                        ("left", (ts @ x, ts.adjoint() @ x)),
                        ("right", (x @ ts, x @ ts.adjoint())),
                    ):
                        for p in products:
                            out[side] = max(out[side], contains(span, p, tol).residual)
    return out


# ---------------------------------------------------------------------------
# J^s = K^s + compacts
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JKReport:
    decomposition: float
    matrix_units: float
    dimension: int | None
    expected_dimension: int | None

    @property
    def residual(self) -> float:
        gap = 0.0
        if self.expected_dimension is not None:
            gap = float(abs((self.dimension or 0) - self.expected_dimension))
        return max(self.decomposition, self.matrix_units, gap)


def jk_decomposition_check(
    index_set: IndexSet,
    s,
    extra_t: Sequence = (),
    tol: Tolerance | None = None,
) -> JKReport:
    """``J^s_t = K^s_t + ε_s⊗ε̄_{s−t}``, the J-word for every matrix unit on ``[0,s]``,
    and (over Γ = ℤ) ``dim C*(J^s) = |[0,s]|²``.

    *extra_t* adds parameters ``t > s`` for which both sides must vanish.
    """
    tol = tol or Tolerance()
    s = parse_element(s)
    labels = interval(index_set, s, closed=True)
    j_basis = truncated_J(index_set, s, 0).basis

    decomposition = 0.0
    for t in [*labels, *(parse_element(x) for x in extra_t)]:
        j = truncated_J(index_set, s, t)
        k = embed(truncated_K(index_set, s, t), j_basis)
        if t <= s and (s - t) in j_basis:
            expected = matrix_unit(j_basis, s, s - t)
        else:
            expected = Operator.zeros(j_basis)
        decomposition = max(decomposition, guarded_residual(j - k, expected))

    js = truncated_J(index_set, s, s)
    corner = js @ js.adjoint()
    units = 0.0
    for r in labels:
        for t in labels:
            word = truncated_J(index_set, s, s - r).adjoint() @ corner @ truncated_J(index_set, s, s - t)
            units = max(units, guarded_residual(word, matrix_unit(j_basis, r, t)))

    dimension = expected = None
    if index_set.generators == (SemigroupElement.of(1),):
        dimension = generate([truncated_J(index_set, s, 1)], tol=tol).dimension
        expected = len(labels) ** 2
    return JKReport(decomposition, units, dimension, expected)


def rank_growth_K(gens: Sequence, s, t, depths: Sequence[int], tol: Tolerance | None = None) -> list[int]:
    """Numeric rank of ``K^s_t`` on windows of the cone of increasing depth."""
    tol = tol or Tolerance()
    ranks = []
    for depth in depths:
        window = enumerate_group_cone(gens, depth, s)
        ranks.append(norm_rank(truncated_K(window, s, t).matrix, tol).rank)
    logger.debug("rank growth of K^%r_%r over depths %s: %s", s, t, list(depths), ranks)
    return ranks
