# pi_crossed/ops.py
"""
Concrete operator families on finite truncations of ℓ²(Γ⁺), ℓ²([0,s]) and
the grid ℓ²(ℕ×ℕ), together with the partial-isometry predicates.

Every :class:`Operator` carries a *shift budget*: the total translation
distance (forward plus backward) used to build it.  Truncation only ever
kills basis vectors that a shift pushes past the cutoff, so an identity
between two operators is trustworthy on the labels that sit at least one
budget away from the boundary: the guard band.  Budgets add under products
and take the maximum under sums.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Mapping, Sequence, Union

import numpy as np

from pi_crossed.linalg import (
    DimensionMismatch,
    Tolerance,
    as_matrix,
    spectral_norm,
)
from pi_crossed.spaces import (
    IndexSet,
    SemigroupElement,
    SemigroupError,
    interval,
    parse_element,
)

__all__ = [
    "TruncationError",
    "NotAProjection",
    "NotAPartialIsometry",
    "ConeBasis",
    "GridBasis",
    "FlatBasis",
    "Operator",
    "ShiftMap",
    "Verdict",
    "ProductCriterion",
    "RepCheckReport",
    "cone_basis",
    "toeplitz_map",
    "toeplitz_shift",
    "truncated_J",
    "truncated_K",
    "indicator_projection",
    "grid_map",
    "grid_shift",
    "matrix_unit",
    "direct_sum",
    "compress",
    "embed",
    "guarded_norm",
    "guarded_residual",
    "is_partial_isometry",
    "product_pi_criterion",
    "semigroup_rep_check",
    "random_partial_isometry",
]

logger = logging.getLogger(__name__)

Budget = Union[SemigroupElement, int]


class TruncationError(ValueError):
    """The guard band for a comparison is empty."""


class NotAProjection(ValueError):
    """Raised by :func:`compress` for a non-projection."""


class NotAPartialIsometry(ValueError):
    """Raised when an input required to be a partial isometry is not."""


# ---------------------------------------------------------------------------
# Bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConeBasis:
    """Labels drawn from a truncated cone.

    A label is either a :class:`SemigroupElement` or a tuple whose first entry
    is one (block labels ``(r, slot)``); that element is the label's position
    in the cone.
    """

    labels: tuple
    cutoff: SemigroupElement

    @staticmethod
    def position(label) -> SemigroupElement:
        return label[0] if isinstance(label, tuple) else label

    @cached_property
    def _index(self) -> dict[Any, int]:
        return {x: i for i, x in enumerate(self.labels)}

    def index(self, label) -> int:
        return self._index[label]

    def __contains__(self, label) -> bool:
        return label in self._index

    @property
    def zero_budget(self) -> SemigroupElement:
        return SemigroupElement.zero()

    def coerce_budget(self, budget) -> SemigroupElement:
        return parse_element(budget) if not isinstance(budget, SemigroupElement) else budget

    def guard(self, budget) -> np.ndarray:
        b = self.coerce_budget(budget)
        return np.array(
            [i for i, x in enumerate(self.labels) if self.position(x) + b <= self.cutoff],
            dtype=np.int64,
        )

    def __len__(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class GridBasis:
    """Labels ``(k, l)`` with ``0 ≤ k, l ≤ n`` in row-major order."""

    n: int

    @cached_property
    def labels(self) -> tuple[tuple[int, int], ...]:
        return tuple((k, l) for k in range(self.n + 1) for l in range(self.n + 1))

    def index(self, label: tuple[int, int]) -> int:
        k, l = label
        return k * (self.n + 1) + l

    def __contains__(self, label) -> bool:
        k, l = label
        return 0 <= k <= self.n and 0 <= l <= self.n

    zero_budget = 0

    def coerce_budget(self, budget) -> int:
        return int(budget)

    def guard(self, budget) -> np.ndarray:
        b = int(budget)
        return np.array(
            [i for i, (k, l) in enumerate(self.labels) if max(k, l) + b <= self.n],
            dtype=np.int64,
        )

    def __len__(self) -> int:
        return (self.n + 1) ** 2


@dataclass(frozen=True)
class FlatBasis:
    """Plain finite basis ``0..size-1`` for genuinely finite operators."""

    size: int

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(range(self.size))

    def index(self, label: int) -> int:
        if not 0 <= label < self.size:
            raise KeyError(label)
        return label

    def __contains__(self, label) -> bool:
        return isinstance(label, int) and 0 <= label < self.size

    zero_budget = 0

    def coerce_budget(self, budget) -> int:
        return int(budget)

    def guard(self, budget) -> np.ndarray:
        # finite operators are exact everywhere
        return np.arange(self.size, dtype=np.int64)

    def __len__(self) -> int:
        return self.size


Basis = Union[ConeBasis, GridBasis, FlatBasis]


def cone_basis(index_set: IndexSet) -> ConeBasis:
    return ConeBasis(index_set.elements, index_set.cutoff)


def _same_basis(a: Basis, b: Basis) -> None:
    if a is not b and a != b:
        raise DimensionMismatch("operators live on different bases")


def _max_budget(a, b):
    return a if a >= b else b


# ---------------------------------------------------------------------------
# Operators
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Operator:
    """Dense complex matrix on a labelled basis, plus its shift budget."""

    matrix: np.ndarray
    basis: Basis
    budget: Budget = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        m = as_matrix(self.matrix)
        if m.flags.writeable:
            m = m.copy()
        n = len(self.basis)
        if m.shape != (n, n):
            raise DimensionMismatch(f"matrix {m.shape} does not match basis of size {n}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        budget = self.basis.zero_budget if self.budget is None else self.basis.coerce_budget(self.budget)
        if budget < 0:
            raise ValueError("shift budget must be nonnegative")
        object.__setattr__(self, "budget", budget)

    @classmethod
    def zeros(cls, basis: Basis, budget=None) -> "Operator":
        n = len(basis)
        return cls(np.zeros((n, n), dtype=np.complex128), basis, budget)

    @classmethod
    def identity(cls, basis: Basis) -> "Operator":
        return cls(np.eye(len(basis), dtype=np.complex128), basis)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def is_exact(self) -> bool:
        return not self.budget

    def adjoint(self) -> "Operator":
        return Operator(np.conj(self.matrix).T, self.basis, self.budget)

    @property
    def H(self) -> "Operator":
        return self.adjoint()

    def __matmul__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        _same_basis(self.basis, other.basis)
        return Operator(self.matrix @ other.matrix, self.basis, self.budget + other.budget)

    def __add__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        _same_basis(self.basis, other.basis)
        return Operator(self.matrix + other.matrix, self.basis, _max_budget(self.budget, other.budget))

    def __sub__(self, other: "Operator") -> "Operator":
        if not isinstance(other, Operator):
            return NotImplemented
        _same_basis(self.basis, other.basis)
        return Operator(self.matrix - other.matrix, self.basis, _max_budget(self.budget, other.budget))

    def __mul__(self, scalar: complex) -> "Operator":
        if isinstance(scalar, Operator):
            return NotImplemented
        return Operator(self.matrix * scalar, self.basis, self.budget)

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(-self.matrix, self.basis, self.budget)

    def power(self, n: int) -> "Operator":
        if n < 0:
            raise ValueError("negative power")
        out = Operator.identity(self.basis)
        for _ in range(n):
            out = out @ self
        return out

    def guard(self) -> np.ndarray:
        return self.basis.guard(self.budget)

    def __repr__(self) -> str:
        return f"Operator(dim={self.dim}, basis={type(self.basis).__name__}, budget={self.budget!r})"


def guarded_norm(a: Operator) -> float:
    """‖A·R‖ with R the inclusion of the guard band for A's budget."""
    cols = a.guard()
    if cols.size == 0:
        raise TruncationError(f"budget {a.budget!r} leaves an empty guard band")
    return spectral_norm(a.matrix[:, cols])


def guarded_residual(a: Operator, b: Operator) -> float:
    return guarded_norm(a - b)


# ---------------------------------------------------------------------------
# Partial permutations
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ShiftMap:
    """A partial permutation of basis vectors: ``ε_c ↦ ε_{targets[c]}`` or 0 when ``-1``.

    All shift families here are partial permutations, so products can be
    formed by index gathering and materialised only when needed.
    """

    targets: np.ndarray
    basis: Basis
    budget: Budget = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        t = np.asarray(self.targets, dtype=np.int64)
        if t.shape != (len(self.basis),):
            raise DimensionMismatch("target array does not match basis")
        live = t[t >= 0]
        if np.unique(live).size != live.size:
            raise ValueError("shift map is not injective")
        t.setflags(write=False)
        object.__setattr__(self, "targets", t)
        budget = self.basis.zero_budget if self.budget is None else self.basis.coerce_budget(self.budget)
        object.__setattr__(self, "budget", budget)

    @classmethod
    def identity(cls, basis: Basis) -> "ShiftMap":
        return cls(np.arange(len(basis)), basis)

    def __matmul__(self, other: "ShiftMap") -> "ShiftMap":
        if not isinstance(other, ShiftMap):
            return NotImplemented
        _same_basis(self.basis, other.basis)
        out = np.full_like(other.targets, -1)
        live = other.targets >= 0
        out[live] = self.targets[other.targets[live]]
        return ShiftMap(out, self.basis, self.budget + other.budget)

    def adjoint(self) -> "ShiftMap":
        inv = np.full_like(self.targets, -1)
        src = np.nonzero(self.targets >= 0)[0]
        inv[self.targets[src]] = src
        return ShiftMap(inv, self.basis, self.budget)

    def to_operator(self, budget=None) -> Operator:
        n = len(self.basis)
        m = np.zeros((n, n), dtype=np.complex128)
        src = np.nonzero(self.targets >= 0)[0]
        m[self.targets[src], src] = 1.0
        return Operator(m, self.basis, self.budget if budget is None else budget)


def _label_map(basis: Basis, rule, budget=None) -> ShiftMap:
    targets = np.full(len(basis), -1, dtype=np.int64)
    for i, x in enumerate(basis.labels):
        y = rule(x)
        if y is not None and y in basis:
            targets[i] = basis.index(y)
    return ShiftMap(targets, basis, budget)


# ---------------------------------------------------------------------------
# Families on truncated cones
# ---------------------------------------------------------------------------

def _element_within(index_set: IndexSet, s) -> SemigroupElement:
    s = parse_element(s)
    if s > index_set.cutoff:
        raise SemigroupError(f"{s!r} exceeds the cutoff {index_set.cutoff!r}")
    return s


def toeplitz_map(index_set: IndexSet, s) -> ShiftMap:
    s = _element_within(index_set, s)
    return _label_map(cone_basis(index_set), lambda r: r + s, budget=s)


def toeplitz_shift(index_set: IndexSet, s) -> Operator:
    """Truncated ``T_s``: ``ε_r ↦ ε_{r+s}`` when ``r+s`` is in the set, else 0."""
    return toeplitz_map(index_set, s).to_operator()


def _interval_shift(index_set: IndexSet, s, t, closed: bool) -> Operator:
    s = _element_within(index_set, s)
    t = parse_element(t)
    labels = interval(index_set, s, closed=closed)
    basis = ConeBasis(tuple(labels), s)
    return _label_map(basis, lambda r: r + t).to_operator()


def truncated_J(index_set: IndexSet, s, t) -> Operator:
    """``J^s_t`` on ``ℓ²([0,s])``: exact, zero for ``t > s``."""
    return _interval_shift(index_set, s, t, closed=True)


def truncated_K(index_set: IndexSet, s, t) -> Operator:
    """``K^s_t`` on ``ℓ²([0,s))``: exact, zero for ``t ≥ s``."""
    return _interval_shift(index_set, s, t, closed=False)


def indicator_projection(index_set: IndexSet, s) -> Operator:
    """Multiplication by the indicator ``1_s`` of ``{r ≥ s}``."""
    s = _element_within(index_set, s)
    diag = np.array([1.0 if r >= s else 0.0 for r in index_set.elements])
    return Operator(np.diag(diag).astype(np.complex128), cone_basis(index_set))


# ---------------------------------------------------------------------------
# Grid shifts on ℓ²(ℕ×ℕ)
# ---------------------------------------------------------------------------

def grid_map(n: int, mode: str, power: int) -> ShiftMap:
    if n < 1:
        raise ValueError("grid size must be positive")
    if power < 0:
        raise ValueError("negative power")
    basis = GridBasis(n)
    if mode == "tau":
        rule = lambda kl: (kl[0] + power, kl[1] - power) if kl[1] >= power else None  # noqa: E731
    elif mode == "sigma":
        rule = lambda kl: (kl[0], kl[1] - power) if kl[1] >= power else None  # noqa: E731
    else:
        raise ValueError(f"unknown grid mode {mode!r}")
    # sigma powers never leave the window, but their adjoints do
    return _label_map(basis, rule, budget=power)


def grid_shift(n: int, mode: str, power: int) -> Operator:
    """``tau``: ``ε_{k,l} ↦ ε_{k+p,l-p}``; ``sigma``: ``ε_{k,l} ↦ ε_{k,l-p}``."""
    return grid_map(n, mode, power).to_operator()


# ---------------------------------------------------------------------------
# Generic constructions
# ---------------------------------------------------------------------------

def matrix_unit(basis: Basis, i, j) -> Operator:
    """``e_i ⊗ ē_j``: sends ``e_j`` to ``e_i``."""
    n = len(basis)
    m = np.zeros((n, n), dtype=np.complex128)
    m[basis.index(i), basis.index(j)] = 1.0
    return Operator(m, basis)


def direct_sum(parts: Sequence[Operator]) -> Operator:
    """Block-diagonal sum of exact operators on a flat basis."""
    if not parts:
        raise ValueError("direct sum of nothing")
    for p in parts:
        if not p.is_exact:
            raise TruncationError("direct sums are only formed from exact operators")
    n = sum(p.dim for p in parts)
    m = np.zeros((n, n), dtype=np.complex128)
    at = 0
    for p in parts:
        m[at : at + p.dim, at : at + p.dim] = p.matrix
        at += p.dim
    return Operator(m, FlatBasis(n))


def _restrict_basis(basis: Basis, keep: np.ndarray) -> Basis:
    if isinstance(basis, ConeBasis):
        return ConeBasis(tuple(basis.labels[i] for i in keep), basis.cutoff)
    return FlatBasis(int(keep.size))


def compress(p: Operator, a: Operator, tol: Tolerance | None = None) -> Operator:
    """``PAP``; restricted to the range labels when ``P`` is diagonal 0/1."""
    tol = tol or Tolerance()
    _same_basis(p.basis, a.basis)
    if spectral_norm(p.matrix @ p.matrix - p.matrix) > tol.eq_tol or spectral_norm(
        p.matrix - np.conj(p.matrix).T
    ) > tol.eq_tol:
        raise NotAProjection("compress needs an orthogonal projection")

    pap = p @ a @ p
    d = np.diag(p.matrix)
    is_diag = not np.any(p.matrix - np.diag(d))
    if is_diag and np.all((d == 0) | (d == 1)):
        keep = np.nonzero(d == 1)[0]
        if keep.size == 0:
            raise NotAProjection("compression onto the zero subspace")
        return Operator(pap.matrix[np.ix_(keep, keep)], _restrict_basis(p.basis, keep), pap.budget)
    return pap


def embed(a: Operator, target: Basis) -> Operator:
    """Place *a* on a larger basis containing all of its labels, zero elsewhere."""
    idx = np.array([target.index(x) for x in a.basis.labels], dtype=np.int64)
    n = len(target)
    m = np.zeros((n, n), dtype=np.complex128)
    m[np.ix_(idx, idx)] = a.matrix
    return Operator(m, target, a.budget)


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Verdict:
    ok: bool
    residual: float


@dataclass(frozen=True)
class ProductCriterion:
    product_is_pi: bool
    comm_norm: float
    product_residual: float
    eq_tol: float = field(default=1e-10, repr=False)

    @property
    def agree(self) -> bool:
        return self.product_is_pi == (self.comm_norm <= self.eq_tol)


def is_partial_isometry(a: Operator, tol: Tolerance | None = None) -> Verdict:
    """``‖AA*A − A‖ ≤ eqTol``."""
    tol = tol or Tolerance()
    m = a.matrix
    residual = spectral_norm(m @ np.conj(m).T @ m - m)
    return Verdict(residual <= tol.eq_tol, residual)


def product_pi_criterion(s: Operator, t: Operator, tol: Tolerance | None = None) -> ProductCriterion:
    """``ST`` is a partial isometry iff ``S*S`` commutes with ``TT*``."""
    tol = tol or Tolerance()
    for name, x in (("S", s), ("T", t)):
        v = is_partial_isometry(x, tol)
        if not v.ok:
            raise NotAPartialIsometry(f"{name} is not a partial isometry (residual {v.residual:.3e})")
    product = is_partial_isometry(s @ t, tol)
    init = np.conj(s.matrix).T @ s.matrix
    rng = t.matrix @ np.conj(t.matrix).T
    comm = spectral_norm(init @ rng - rng @ init)
    return ProductCriterion(product.ok, comm, product.residual, tol.eq_tol)


@dataclass(frozen=True)
class RepCheckReport:
    """Residuals of the partial-isometric representation laws."""

    product: float
    commutators: float
    initial_join: float
    range_join: float

    @property
    def max_residual(self) -> float:
        return max(self.product, self.commutators, self.initial_join, self.range_join)


def semigroup_rep_check(
    v: Mapping[Any, Operator],
    index_set: IndexSet | None = None,
    tol: Tolerance | None = None,
) -> RepCheckReport:
    """Check ``V_sV_t = V_{s+t}``, commuting initial/range projections, and the ∨ formulas.

    Products are compared whenever ``s + t`` is itself a key of *v*; *index_set*
    (when given) must contain every key.
    """
    keys = sorted(v)
    if index_set is not None:
        for k in keys:
            if k not in index_set:
                raise SemigroupError(f"index {k!r} is not in the truncation")

    product = 0.0
    for s in keys:
        for t in keys:
            if s + t in v:
                product = max(product, guarded_residual(v[s] @ v[t], v[s + t]))

    initial = {s: v[s].adjoint() @ v[s] for s in keys}
    ranges = {s: v[s] @ v[s].adjoint() for s in keys}
    projections = [*initial.values(), *ranges.values()]
    commutators = 0.0
    for i, p in enumerate(projections):
        for q in projections[i + 1 :]:
            commutators = max(commutators, guarded_residual(p @ q, q @ p))

    initial_join = range_join = 0.0
    for s in keys:
        for t in keys:
            j = max(s, t)
            initial_join = max(initial_join, guarded_residual(initial[s] @ initial[t], initial[j]))
            range_join = max(range_join, guarded_residual(ranges[s] @ ranges[t], ranges[j]))

    return RepCheckReport(product, commutators, initial_join, range_join)


def random_partial_isometry(rng: np.random.Generator, dim: int) -> Operator:
    """Gaussian matrix with its singular values snapped to 0 or 1 at random."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    u, _, vh = np.linalg.svd(g)
    keep = rng.random(dim) < 0.5
    return Operator((u * keep) @ vh, FlatBasis(dim))
