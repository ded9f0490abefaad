# pi_crossed/sigma.py
"""
The backward-shift system: coisometric covariant pairs ``(π, V)`` for the
action ``σ_k(f)(n) = f(n+k)`` on convergent sequences, the correspondence
between ``π`` and the decreasing projections ``Q_n``, and the
sequence-of-Toeplitz-operators model of the crossed product.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from pi_crossed.linalg import Tolerance
from pi_crossed.ops import (
    ConeBasis,
    Operator,
    ShiftMap,
    TruncationError,
    grid_map,
    guarded_norm,
    guarded_residual,
    toeplitz_shift,
)
from pi_crossed.reps import NonMonotoneFamily
from pi_crossed.spaces import SemigroupElement, enumerate_semigroup
from pi_crossed.universal import LaurentPoly, MalformedIndices, band_symbol

__all__ = [
    "CoisometricSystem",
    "OperatorSequence",
    "SigmaElement",
    "SigmaCovarianceReport",
    "SigmaFaithfulness",
    "SymbolConstancy",
    "sigma_unit",
    "build_pi",
    "pi_residuals",
    "extract_q",
    "covariance_check_sigma",
    "faithfulness_sigma",
    "egsigma_system",
    "egsigma_pi",
    "model_system",
    "split_blocks",
    "model_image",
    "matrix_unit_sequence",
    "q_element",
    "sigma_image",
    "model_sequence",
    "symbol_constancy",
]

logger = logging.getLogger(__name__)


def sigma_unit(k: int, n: int) -> int:
    """Index ``m`` with ``σ_k(1_n) = 1_m``; ``1_0`` is the unit."""
    return n - k if n >= k else 0


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoisometricSystem:
    """Truncated coisometry ``V`` with projections ``Q_0 ≥ Q_1 ≥ …``."""

    V: Operator
    Q: tuple[Operator, ...]

    def __post_init__(self) -> None:
        if not self.Q:
            raise ValueError("a coisometric system needs at least Q_0")
        object.__setattr__(self, "Q", tuple(self.Q))

    @property
    def max_n(self) -> int:
        return len(self.Q) - 1

    def invariant_residuals(self) -> dict[str, float]:
        v = self.V
        ident = Operator.identity(v.basis)
        out = {
            "coisometry": guarded_residual(v @ v.adjoint(), ident),
            "q0": guarded_residual(self.Q[0], ident - v.adjoint() @ v),
            "decreasing": 0.0,
            "kills": 0.0,
        }
        for n, q in enumerate(self.Q):
            out["kills"] = max(out["kills"], guarded_norm(v @ q))
            if n:
                out["decreasing"] = max(out["decreasing"], guarded_residual(q @ self.Q[n - 1], q))
        return out


def build_pi(sys: CoisometricSystem, n: int, tol: Tolerance | None = None) -> Operator:
    """``π(1_n) = V*^n V^n + Σ_{k<n} V*^k Q_{n−k} V^k``.

    Raises :class:`NonMonotoneFamily` when the result is not a projection
    below ``π(1_{n−1})`` on the guard band.
    """
    tol = tol or Tolerance()
    if not 0 <= n <= sys.max_n:
        raise TruncationError(f"n={n} outside 0..{sys.max_n}")
    p = _raw_pi(sys, n)
    if n:
        projection, monotone = pi_residuals(p, _raw_pi(sys, n - 1))
        if max(projection, monotone) > tol.eq_tol:
            raise NonMonotoneFamily(
                f"π(1_{n}) fails: projection residual {projection:.3e}, monotone residual {monotone:.3e}"
            )
    return p


def _raw_pi(sys: CoisometricSystem, n: int) -> Operator:
    v, vs = sys.V, sys.V.adjoint()
    p = vs.power(n) @ v.power(n)
    for k in range(n):
        p = p + vs.power(k) @ sys.Q[n - k] @ v.power(k)
    # every term returns to its starting label, so it only travels n away
    budget = max(n * sys.V.budget, max((q.budget for q in sys.Q[: n + 1]), default=0))
    return Operator(p.matrix, p.basis, budget)


def pi_residuals(p: Operator, previous: Operator) -> tuple[float, float]:
    """Projection residual of *p* and the residual of ``p ≤ previous``."""
    projection = max(guarded_residual(p @ p, p), guarded_residual(p.adjoint(), p))
    return projection, guarded_residual(p @ previous, p)


def extract_q(pi_images: Mapping[int, Operator] | Sequence[Operator], v: Operator) -> list[Operator]:
    """``Q_0 = 1 − V*V`` and ``Q_n = π(1_n) − V*π(1_{n−1})V``."""
    images = dict(pi_images) if isinstance(pi_images, Mapping) else dict(enumerate(pi_images))
    top = max(images)
    missing = set(range(top + 1)) - set(images)
    if missing:
        raise ValueError(f"π images missing for n in {sorted(missing)}")
    q = [Operator.identity(v.basis) - v.adjoint() @ v]
    q.extend(images[n] - v.adjoint() @ images[n - 1] @ v for n in range(1, top + 1))
    return q


# ---------------------------------------------------------------------------
# Covariance and faithfulness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SigmaCovarianceReport:
    covariance: float
    coisometry: float
    monotone: float
    compared: int
    skipped: int = field(default=0, compare=False)

    @property
    def max_residual(self) -> float:
        return max(self.covariance, self.coisometry, self.monotone)

    def ok(self, tol: Tolerance) -> bool:
        return self.max_residual <= tol.eq_tol


def covariance_check_sigma(
    pi_images: Mapping[int, Operator] | Sequence[Operator],
    v: Operator,
    tol: Tolerance | None = None,
    p_range: Sequence[int] | None = None,
) -> SigmaCovarianceReport:
    """Residuals of ``V^p π(1_n) = π(σ_p(1_n)) V^p``, ``VV* = 1`` and ``π(1_n) ≤ π(1_{n−1})``.

    Pairs whose combined budget leaves no guard band are skipped and counted.
    """
    tol = tol or Tolerance()
    images = dict(pi_images) if isinstance(pi_images, Mapping) else dict(enumerate(pi_images))
    ns = sorted(images)
    ps = list(p_range) if p_range is not None else ns

    coisometry = guarded_residual(v @ v.adjoint(), Operator.identity(v.basis))
    monotone = 0.0
    for n in ns[1:]:
        if n - 1 in images:
            monotone = max(monotone, *pi_residuals(images[n], images[n - 1]))

    covariance = 0.0
    compared = skipped = 0
    for p in ps:
        vp = v.power(p)
        for n in ns:
            target = sigma_unit(p, n)
            if target not in images:
                continue
            diff = vp @ images[n] - images[target] @ vp
            if diff.guard().size == 0:
                skipped += 1
                continue
            covariance = max(covariance, guarded_norm(diff))
            compared += 1
    if skipped:
        logger.debug("sigma covariance: skipped %d pairs with empty guard band", skipped)
    return SigmaCovarianceReport(covariance, coisometry, monotone, compared, skipped)


@dataclass(frozen=True)
class SigmaFaithfulness:
    ok: bool
    min_gap: float


def faithfulness_sigma(sys: CoisometricSystem, tol: Tolerance | None = None) -> SigmaFaithfulness:
    """Faithful iff every gap ``‖Q_n − Q_{n+1}‖`` is nonzero."""
    tol = tol or Tolerance()
    if sys.max_n < 1:
        raise ValueError("need at least Q_0 and Q_1")
    gap = min(guarded_norm(sys.Q[n] - sys.Q[n + 1]) for n in range(sys.max_n))
    return SigmaFaithfulness(gap > tol.eq_tol, gap)


# ---------------------------------------------------------------------------
# Concrete systems
# ---------------------------------------------------------------------------

def _diagonal(basis, keep) -> Operator:
    diag = np.array([1.0 if keep(x) else 0.0 for x in basis.labels])
    return Operator(np.diag(diag).astype(np.complex128), basis)


def egsigma_system(n: int = 16, max_n: int = 5) -> CoisometricSystem:
    """Grid system: ``V ε_{k,l} = ε_{k,l−1}``, ``Q_m`` onto ``span{ε_{k,0} : k ≥ m}``."""
    v = grid_map(n, "sigma", 1).to_operator()
    q = [_diagonal(v.basis, lambda kl, m=m: kl[1] == 0 and kl[0] >= m) for m in range(max_n + 1)]
    return CoisometricSystem(v, tuple(q))


def egsigma_pi(n: int, m: int) -> Operator:
    """Projection onto ``span{ε_{k,l} : k + l ≥ m}`` on the grid."""
    v = grid_map(n, "sigma", 1)
    return _diagonal(v.basis, lambda kl: kl[0] + kl[1] >= m)


def _block_basis(size: int, blocks: int) -> ConeBasis:
    labels = tuple((SemigroupElement.of(r), b) for b in range(blocks) for r in range(size))
    return ConeBasis(labels, SemigroupElement.of(size - 1))


def model_system(n_samples: int, size: int, max_n: int) -> CoisometricSystem:
    """``V = ⊕ T*`` over samples ``0..n_samples`` and the tail, ``Q_m(n) = 1 − TT*`` iff ``n ≥ m``.

    The last block is the value at ∞, where every ``Q_m`` is ``1 − TT*``.
    """
    blocks = n_samples + 2
    basis = _block_basis(size, blocks)
    targets = np.full(len(basis), -1, dtype=np.int64)
    for i, (r, b) in enumerate(basis.labels):
        if r:
            targets[i] = basis.index((r - 1, b))
    v = ShiftMap(targets, basis, 1).to_operator()

    tail = blocks - 1
    q = [
        _diagonal(basis, lambda x, m=m: not x[0] and (x[1] == tail or x[1] >= m))
        for m in range(max_n + 1)
    ]
    return CoisometricSystem(v, tuple(q))


# ---------------------------------------------------------------------------
# Operator sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorSequence:
    """Samples at ``n = 0..len(samples)−1`` and the value at ∞."""

    samples: tuple[Operator, ...]
    tail: Operator

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", tuple(self.samples))
        for s in self.samples:
            if s.dim != self.tail.dim:
                raise ValueError("all samples must share the tail's dimension")

    def _zip(self, other: "OperatorSequence", sign: int) -> "OperatorSequence":
        if len(self.samples) != len(other.samples):
            raise ValueError("sequences have different sample counts")
        combine = (lambda a, b: a + b) if sign > 0 else (lambda a, b: a - b)
        return OperatorSequence(
            tuple(combine(a, b) for a, b in zip(self.samples, other.samples)),
            combine(self.tail, other.tail),
        )

    def __add__(self, other: "OperatorSequence") -> "OperatorSequence":
        return self._zip(other, 1)

    def __sub__(self, other: "OperatorSequence") -> "OperatorSequence":
        return self._zip(other, -1)

    def __mul__(self, c: complex) -> "OperatorSequence":
        return OperatorSequence(tuple(s * c for s in self.samples), self.tail * c)

    __rmul__ = __mul__

    def support(self, tol: Tolerance | None = None) -> list[int]:
        """Sample indices with nonzero guarded norm."""
        tol = tol or Tolerance()
        return [n for n, s in enumerate(self.samples) if guarded_norm(s) > tol.eq_tol]


def split_blocks(op: Operator, size: int) -> OperatorSequence:
    """Cut a block-diagonal operator on the model basis into its sample sequence."""
    blocks, rem = divmod(op.dim, size)
    if rem or blocks < 2:
        raise ValueError("operator does not live on a model basis of this block size")
    cone = ConeBasis(enumerate_semigroup([1], size - 1).elements, SemigroupElement.of(size - 1))
    parts = [
        Operator(op.matrix[b * size : (b + 1) * size, b * size : (b + 1) * size], cone, op.budget)
        for b in range(blocks)
    ]
    return OperatorSequence(tuple(parts[:-1]), parts[-1])


def _toeplitz_word(z, i: int, j: int) -> Operator:
    return toeplitz_shift(z, i) @ toeplitz_shift(z, j).adjoint()


def model_image(i: int, j: int, m: int, n_samples: int, dim: int) -> OperatorSequence:
    """``n ↦ T^{i+d} T*^{j+d}`` with ``d = max(m − n, 0)``; tail ``T^i T*^j``."""
    if min(i, j, m, n_samples) < 0:
        raise MalformedIndices("indices must be natural numbers")
    if dim <= i + j + m + 2:
        raise TruncationError(f"dim {dim} too small for ({i}, {j}, {m})")
    z = enumerate_semigroup([1], dim - 1)
    samples = tuple(_toeplitz_word(z, i + max(m - n, 0), j + max(m - n, 0)) for n in range(n_samples + 1))
    return OperatorSequence(samples, _toeplitz_word(z, i, j))


def matrix_unit_sequence(i: int, j: int, m: int, n_samples: int, dim: int) -> OperatorSequence:
    """Model image of ``k(i)* k_c(1_m − 1_{m+1}) k(j) − k(i+1)* k_c(1_{m−1} − 1_m) k(j+1)``.

    ``1_{−1}`` is read as the unit, so the second term vanishes at ``m = 0``.
    """
    lower = max(m - 1, 0)
    return (
        model_image(i, j, m, n_samples, dim)
        - model_image(i, j, m + 1, n_samples, dim)
        - model_image(i + 1, j + 1, lower, n_samples, dim)
        + model_image(i + 1, j + 1, m, n_samples, dim)
    )


# ---------------------------------------------------------------------------
# Span elements k(i)* k_c(1_m) k(j)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SigmaElement:
    """``Σ c · k(i)* k_c(1_m) k(j)``, keyed by ``(i, m, j)``."""

    terms: tuple[tuple[tuple[int, int, int], complex], ...]

    def __iter__(self):
        return iter(self.terms)


def q_element(n: int) -> SigmaElement:
    """``q_n = k_c(1_n) − k(1)* k_c(1_{n−1}) k(1)``; ``q_0 = 1 − k(1)*k(1)``."""
    if n < 0:
        raise MalformedIndices("n must be nonnegative")
    return SigmaElement((((0, n, 0), 1 + 0j), ((1, max(n - 1, 0), 1), -1 + 0j)))


def sigma_image(x: SigmaElement, sys: CoisometricSystem, tol: Tolerance | None = None) -> Operator:
    """Image under ``π × V`` with ``π`` rebuilt from the system's ``Q``."""
    v = sys.V
    out = Operator.zeros(v.basis)
    for (i, m, j), c in x.terms:
        out = out + c * (v.power(i).adjoint() @ build_pi(sys, m, tol) @ v.power(j))
    return out


def model_sequence(x: SigmaElement, n_samples: int, dim: int) -> OperatorSequence:
    parts = [c * model_image(i, j, m, n_samples, dim) for (i, m, j), c in x.terms]
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


# ---------------------------------------------------------------------------
# Symbols
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymbolConstancy:
    ok: bool
    max_deviation: float
    tail_symbol: LaurentPoly = field(default_factory=LaurentPoly, compare=False)


def symbol_constancy(
    seq: OperatorSequence,
    tol: float = 1e-8,
    max_degree: int = 8,
) -> SymbolConstancy:
    """Every sample's band symbol equals the tail's."""
    target = band_symbol(seq.tail, max_degree)
    deviation = max(
        (band_symbol(s, max_degree).max_deviation(target) for s in seq.samples),
        default=0.0,
    )
    return SymbolConstancy(deviation <= tol, deviation, target)
