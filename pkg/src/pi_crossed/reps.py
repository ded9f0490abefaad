# pi_crossed/reps.py
"""
Covariant partial-isometric representations of (B_I, Γ⁺, τ^I) and of the
backward-shift system, given by their values on the generators ``1_t``.

A representation of B_I is stored as the map ``t ↦ π(1_t)``; a
partial-isometric representation of Γ⁺ as ``s ↦ V_s``.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from pi_crossed.linalg import Tolerance, spectral_norm
from pi_crossed.ops import (
    ConeBasis,
    Operator,
    ShiftMap,
    direct_sum,
    guarded_norm,
    guarded_residual,
    truncated_J,
)
from pi_crossed.spaces import IndexSet, SemigroupElement, enumerate_semigroup, parse_element

__all__ = [
    "NonMonotoneFamily",
    "OutOfInterval",
    "Action",
    "ProjectionFamily",
    "ProjectionRep",
    "CovariantPair",
    "CovarianceReport",
    "WitnessResult",
    "rep_from_projections",
    "pi_from_V",
    "check_covariance",
    "induced_rep",
    "faithfulness_witness",
    "range_difference_residual",
    "interval_J_sum",
]

logger = logging.getLogger(__name__)


class NonMonotoneFamily(ValueError):
    """A projection family fails ``P_r ≥ P_t`` for some ``r ≤ t``."""


class OutOfInterval(ValueError):
    """``V_r ≠ 0`` for an ``r`` outside the interval."""


# ---------------------------------------------------------------------------
# Actions on the generators 1_t
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Action:
    """How ``α_s`` moves the generator ``1_t``.

    ``tau``   forward translation, ``α_s(1_t) = 1_{s+t}``;
    ``tauI``  the same inside an interval ``I = [0, end]`` or ``[0, end)``, zero outside;
    ``sigma`` backward translation on **c**, ``σ_s(1_t) = 1_{t-s}`` for ``t ≥ s``, else ``1 = 1_0``.
    """

    kind: str = "tau"
    end: Any = None
    closed: bool = True

    def __post_init__(self) -> None:
        if self.kind not in ("tau", "tauI", "sigma"):
            raise ValueError(f"unknown action {self.kind!r}")
        if self.kind == "tauI" and self.end is None:
            raise ValueError("tauI needs the interval end point")

    def contains(self, r) -> bool:
        if self.kind != "tauI":
            return True
        return r <= self.end if self.closed else r < self.end

    def apply(self, s, t):
        """Label of ``α_s(1_t)``, or ``None`` for zero."""
        if self.kind == "sigma":
            if t >= s:
                return t - s
            return SemigroupElement.zero() if isinstance(t, SemigroupElement) else 0
        target = s + t
        if self.kind == "tauI" and not self.contains(target):
            return None
        return target

    def unit_image(self, s):
        """Label of ``ᾱ_s(1) = α_s(1_0)``."""
        zero = SemigroupElement.zero() if isinstance(s, SemigroupElement) else 0
        return self.apply(s, zero)


# ---------------------------------------------------------------------------
# Representations of B_I from projection families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionFamily:
    labels: tuple
    projections: Mapping[Any, Operator]


@dataclass(frozen=True)
class ProjectionRep:
    images: Mapping[Any, Operator]
    faithful: bool

    def image(self, combination: Mapping[Any, complex]) -> Operator:
        """``Σ c_r 1_r ↦ Σ c_r P_r``."""
        out = None
        for label, c in combination.items():
            term = self.images[label] * c
            out = term if out is None else out + term
        if out is None:
            raise ValueError("empty combination")
        return out


def rep_from_projections(fam: ProjectionFamily, tol: Tolerance | None = None) -> ProjectionRep:
    """Representation ``1_r ↦ P_r`` of B_I; faithful iff the ``P_r`` are pairwise distinct."""
    tol = tol or Tolerance()
    labels = sorted(fam.labels)
    for r in labels:
        p = fam.projections[r]
        if guarded_residual(p @ p, p) > tol.eq_tol or guarded_residual(p.adjoint(), p) > tol.eq_tol:
            raise NonMonotoneFamily(f"P_{r!r} is not a projection")
    for i, r in enumerate(labels):
        for t in labels[i + 1 :]:
            pr, pt = fam.projections[r], fam.projections[t]
            if guarded_residual(pt @ pr, pt) > tol.eq_tol:
                raise NonMonotoneFamily(f"P_{r!r} ≱ P_{t!r}")

    faithful = all(
        guarded_residual(fam.projections[r], fam.projections[t]) > tol.eq_tol
        for i, r in enumerate(labels)
        for t in labels[i + 1 :]
    )
    return ProjectionRep(dict(fam.projections), faithful)


# ---------------------------------------------------------------------------
# Covariant pairs
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CovariantPair:
    """``(π, V)`` through ``π(1_t)`` and ``V_s``."""

    pi_images: Mapping[Any, Operator]
    V: Mapping[Any, Operator]
    action: Action = field(default_factory=Action)
    extend: Callable[[Any], Operator] | None = None

    @property
    def basis(self):
        return next(iter(self.V.values())).basis

    def pi(self, label) -> Operator:
        if label is None:
            return Operator.zeros(self.basis)
        if label in self.pi_images:
            return self.pi_images[label]
        if self.extend is not None:
            return self.extend(label)
        # translated past the truncation
        return Operator.zeros(self.basis)


@dataclass(frozen=True)
class CovarianceReport:
    covrep: float
    altcov: float
    unit: float
    covrep_ok: bool
    altcov_ok: bool
    skipped: int = field(default=0, compare=False)

    @property
    def agree(self) -> bool:
        return self.covrep_ok == self.altcov_ok


def _known(pair: CovariantPair, label) -> bool:
    return label is None or label in pair.pi_images or pair.extend is not None


def check_covariance(pair: CovariantPair, tol: Tolerance | None = None) -> CovarianceReport:
    """Residuals of both covariance formulations over all ``V_s`` and ``1_t``.

    ``covrep``: ``π(α_s(1_t)) = V_s π(1_t) V_s*`` and ``V_s*V_s`` commutes with ``π(1_t)``.
    ``altcov``: ``π(α_s(1_t)) V_s = V_s π(1_t)`` and ``π(ᾱ_s(1)) = V_s V_s*``.

    Pairs whose translate has no stored image, or whose comparison has an
    empty guard band, are skipped and counted.
    """
    tol = tol or Tolerance()
    covrep = altcov = 0.0
    skipped = 0
    for s, vs in pair.V.items():
        vs_star = vs.adjoint()
        initial = vs_star @ vs
        for t, pt in pair.pi_images.items():
            label = pair.action.apply(s, t)
            if not _known(pair, label):
                skipped += 1
                continue
            moved = pair.pi(label)
            diffs = (moved - vs @ pt @ vs_star, initial @ pt - pt @ initial, moved @ vs - vs @ pt)
            if any(d.guard().size == 0 for d in diffs):
                skipped += 1
                continue
            covrep = max(covrep, guarded_norm(diffs[0]), guarded_norm(diffs[1]))
            altcov = max(altcov, guarded_norm(diffs[2]))
        unit_label = pair.action.unit_image(s)
        if _known(pair, unit_label):
            altcov = max(altcov, guarded_residual(pair.pi(unit_label), vs @ vs_star))

    zero = next((k for k in pair.V if not k), None)
    if zero is None:
        raise ValueError("V must be defined at 0")
    ident = Operator.identity(pair.basis)
    unit = max(
        guarded_residual(pair.V[zero], ident),
        guarded_residual(pair.pi(zero), ident),
    )
    report = CovarianceReport(covrep, altcov, unit, covrep <= tol.eq_tol, altcov <= tol.eq_tol, skipped)
    logger.debug("covariance residuals covrep=%.3e altcov=%.3e unit=%.3e", covrep, altcov, unit)
    return report


def pi_from_V(
    v: Mapping[Any, Operator],
    index_set: IndexSet | None = None,
    interval_spec: tuple | None = None,
    tol: Tolerance | None = None,
) -> CovariantPair:
    """``π_V^I(1_r) = V_r V_r*``; *interval_spec* is ``(end, closed)`` or ``None`` for Γ⁺."""
    tol = tol or Tolerance()
    if interval_spec is None:
        action = Action("tau")
    else:
        end, closed = interval_spec
        action = Action("tauI", parse_element(end) if index_set is not None else end, closed)

    images = {}
    for r, vr in v.items():
        if index_set is not None and r not in index_set:
            raise OutOfInterval(f"{r!r} is not in the truncation")
        if not action.contains(r):
            if spectral_norm(vr.matrix) > tol.eq_tol:
                raise OutOfInterval(f"V_{r!r} ≠ 0 outside the interval")
            continue
        images[r] = vr @ vr.adjoint()
    return CovariantPair(images, dict(v), action)


def range_difference_residual(v: Mapping[Any, Operator]) -> float:
    """``V_rV_r* − V_tV_t* = V_r(1 − V_{t-r}V_{t-r}*)V_r* = X*X`` with ``X = (1 − V_{t-r}V_{t-r}*)V_r*``."""
    residual = 0.0
    keys = sorted(v)
    for r in keys:
        for t in keys:
            if not t > r or (t - r) not in v:
                continue
            vr, d = v[r], v[t - r]
            ident = Operator.identity(vr.basis)
            gap = ident - d @ d.adjoint()
            lhs = vr @ vr.adjoint() - v[t] @ v[t].adjoint()
            x = gap @ vr.adjoint()
            residual = max(
                residual,
                guarded_residual(lhs, vr @ gap @ vr.adjoint()),
                guarded_residual(lhs, x.adjoint() @ x),
            )
    return residual


# ---------------------------------------------------------------------------
# Induced representations on ℓ²(Γ⁺, H)
# ---------------------------------------------------------------------------

def induced_rep(
    pi0: Callable[[SemigroupElement], Sequence[float]] | Mapping[SemigroupElement, Sequence[float]],
    index_set: IndexSet,
    inner_dim: int,
    shifts: Sequence | None = None,
) -> CovariantPair:
    """Pair on ``{ζ : ζ(r) ∈ π₀(1_r)H}`` with ``(π(1_t)ζ)(r) = π₀(1_{r+t})ζ(r)`` and ``(V_sζ)(r) = ζ(r+s)``.

    ``π₀`` is diagonal: ``pi0(t)`` lists the 0/1 diagonal of ``π₀(1_t)``.
    Labels past the truncation read as zero when *pi0* is a mapping.
    """
    if isinstance(pi0, Mapping):
        table = pi0
        zeros = np.zeros(inner_dim)
        lookup = lambda t: np.asarray(table.get(t, zeros), dtype=float)  # noqa: E731
    else:
        lookup = lambda t: np.asarray(pi0(t), dtype=float)  # noqa: E731

    labels = tuple(
        (r, slot)
        for r in index_set.elements
        for slot in range(inner_dim)
        if lookup(r)[slot] == 1
    )
    basis = ConeBasis(labels, index_set.cutoff)

    def image(t) -> Operator:
        diag = np.array([lookup(r + t)[slot] for r, slot in labels], dtype=np.complex128)
        return Operator(np.diag(diag), basis)

    pi_images = {t: image(t) for t in index_set.elements}

    v = {}
    for s in (index_set.elements if shifts is None else [parse_element(x) for x in shifts]):
        targets = np.full(len(labels), -1, dtype=np.int64)
        for i, (x, slot) in enumerate(labels):
            if x >= s and (x - s, slot) in basis:
                targets[i] = basis.index((x - s, slot))
        v[s] = ShiftMap(targets, basis, s).to_operator()

    return CovariantPair(pi_images, v, Action("tau"), extend=image)


# ---------------------------------------------------------------------------
# Faithfulness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WitnessResult:
    min_norm: float
    ok: bool


def faithfulness_witness(
    v: Mapping[Any, Operator],
    r_range: Sequence,
    uv_range: Sequence,
    tol: Tolerance | None = None,
) -> WitnessResult:
    """``min ‖(1 − V_r*V_r)(V_uV_u* − V_tV_t*)‖`` over ``r > 0`` and ``u < t``."""
    tol = tol or Tolerance()
    best = float("inf")
    for r in r_range:
        if not r:
            continue
        vr = v[r]
        kill = Operator.identity(vr.basis) - vr.adjoint() @ vr
        for u in uv_range:
            for t in uv_range:
                if not u < t:
                    continue
                diff = v[u] @ v[u].adjoint() - v[t] @ v[t].adjoint()
                best = min(best, guarded_norm(kill @ diff))
    if best == float("inf"):
        raise ValueError("empty witness range")
    return WitnessResult(best, best > tol.eq_tol)


def interval_J_sum(end: int, labels: Sequence[int]) -> dict[int, Operator]:
    """``t ↦ ⊕_{r ≤ end} J^r_t`` over Γ = ℤ, for ``t`` in *labels*."""
    z = enumerate_semigroup([1], max(end, 1))
    return {t: direct_sum([truncated_J(z, r, t) for r in range(end + 1)]) for t in labels}
