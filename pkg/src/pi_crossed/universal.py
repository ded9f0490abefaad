# pi_crossed/universal.py
"""
Symbolic model of the universal C*-algebra generated by one power partial
isometry ``v``.

Every word in ``v, v*`` reduces to a single canonical monomial

    M(s, m, t) = v*^s · v^m · v*^m · v^t        (m ≥ max(s, t))

and linear combinations of monomials (:class:`NormalForm`) are closed under
products and adjoints.  Normal forms are evaluated in concrete
representations: the Toeplitz isometry ``T`` and its adjoint, the finite
compressions ``P_nTP_n`` / ``P_nT*P_n``, and the faithful grid
representation on ℓ²(ℕ×ℕ).
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Iterator, Literal, Mapping, Sequence

import numpy as np

from pi_crossed.linalg import Tolerance, norm_rank
from pi_crossed.ops import (
    ConeBasis,
    FlatBasis,
    Operator,
    ShiftMap,
    TruncationError,
    grid_map,
    guarded_norm,
    toeplitz_map,
)
from pi_crossed.spaces import enumerate_semigroup

if TYPE_CHECKING:
    from pi_crossed.sigma import SigmaElement

__all__ = [
    "MalformedIndices",
    "Word",
    "Triple",
    "NormalForm",
    "LaurentPoly",
    "Assignment",
    "T",
    "TSTAR",
    "GRID",
    "pn",
    "pnstar",
    "Evaluator",
    "KernelFlags",
    "IntervalFlags",
    "GramEvidence",
    "monomial",
    "monomial_word",
    "normalize",
    "nf_multiply",
    "nf_adjoint",
    "element",
    "evaluate",
    "evaluate_word",
    "symbol",
    "band_symbol",
    "kernel_flags",
    "interval_flags",
    "gram_evidence",
]

logger = logging.getLogger(__name__)

Triple = tuple[int, int, int]
Letter = Literal["v", "v*"]


class MalformedIndices(ValueError):
    """Negative or out-of-range indices for a named element."""


# ---------------------------------------------------------------------------
# Words
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"(v\*?)(?:\^(\d+))?")


@dataclass(frozen=True)
class Word:
    """Finite sequence over ``{v, v*}``; the empty word is the unit."""

    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        for x in self.letters:
            if x not in ("v", "v*"):
                raise ValueError(f"unknown letter {x!r}")

    @classmethod
    def parse(cls, text: str) -> "Word":
        """Parse ``"v v* v^3 v*^2"``; whitespace separates tokens."""
        letters: list[Letter] = []
        for token in text.split():
            match = _TOKEN.fullmatch(token)
            if match is None:
                raise ValueError(f"cannot parse token {token!r}")
            letters.extend([match.group(1)] * int(match.group(2) or 1))  # type: ignore[list-item]
        return cls(tuple(letters))

    def __add__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Letter]:
        return iter(self.letters)

    def adjoint(self) -> "Word":
        flip = {"v": "v*", "v*": "v"}
        return Word(tuple(flip[x] for x in reversed(self.letters)))  # type: ignore[misc]

    @property
    def degree(self) -> int:
        """Number of ``v`` minus number of ``v*``."""
        return sum(1 if x == "v" else -1 for x in self.letters)

    def __str__(self) -> str:
        return " ".join(self.letters) or "1"


def monomial_word(s: int, m: int, t: int) -> Word:
    return Word(("v*",) * s + ("v",) * m + ("v*",) * m + ("v",) * t)


# ---------------------------------------------------------------------------
# Normal forms
# ---------------------------------------------------------------------------

def _check_triple(triple: Triple) -> Triple:
    s, m, t = (int(x) for x in triple)
    if min(s, m, t) < 0 or m < max(s, t):
        raise MalformedIndices(f"({s}, {m}, {t}) is not a canonical monomial")
    return s, m, t


@dataclass(frozen=True)
class NormalForm:
    """``Σ c · M(s, m, t)``; stored sorted, without zero coefficients."""

    terms: tuple[tuple[Triple, complex], ...] = ()

    @classmethod
    def from_mapping(cls, terms: Mapping[Triple, complex]) -> "NormalForm":
        clean = {}
        for triple, c in terms.items():
            c = complex(c)
            if c != 0:
                clean[_check_triple(triple)] = c
        return cls(tuple(sorted(clean.items())))

    @classmethod
    def one(cls) -> "NormalForm":
        return cls((((0, 0, 0), 1 + 0j),))

    def as_dict(self) -> dict[Triple, complex]:
        return dict(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def budget(self) -> int:
        """Largest middle index; shifts never travel further than this."""
        return max((m for (_, m, _), _ in self.terms), default=0)

    # ── linear structure ───────────────────────────────────────────────

    def _combine(self, other: "NormalForm", sign: int) -> "NormalForm":
        out = self.as_dict()
        for triple, c in other.terms:
            out[triple] = out.get(triple, 0) + sign * c
        return NormalForm.from_mapping(out)

    def __add__(self, other: "NormalForm") -> "NormalForm":
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other: "NormalForm") -> "NormalForm":
        if not isinstance(other, NormalForm):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self) -> "NormalForm":
        return NormalForm.from_mapping({k: -c for k, c in self.terms})

    def __mul__(self, other) -> "NormalForm":
        if isinstance(other, NormalForm):
            return nf_multiply(self, other)
        if isinstance(other, (int, float, complex)):
            return NormalForm.from_mapping({k: c * other for k, c in self.terms})
        return NotImplemented

    def __rmul__(self, other) -> "NormalForm":
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def adjoint(self) -> "NormalForm":
        return nf_adjoint(self)

    # ── serialisation ──────────────────────────────────────────────────

    def to_json(self) -> list[list[float]]:
        return [[s, m, t, c.real, c.imag] for (s, m, t), c in self.terms]

    @classmethod
    def from_json(cls, rows: Iterable[Sequence[float]]) -> "NormalForm":
        terms: dict[Triple, complex] = {}
        for row in rows:
            if len(row) != 5:
                raise ValueError(f"normal-form row must be [s, m, t, re, im], got {row!r}")
            s, m, t, re_, im = row
            triple = (int(s), int(m), int(t))
            terms[triple] = terms.get(triple, 0) + complex(re_, im)
        return cls.from_mapping(terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"({c:g})M{triple}" for triple, c in self.terms)


def monomial(s: int, m: int, t: int, coefficient: complex = 1) -> NormalForm:
    return NormalForm.from_mapping({(s, m, t): coefficient})


# Letter rules (right multiplication of a monomial by one letter):
#   M(s,m,t)·v  = M(s, max(m,t+1), t+1)      since v^m v*^m v^m = v^m
#   M(s,m,t)·v* = M(s, m, t-1)               for t > 0
#   M(s,m,0)·v* = M(s+1, m+1, 0)             since v* v^{m+1} v*^{m+1} = v^m v*^{m+1}
def _step(triple: Triple, letter: Letter) -> Triple:
    s, m, t = triple
    if letter == "v":
        return s, max(m, t + 1), t + 1
    if t > 0:
        return s, m, t - 1
    return s + 1, m + 1, 0


def normalize(w: Word) -> NormalForm:
    """Reduce a word to its canonical monomial.

    A left fold of :func:`_step` over the letters: each step consumes one
    letter, so rewriting ends after ``len(w)`` steps with a single monomial.
    """
    triple: Triple = (0, 0, 0)
    for letter in w:
        triple = _step(triple, letter)
    logger.debug("normalize %s -> M%s", w, triple)
    return monomial(*triple)


def _monomial_product(a: Triple, b: Triple) -> Triple:
    # closed form of folding b's word onto a
    s1, m1, t1 = a
    s2, m2, t2 = b
    t = max(t2, t1 + t2 - s2)
    m = t + max(m2 - t2, m1 - t1 - t2 + s2)
    s = t - (t1 - s1) - (t2 - s2)
    return s, m, t


def nf_multiply(x: NormalForm, y: NormalForm) -> NormalForm:
    out: dict[Triple, complex] = {}
    for a, c in x.terms:
        for b, d in y.terms:
            triple = _monomial_product(a, b)
            out[triple] = out.get(triple, 0) + c * d
    return NormalForm.from_mapping(out)


def nf_adjoint(x: NormalForm) -> NormalForm:
    return NormalForm.from_mapping({(t, m, s): c.conjugate() for (s, m, t), c in x.terms})


def _power(letter: Letter, n: int) -> NormalForm:
    return normalize(Word((letter,) * n))


def _nonnegative(*indices: int) -> None:
    if any(int(i) != i or i < 0 for i in indices):
        raise MalformedIndices(f"indices must be natural numbers, got {indices}")


def element(kind: str, *indices: int) -> "NormalForm | SigmaElement":
    """Named elements.

    ``f(i, j, m) = v^i v*^m v^m (1 − vv*) v*^j``,
    ``g(i, j, m) = v*^i v^m v*^m (1 − v*v) v^j``,
    ``e(i, j, m) = f(i, j, m) − f(i, j, m+1)`` (needs ``i, j ≤ m``),
    ``q(n)`` is the σ-system span element from :mod:`pi_crossed.sigma`.
    """
    one = NormalForm.one()
    if kind == "q":
        from pi_crossed.sigma import q_element

        if len(indices) != 1:
            raise MalformedIndices("q takes one index")
        _nonnegative(*indices)
        return q_element(indices[0])

    if len(indices) != 3:
        raise MalformedIndices(f"{kind} takes three indices (i, j, m)")
    _nonnegative(*indices)
    i, j, m = indices

    if kind == "f":
        vv = _power("v", 1) * _power("v*", 1)
        return _power("v", i) * _power("v*", m) * _power("v", m) * (one - vv) * _power("v*", j)
    if kind == "g":
        vv = _power("v*", 1) * _power("v", 1)
        return _power("v*", i) * _power("v", m) * _power("v*", m) * (one - vv) * _power("v", j)
    if kind == "e":
        if i > m or j > m:
            raise MalformedIndices(f"e({i}, {j}, {m}) needs i, j ≤ m")
        return element("f", i, j, m) - element("f", i, j, m + 1)
    raise MalformedIndices(f"unknown element kind {kind!r}")


# ---------------------------------------------------------------------------
# Laurent polynomials and symbols
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LaurentPoly:
    coefficients: tuple[tuple[int, complex], ...] = ()

    @classmethod
    def from_mapping(cls, coeffs: Mapping[int, complex], atol: float = 0.0) -> "LaurentPoly":
        return cls(tuple(sorted((d, complex(c)) for d, c in coeffs.items() if abs(c) > atol)))

    def coefficient(self, degree: int) -> complex:
        return dict(self.coefficients).get(degree, 0j)

    def degrees(self) -> set[int]:
        return {d for d, _ in self.coefficients}

    def max_deviation(self, other: "LaurentPoly") -> float:
        degrees = self.degrees() | other.degrees()
        return max((abs(self.coefficient(d) - other.coefficient(d)) for d in degrees), default=0.0)

    def __bool__(self) -> bool:
        return bool(self.coefficients)

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        return " + ".join(f"({c:g})z^{d}" for d, c in self.coefficients)


def symbol(x: NormalForm, star: bool = False) -> LaurentPoly:
    """Image under the symbol map: ``M(s,m,t) ↦ z^{t−s}`` (``z^{s−t}`` for *star*)."""
    out: dict[int, complex] = {}
    for (s, _, t), c in x.terms:
        d = s - t if star else t - s
        out[d] = out.get(d, 0) + c
    return LaurentPoly.from_mapping(out)


def band_symbol(a: Operator, max_degree: int) -> LaurentPoly:
    """Estimate the symbol of a Toeplitz-plus-finite-rank matrix.

    The coefficient of ``z^d`` is the mean of ``A[k+d, k]`` over ``k`` in the
    middle third of the truncation.
    """
    n = a.dim
    lo, hi = n // 3, (2 * n) // 3
    coeffs: dict[int, complex] = {}
    for d in range(-max_degree, max_degree + 1):
        ks = [k for k in range(lo, hi) if 0 <= k + d < n]
        if not ks:
            raise TruncationError(f"no middle band for degree {d} at size {n}")
        coeffs[d] = complex(np.mean([a.matrix[k + d, k] for k in ks]))
    return LaurentPoly.from_mapping(coeffs, atol=1e-14)


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Assignment:
    """Where ``v`` goes: ``T``, ``Tstar``, ``pn(n)``, ``pnstar(n)`` or ``grid``."""

    kind: Literal["T", "Tstar", "pn", "pnstar", "grid"]
    n: int | None = None

    def __post_init__(self) -> None:
        if self.kind in ("pn", "pnstar") and (self.n is None or self.n < 0):
            raise ValueError(f"{self.kind} needs n ≥ 0")

    @property
    def is_exact(self) -> bool:
        return self.kind in ("pn", "pnstar")

    def __str__(self) -> str:
        return f"{self.kind}({self.n})" if self.n is not None else self.kind


T = Assignment("T")
TSTAR = Assignment("Tstar")
GRID = Assignment("grid")


def pn(n: int) -> Assignment:
    return Assignment("pn", n)


def pnstar(n: int) -> Assignment:
    return Assignment("pnstar", n)


class Evaluator:
    """Generator images for one (assignment, size) pair, with cached monomial maps.

    ``size`` is the number of labels for ``T``/``Tstar``/``pn``/``pnstar`` and
    the grid side ``N`` for ``grid``.
    """

    def __init__(self, assignment: Assignment, size: int) -> None:
        self.assignment = assignment
        self.size = size
        self._v, self._vstar = self._generators()
        self._powers: dict[tuple[Letter, int], ShiftMap] = {}
        self._monomials: dict[Triple, ShiftMap] = {}

    def _generators(self) -> tuple[ShiftMap, ShiftMap]:
        kind, size = self.assignment.kind, self.size
        if kind == "grid":
            v = grid_map(size, "tau", 1)
        elif kind in ("T", "Tstar"):
            if size < 2:
                raise TruncationError("Toeplitz truncation needs at least two labels")
            v = toeplitz_map(enumerate_semigroup([1], size - 1), 1)
            if kind == "Tstar":
                v = v.adjoint()
        else:
            n = self.assignment.n
            if size < n + 1:
                raise TruncationError(f"{self.assignment} needs at least {n + 1} labels, got {size}")
            # P_n T P_n: e_k -> e_{k+1} while k+1 ≤ n
            targets = np.array([k + 1 if k + 1 <= n else -1 for k in range(size)])
            v = ShiftMap(targets, FlatBasis(size))
            if kind == "pnstar":
                v = v.adjoint()
        return v, v.adjoint()

    @property
    def basis(self):
        return self._v.basis

    def _budget(self, budget: int):
        return 0 if self.assignment.is_exact else budget

    def power(self, letter: Letter, n: int) -> ShiftMap:
        key = (letter, n)
        if key not in self._powers:
            g = self._v if letter == "v" else self._vstar
            out = ShiftMap.identity(self.basis)
            for _ in range(n):
                out = g @ out
            self._powers[key] = ShiftMap(out.targets, self.basis)
        return self._powers[key]

    def monomial_map(self, triple: Triple) -> ShiftMap:
        if triple not in self._monomials:
            s, m, t = triple
            composed = self.power("v*", s) @ self.power("v", m) @ self.power("v*", m) @ self.power("v", t)
            self._monomials[triple] = ShiftMap(composed.targets, self.basis, self._budget(m))
        return self._monomials[triple]

    def word_map(self, w: Word) -> ShiftMap:
        out = ShiftMap.identity(self.basis)
        for letter in w:
            out = self.power(letter, 1) @ out
        return ShiftMap(out.targets, self.basis, self._budget(len(w)))

    def operator(self, x: NormalForm) -> Operator:
        n = len(self.basis)
        matrix = np.zeros((n, n), dtype=np.complex128)
        for triple, c in x.terms:
            targets = self.monomial_map(triple).targets
            src = np.nonzero(targets >= 0)[0]
            matrix[targets[src], src] += c
        op = Operator(matrix, self.basis, self._budget(x.budget))
        if op.guard().size == 0:
            raise TruncationError(f"budget {x.budget} exceeds the guard band of {self.assignment} at size {n}")
        return op


@lru_cache(maxsize=64)
def _evaluator(assignment: Assignment, size: int) -> Evaluator:
    return Evaluator(assignment, size)


def _default_size(assignment: Assignment, size: int | None) -> int:
    if size is not None:
        return size
    if assignment.is_exact:
        return assignment.n + 1  # type: ignore[operator]
    raise ValueError(f"{assignment} needs an explicit truncation size")


def evaluate(x: NormalForm, assignment: Assignment, size: int | None = None) -> Operator:
    """Image of *x* under the homomorphism fixed by *assignment*."""
    return _evaluator(assignment, _default_size(assignment, size)).operator(x)


def evaluate_word(w: Word, assignment: Assignment, size: int | None = None) -> Operator:
    """Image of the raw word, letter by letter (budget = word length)."""
    return _evaluator(assignment, _default_size(assignment, size)).word_map(w).to_operator()


# ---------------------------------------------------------------------------
# Kernels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelFlags:
    in_ker_phi_t: bool
    in_ker_phi_tstar: bool
    residual_t: float = field(default=0.0, compare=False)
    residual_tstar: float = field(default=0.0, compare=False)

    @property
    def in_i(self) -> bool:
        return self.in_ker_phi_t and self.in_ker_phi_tstar


def kernel_flags(x: NormalForm, guard_size: int, tol: Tolerance | None = None) -> KernelFlags:
    """Kernel membership for the Toeplitz and adjoint-Toeplitz images, by guarded norm."""
    tol = tol or Tolerance()
    if guard_size <= x.budget + 1:
        raise TruncationError(f"guard size {guard_size} does not exceed budget {x.budget}")
    rt = guarded_norm(evaluate(x, T, guard_size))
    rs = guarded_norm(evaluate(x, TSTAR, guard_size))
    return KernelFlags(rt <= tol.eq_tol, rs <= tol.eq_tol, rt, rs)


@dataclass(frozen=True)
class IntervalFlags:
    """``in_ker_q``: killed by every ``π_r`` with ``r ≤ s``; ``in_ker_q_minus``: by every ``r < s``."""

    in_ker_q: bool
    in_ker_q_minus: bool


def interval_flags(x: NormalForm, s: int, tol: Tolerance | None = None) -> IntervalFlags:
    tol = tol or Tolerance()
    if s < 0:
        raise MalformedIndices("s must be nonnegative")
    # each π_r acts on exactly r+1 labels; extra labels would see v = 0
    vanishes = [guarded_norm(evaluate(x, pn(r))) <= tol.eq_tol for r in range(s + 1)]
    return IntervalFlags(all(vanishes), all(vanishes[:-1]))


# ---------------------------------------------------------------------------
# Independence evidence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GramEvidence:
    count: int
    rank: int

    @property
    def deficient(self) -> bool:
        return self.rank < self.count


def gram_evidence(
    triples: Sequence[Triple],
    assignment: Assignment = GRID,
    size: int = 24,
    tol: Tolerance | None = None,
) -> GramEvidence:
    """Numeric rank of the trace-inner-product Gram matrix of monomial images.

    Monomial images are partial permutations, so ``⟨A, B⟩`` counts the guard
    columns on which both send a basis vector to the same place.
    """
    tol = tol or Tolerance()
    ev = _evaluator(assignment, size)
    budget = max((m for _, m, _ in triples), default=0)
    cols = ev.basis.guard(ev._budget(budget))
    if cols.size == 0:
        raise TruncationError("gram evidence: empty guard band")
    maps = np.stack([ev.monomial_map(_check_triple(tr)).targets[cols] for tr in triples])
    live = maps >= 0
    gram = ((maps[:, None, :] == maps[None, :, :]) & live[:, None, :]).sum(axis=2).astype(float)
    rank = norm_rank(gram, tol).rank
    if rank < len(triples):
        logger.warning("monomial Gram matrix is rank deficient: %d < %d", rank, len(triples))
    return GramEvidence(len(triples), rank)
