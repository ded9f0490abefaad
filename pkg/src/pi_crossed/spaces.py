# pi_crossed/spaces.py
"""
Truncated positive cones of subsemigroups of ℝ inside the ring ℚ + ℚ√2.

Elements are compared exactly: the sign of ``a + b√2`` is decided by sign
analysis on rationals, never by floating point.
"""
from __future__ import annotations

import itertools
import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache, total_ordering
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SemigroupError",
    "SemigroupElement",
    "IndexSet",
    "parse_element",
    "enumerate_semigroup",
    "enumerate_group_cone",
    "interval",
    "guard_band",
]

logger = logging.getLogger(__name__)

_SQRT2 = 2 ** 0.5


class SemigroupError(ValueError):
    """Invalid generators, cutoffs or out-of-truncation requests."""


@lru_cache(maxsize=4096)
def _sign(a: Fraction, b: Fraction) -> int:
    """Sign of a + b√2."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a² with 2b²
    diff = a * a - 2 * b * b
    if a > 0:
        return 1 if diff > 0 else -1
    return -1 if diff > 0 else 1


@total_ordering
@dataclass(frozen=True)
class SemigroupElement:
    """Nonnegative number ``a + b√2`` with rational coordinates."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))
        if _sign(self.a, self.b) < 0:
            raise SemigroupError(f"{self.a} + {self.b}√2 is negative")

    @classmethod
    def of(cls, value: "SemigroupElement | int | Fraction") -> "SemigroupElement":
        if isinstance(value, SemigroupElement):
            return value
        return cls(Fraction(value), Fraction(0))

    @classmethod
    def zero(cls) -> "SemigroupElement":
        return cls()

    # ── arithmetic ─────────────────────────────────────────────────────

    def __add__(self, other) -> "SemigroupElement":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return SemigroupElement(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other) -> "SemigroupElement":
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return SemigroupElement(self.a - o.a, self.b - o.b)

    def __mul__(self, n: int) -> "SemigroupElement":
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        return SemigroupElement(self.a * n, self.b * n)

    __rmul__ = __mul__

    # ── ordering ───────────────────────────────────────────────────────

    def __eq__(self, other) -> bool:
        try:
            o = _coerce(other)
        except SemigroupError:
            # negative scalars lie outside the semigroup
            return False
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self) -> int:
        # rational elements hash like the Fraction (and int) they equal
        return hash(self.a) if self.b == 0 else hash((self.a, self.b))

    def __lt__(self, other) -> bool:
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return _sign(self.a - o.a, self.b - o.b) < 0

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * _SQRT2

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    @property
    def is_integer(self) -> bool:
        return self.b == 0 and self.a.denominator == 1

    def __int__(self) -> int:
        if not self.is_integer:
            raise SemigroupError(f"{self} is not an integer")
        return int(self.a)

    def __repr__(self) -> str:
        if self.b == 0:
            return str(self.a)
        tail = "√2" if self.b == 1 else f"{self.b}√2"
        return tail if self.a == 0 else f"{self.a}+{tail}"


def _coerce(value) -> SemigroupElement | None:
    if isinstance(value, SemigroupElement):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        if value < 0:
            raise SemigroupError(f"{value} is negative")
        return SemigroupElement(Fraction(value))
    return None


def parse_element(spec) -> SemigroupElement:
    """Parse ``n`` or ``[a_num, a_den, b_num, b_den]`` into an element."""
    if isinstance(spec, SemigroupElement):
        return spec
    if isinstance(spec, int) and not isinstance(spec, bool):
        return SemigroupElement.of(spec)
    if isinstance(spec, (list, tuple)) and len(spec) == 4:
        a_num, a_den, b_num, b_den = (int(x) for x in spec)
        if a_den == 0 or b_den == 0:
            raise SemigroupError(f"zero denominator in {spec!r}")
        return SemigroupElement(Fraction(a_num, a_den), Fraction(b_num, b_den))
    raise SemigroupError(f"cannot parse semigroup element from {spec!r}")


# ---------------------------------------------------------------------------
# Index sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexSet:
    """Sorted truncation of a positive cone.

    ``mode == "semigroup"``: ℕ-combinations of the generators up to the cutoff
    (closed under addition below the cutoff).  ``mode == "group"``: integer
    combinations with bounded coefficients and value in ``[0, cutoff]``, a
    finite window of the dense cone ``Γ ∩ [0, ∞)``.
    """

    generators: tuple[SemigroupElement, ...]
    cutoff: SemigroupElement
    elements: tuple[SemigroupElement, ...]
    mode: str = "semigroup"
    depth: int | None = field(default=None, compare=False)

    @cached_property
    def _positions(self) -> dict[SemigroupElement, int]:
        return {x: i for i, x in enumerate(self.elements)}

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, x) -> bool:
        return x in self._positions

    def __iter__(self):
        return iter(self.elements)

    def index(self, x: SemigroupElement) -> int:
        try:
            return self._positions[x]
        except KeyError:
            raise SemigroupError(f"{x!r} is not in the truncation") from None

    @cached_property
    def values(self) -> np.ndarray:
        return np.array([float(x) for x in self.elements])


def _check_generators(generators: Iterable) -> tuple[SemigroupElement, ...]:
    gens = tuple(parse_element(g) for g in generators)
    if not gens:
        raise SemigroupError("generator list is empty")
    for g in gens:
        if not g:
            raise SemigroupError("generators must be strictly positive")
    return gens


def enumerate_semigroup(generators: Sequence, cutoff) -> IndexSet:
    """All ℕ-combinations of *generators* with value ≤ *cutoff*, sorted.

    Breadth-first search over sums; combinations that coincide in value are
    merged by exact ``(a, b)`` equality.
    """
    gens = _check_generators(generators)
    top = parse_element(cutoff)

    seen = {SemigroupElement.zero()}
    queue = deque(seen)
    while queue:
        x = queue.popleft()
        for g in gens:
            y = x + g
            if y <= top and y not in seen:
                seen.add(y)
                queue.append(y)

    elements = tuple(sorted(seen))
    logger.debug("enumerated %d elements for generators %s ≤ %r", len(elements), gens, top)
    return IndexSet(gens, top, elements)


def enumerate_group_cone(generators: Sequence, depth: int, ceiling) -> IndexSet:
    """Elements ``Σ c_i g_i ∈ [0, ceiling]`` with integer ``|c_i| ≤ depth``."""
    gens = _check_generators(generators)
    top = parse_element(ceiling)
    if depth < 0:
        raise SemigroupError("depth must be nonnegative")

    found: set[SemigroupElement] = set()
    for coeffs in itertools.product(range(-depth, depth + 1), repeat=len(gens)):
        a = sum((c * g.a for c, g in zip(coeffs, gens)), Fraction(0))
        b = sum((c * g.b for c, g in zip(coeffs, gens)), Fraction(0))
        if _sign(a, b) < 0:
            continue
        x = SemigroupElement(a, b)
        if x <= top:
            found.add(x)

    return IndexSet(gens, top, tuple(sorted(found)), mode="group", depth=depth)


def interval(index_set: IndexSet, s, closed: bool) -> list[SemigroupElement]:
    """``[0, s]`` (closed) or ``[0, s)`` within the truncation."""
    s = parse_element(s)
    if s > index_set.cutoff:
        raise SemigroupError(f"{s!r} exceeds the cutoff {index_set.cutoff!r}")
    if closed:
        return [x for x in index_set.elements if x <= s]
    return [x for x in index_set.elements if x < s]


def guard_band(index_set: IndexSet, budget) -> list[SemigroupElement]:
    """Labels ``r`` with ``r + budget ≤ cutoff``."""
    budget = parse_element(budget)
    return [x for x in index_set.elements if x + budget <= index_set.cutoff]
