# pi_crossed/suites/verification_suite.py
"""
Base interface for verification suites.

A suite is a named group of checks tied to one statement.  Each check
produces a residual that passes when it is at most the check's threshold;
a check that raises is recorded as failed with no residual.
"""
from __future__ import annotations

import abc
import hashlib
import logging
import math
import time
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, Optional

import numpy as np

from pi_crossed.config import SuiteConfig
from pi_crossed.linalg import Tolerance
from pi_crossed.report import CheckRecord
from pi_crossed.spaces import IndexSet, enumerate_semigroup

__all__ = ["SuiteContext", "VerificationSuite", "flag"]

logger = logging.getLogger(__name__)

_UINT64 = (1 << 64) - 1


def flag(ok: bool) -> float:
    """Residual for a yes/no check: 0 when it holds, 1 when it does not."""
    return 0.0 if ok else 1.0


@dataclass(frozen=True)
class SuiteContext:
    """Read-only inputs shared by every suite in one run."""

    config: SuiteConfig

    @property
    def tol(self) -> Tolerance:
        return self.config.tolerances

    @property
    def grid_n(self) -> int:
        return self.config.grid_n

    @cached_property
    def integers(self) -> IndexSet:
        """ℕ truncated at the configured cutoff."""
        return enumerate_semigroup([1], self.config.cutoff_element)

    @cached_property
    def configured_set(self) -> IndexSet:
        """ℕ-combinations of the configured generators up to the cutoff."""
        return enumerate_semigroup(self.config.generator_elements, self.config.cutoff_element)

    def rng(self, name: str) -> np.random.Generator:
        """Counter-based generator keyed by the run seed and the check name."""
        digest = int.from_bytes(hashlib.blake2b(name.encode(), digest_size=8).digest(), "little")
        return np.random.Generator(np.random.Philox(key=[self.config.seed & _UINT64, digest]))


class VerificationSuite(abc.ABC):
    """A named group of checks."""

    #: one-line statement the suite verifies
    description: str = ""
    #: anchor recorded on every check unless overridden
    anchor: str = ""

    @property
    @abc.abstractmethod
    def name(self) -> str:
        """Unique suite name (stable public API)."""

    def enabled(self, ctx: SuiteContext) -> bool:
        """Whether ``all`` includes this suite for *ctx*."""
        return True

    @abc.abstractmethod
    def run(self, ctx: SuiteContext) -> List[CheckRecord]:
        """Execute every check and return their records.

        Runs in a worker thread; must not mutate shared state.
        """

    def measure(
        self,
        name: str,
        fn: Callable[[], float],
        threshold: float,
        anchor: Optional[str] = None,
    ) -> CheckRecord:
        """Time *fn* and turn its residual into a record."""
        start = time.perf_counter()
        residual: Optional[float]
        try:
            residual = float(fn())
            passed = not math.isnan(residual) and residual <= threshold
        except Exception:  # noqa: BLE001 - a raising check is a failed check
            logger.warning("Check %s raised", name, exc_info=True)
            residual, passed = None, False
        millis = int(round((time.perf_counter() - start) * 1000))

        if passed:
            logger.info("%s passed: residual %.3e ≤ %.1e", name, residual, threshold)
        elif residual is not None:
            logger.warning("%s FAILED: residual %.3e > %.1e", name, residual, threshold)
        return CheckRecord(
            name=name,
            anchor=anchor or self.anchor,
            residual=residual,
            threshold=threshold,
            passed=passed,
            millis=millis,
        )

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"
