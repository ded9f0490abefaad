# pi_crossed/suites/suite_registry.py
from typing import Dict, Iterable, List, Optional

from pi_crossed.suites.verification_suite import SuiteContext, VerificationSuite

__all__ = ["UnknownSuite", "SuiteRegistry"]


class UnknownSuite(KeyError):
    """Raised for a suite name that is not registered."""


class SuiteRegistry:
    """Registry of verification suites keyed by name."""

    def __init__(self) -> None:
        self._suites: Dict[str, VerificationSuite] = {}

    def register(self, suite: VerificationSuite) -> None:
        """
        Register a suite, replacing any previous suite of the same name.

        Args:
            suite: The suite instance to register
        """
        self._suites[suite.name] = suite

    def get(self, name: str) -> VerificationSuite:
        """
        Get a suite by name.

        Raises:
            UnknownSuite: If no suite has that name
        """
        try:
            return self._suites[name]
        except KeyError:
            raise UnknownSuite(name) from None

    def get_all(self) -> Dict[str, VerificationSuite]:
        """Get all registered suites."""
        return dict(self._suites)

    def names(self) -> List[str]:
        return sorted(self._suites)

    def resolve(self, names: Iterable[str], ctx: Optional[SuiteContext] = None) -> List[VerificationSuite]:
        """
        Expand a requested list of names into suites, sorted and duplicate-free.

        ``all`` selects every suite enabled for *ctx*; explicitly named suites
        run regardless of :meth:`VerificationSuite.enabled`.

        Raises:
            UnknownSuite: On the first unregistered name
        """
        chosen: Dict[str, VerificationSuite] = {}
        for name in names:
            if name == "all":
                for suite in self._suites.values():
                    if ctx is None or suite.enabled(ctx):
                        chosen[suite.name] = suite
            else:
                chosen[name] = self.get(name)
        return [chosen[n] for n in sorted(chosen)]
