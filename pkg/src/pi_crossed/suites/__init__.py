# pi_crossed/suites/__init__.py
"""Verification suites: base class, registry, discovery and the concurrent runner."""
from pi_crossed.suites.discovery import build_registry, discover_all_suites
from pi_crossed.suites.suite_manager import DuplicateCheck, SuiteManager
from pi_crossed.suites.suite_registry import SuiteRegistry, UnknownSuite
from pi_crossed.suites.verification_suite import SuiteContext, VerificationSuite, flag

__all__ = [
    "build_registry",
    "discover_all_suites",
    "DuplicateCheck",
    "SuiteManager",
    "SuiteRegistry",
    "UnknownSuite",
    "SuiteContext",
    "VerificationSuite",
    "flag",
]
