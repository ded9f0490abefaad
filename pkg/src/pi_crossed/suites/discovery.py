# pi_crossed/suites/discovery.py
"""
Automatic discovery and registration of VerificationSuite subclasses.
"""
from __future__ import annotations

import importlib
import inspect
import logging
import pkgutil
from typing import Iterator, List, Optional, Type

from pi_crossed.suites.suite_registry import SuiteRegistry
from pi_crossed.suites.verification_suite import VerificationSuite

__all__ = ["DEFAULT_PACKAGES", "discover_suites_in_package", "discover_all_suites", "build_registry"]

logger = logging.getLogger(__name__)

DEFAULT_PACKAGES = ["pi_crossed.suites.checks"]


def discover_suites_in_package(package_name: str) -> Iterator[Type[VerificationSuite]]:
    """Yield every concrete VerificationSuite subclass found inside *package_name*."""
    try:
        package = importlib.import_module(package_name)
    except ImportError:
        logger.warning("Could not import package %s for suite discovery", package_name)
        return

    prefix = package.__name__ + "."
    for _, modname, _ in pkgutil.walk_packages(package.__path__, prefix):
        module = importlib.import_module(modname)
        for _, obj in inspect.getmembers(module, inspect.isclass):
            if (
                issubclass(obj, VerificationSuite)
                and obj is not VerificationSuite
                and obj.__module__ == modname
                and not inspect.isabstract(obj)
            ):
                logger.debug("Discovered suite %s in %s", obj.__name__, modname)
                yield obj


def discover_all_suites(packages: Optional[List[str]] = None) -> List[Type[VerificationSuite]]:
    found: list[Type[VerificationSuite]] = []
    for pkg in packages or DEFAULT_PACKAGES:
        for cls in discover_suites_in_package(pkg):
            if cls not in found:
                found.append(cls)
    logger.debug("Discovered %d suites", len(found))
    return found


def build_registry(packages: Optional[List[str]] = None) -> SuiteRegistry:
    """Instantiate and register every discovered suite."""
    registry = SuiteRegistry()
    for cls in discover_all_suites(packages):
        suite = cls()
        if suite.name in registry.get_all():
            raise ValueError(f"duplicate suite name {suite.name!r} ({cls.__name__})")
        registry.register(suite)
    return registry
