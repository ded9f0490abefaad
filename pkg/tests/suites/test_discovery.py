# tests/suites/test_discovery.py
"""
Discovery of the built-in verification suites.
"""

from unittest.mock import patch

import pytest

from pi_crossed.suites import VerificationSuite, build_registry, discover_all_suites
from pi_crossed.suites.discovery import discover_suites_in_package

EXPECTED = {
    "jk_dimension",
    "dirsum",
    "matrix_units",
    "tool_criterion",
    "commprojs",
    "toeplitz_ideal",
    "jk_decomposition",
    "noncompact",
    "covariance",
    "faithfulness",
    "rform",
    "pin_images",
    "automorphism",
    "normal_form",
    "sigma_system",
    "csigman_symbol",
    "negative_control",
}


def test_builtin_suites_found():
    registry = build_registry()
    assert set(registry.names()) == EXPECTED


def test_discovered_classes_are_concrete():
    classes = discover_all_suites()
    assert len(classes) == len(EXPECTED)
    assert all(issubclass(cls, VerificationSuite) for cls in classes)


def test_every_suite_describes_itself():
    for suite in build_registry().get_all().values():
        assert suite.description
        assert suite.name == suite.name.lower()


def test_missing_package_yields_nothing(caplog):
    assert list(discover_suites_in_package("pi_crossed.no_such_package")) == []
    assert "Could not import" in caplog.text


def test_repeated_package_yields_each_class_once():
    registry = build_registry(["pi_crossed.suites.checks", "pi_crossed.suites.checks"])
    assert len(registry.names()) == len(EXPECTED)


def test_duplicate_suite_names_raise():
    class _Dup(VerificationSuite):
        @property
        def name(self):
            return "dirsum"

        def run(self, ctx):
            return []

    with patch("pi_crossed.suites.discovery.discover_all_suites", return_value=[_Dup, _Dup]):
        with pytest.raises(ValueError):
            build_registry()
