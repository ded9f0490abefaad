# File: tests/test_config.py
import textwrap

import pytest

from pi_crossed.config import (
    DEFAULT_CONFIG,
    ConfigError,
    SuiteConfig,
    build_suite_config,
    load_config,
)
from pi_crossed.spaces import SemigroupElement

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _write_yaml(tmp_path, content: str) -> str:
    """Write *content* to a fresh YAML file under *tmp_path* and return its path."""
    p = tmp_path / "suite.yaml"
    p.write_text(textwrap.dedent(content))
    return str(p)

# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

@pytest.mark.asyncio
async def test_load_default_config():
    """Calling without a path returns a copy of DEFAULT_CONFIG."""
    cfg = await load_config(None)
    assert cfg == DEFAULT_CONFIG and cfg is not DEFAULT_CONFIG
    cfg["tolerances"]["eqTol"] = 1.0
    assert DEFAULT_CONFIG["tolerances"]["eqTol"] == 1e-10


@pytest.mark.asyncio
async def test_load_nonexistent_path(tmp_path):
    """A missing file falls back to defaults."""
    cfg = await load_config(str(tmp_path / "does_not_exist.yaml"))
    assert cfg == DEFAULT_CONFIG


@pytest.mark.asyncio
async def test_simple_merge(tmp_path):
    """Top-level keys override defaults while others stay intact."""
    path = _write_yaml(
        tmp_path,
        """
        cutoff: 60
        suites: [tool_criterion, jk_dimension]
        """,
    )
    cfg = await load_config(path)
    assert cfg["cutoff"] == 60
    assert cfg["suites"] == ["tool_criterion", "jk_dimension"]
    assert cfg["gridN"] == DEFAULT_CONFIG["gridN"]


@pytest.mark.asyncio
async def test_deep_merge_nested(tmp_path):
    """Nested mappings are merged recursively, not replaced."""
    path = _write_yaml(
        tmp_path,
        """
        tolerances:
          rankTol: 1.0e-6
        logging:
          quiet_modules:
            numpy: ERROR
        """,
    )
    cfg = await load_config(path)
    assert cfg["tolerances"] == {"eqTol": 1e-10, "rankTol": 1e-6}
    assert cfg["logging"]["quiet_modules"] == {"numpy": "ERROR"}
    assert cfg["logging"]["level"] == "info"


@pytest.mark.asyncio
async def test_unparsable_yaml(tmp_path):
    path = _write_yaml(tmp_path, "cutoff: [1, 2\n")
    with pytest.raises(ConfigError):
        await load_config(path)


@pytest.mark.asyncio
async def test_top_level_must_be_mapping(tmp_path):
    path = _write_yaml(tmp_path, "- just\n- a list\n")
    with pytest.raises(ConfigError):
        await load_config(path)

# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------

class TestSuiteConfig:
    """build_suite_config turns the merged mapping into a SuiteConfig."""

    def test_defaults_validate(self):
        cfg = build_suite_config(DEFAULT_CONFIG)
        assert isinstance(cfg, SuiteConfig)
        assert cfg.grid_n == 24
        assert cfg.out_path == "report.json"
        assert cfg.tolerances.eq_tol == 1e-10
        assert cfg.cutoff_element == SemigroupElement.of(40)
        assert not cfg.inject_perturbation

    def test_comma_separated_suites(self):
        cfg = build_suite_config({**DEFAULT_CONFIG, "suites": "dirsum, commprojs"})
        assert cfg.suites == ["dirsum", "commprojs"]

    def test_irrational_generators(self):
        cfg = build_suite_config({**DEFAULT_CONFIG, "generators": [1, [0, 1, 1, 1]]})
        assert cfg.generator_elements[1] == SemigroupElement(0, 1)

    @pytest.mark.parametrize(
        "override",
        [
            {"gridN": 4},
            {"cutoff": 3},
            {"cutoff": "forty"},
            {"generators": []},
            {"generators": [0]},
            {"suites": []},
            {"tolerances": {"eqTol": -1.0}},
        ],
    )
    def test_invalid_values(self, override):
        with pytest.raises(ConfigError):
            build_suite_config({**DEFAULT_CONFIG, **override})

    def test_frozen(self):
        cfg = build_suite_config(DEFAULT_CONFIG)
        with pytest.raises(Exception):
            cfg.seed = 3
