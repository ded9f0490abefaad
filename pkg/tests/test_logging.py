# File: tests/test_logging.py
import json
import logging
from pathlib import Path

import pytest

from pi_crossed.logging import configure_logging

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def _reset_root_logger():
    """Remove handlers & reset level so each test starts clean."""
    root = logging.getLogger()
    for h in list(root.handlers):
        root.removeHandler(h)
    root.setLevel(logging.NOTSET)


def _flush_handlers():
    for h in logging.getLogger().handlers:
        h.flush()


@pytest.fixture(autouse=True)
def _clean_root():
    _reset_root_logger()
    yield
    _reset_root_logger()


# ---------------------------------------------------------------------------
# Tests
# ---------------------------------------------------------------------------


def test_verbose_module_sets_debug():
    module_name = "pi_crossed.algebra"
    logging.getLogger(module_name).setLevel(logging.WARNING)

    configure_logging(level_name="info", verbose_modules=[module_name])
    assert logging.getLogger(module_name).level == logging.DEBUG


def test_default_quiet_modules():
    configure_logging(level_name="debug")
    assert logging.getLogger("asyncio").level == logging.ERROR
    assert logging.getLogger("opentelemetry").level == logging.WARNING


def test_quiet_module_overrides_default():
    configure_logging(level_name="debug", quiet_modules={"opentelemetry": "ERROR"})
    assert logging.getLogger("opentelemetry").level == logging.ERROR


def test_verbose_wins_over_quiet():
    configure_logging(
        level_name="info",
        verbose_modules=["pi_crossed.sigma"],
        quiet_modules={"pi_crossed.sigma": "ERROR"},
    )
    assert logging.getLogger("pi_crossed.sigma").level == logging.DEBUG


def test_plain_text_goes_to_stderr(capsys):
    configure_logging(level_name="info")
    logging.getLogger("pi_crossed.run").info("hello residuals")
    _flush_handlers()
    out, err = capsys.readouterr()

    assert out == ""
    assert "pi_crossed.run" in err and "hello residuals" in err
    assert "INFO" in err.split()[:4]


def test_json_format_env(monkeypatch, capsys):
    monkeypatch.setenv("LOG_FORMAT", "json")

    configure_logging(level_name="info")
    logging.getLogger("pi_crossed").info("hello json")
    _flush_handlers()
    _, err = capsys.readouterr()

    record = json.loads(err.strip())
    assert record["name"] == "pi_crossed"
    assert record["levelname"] == "INFO"
    assert record["message"] == "hello json"


def test_json_flag_beats_env(monkeypatch, capsys):
    monkeypatch.setenv("LOG_FORMAT", "json")

    configure_logging(level_name="info", json=False)
    logging.getLogger("pi_crossed").info("plain please")
    _flush_handlers()
    _, err = capsys.readouterr()
    assert not err.lstrip().startswith("{")


def test_level_filters(capsys):
    configure_logging(level_name="warning")
    logging.getLogger("pi_crossed").info("hidden")
    _flush_handlers()
    assert "hidden" not in capsys.readouterr().err


def test_file_logging(tmp_path: Path):
    log_file = tmp_path / "verify.log"

    configure_logging(level_name="info", file_path=str(log_file))
    logging.getLogger("pi_crossed").info("file output")
    _flush_handlers()

    assert "file output" in log_file.read_text()
