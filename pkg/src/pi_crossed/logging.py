# pi_crossed/logging.py
"""Root logger setup for verification runs.

Log records go to stderr so ``--list`` and report output on stdout stay
machine-readable.  ``LOG_FORMAT=json`` switches to one JSON object per line.
"""
from __future__ import annotations

import logging
import os
import sys
from typing import Dict, Iterable, List, Mapping, Optional

from pythonjsonlogger.json import JsonFormatter

__all__ = ["configure_logging"]

_TEXT_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
_JSON_FIELDS = "%(asctime)s %(levelname)s %(name)s %(message)s"

# third-party chatter plus our own per-module discovery noise
_QUIET_BY_DEFAULT: Dict[str, str] = {
    "asyncio": "ERROR",
    "opentelemetry": "WARNING",
    "pi_crossed.suites.discovery": "WARNING",
}


def _formatter(json: Optional[bool]) -> logging.Formatter:
    if json is None:
        json = os.getenv("LOG_FORMAT") == "json"
    return JsonFormatter(_JSON_FIELDS) if json else logging.Formatter(_TEXT_FORMAT)


def _handlers(level: int, formatter: logging.Formatter, file_path: Optional[str]) -> List[logging.Handler]:
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if file_path:
        handlers.append(logging.FileHandler(file_path))
    for h in handlers:
        h.setLevel(level)
        h.setFormatter(formatter)
    return handlers


def _set_module_levels(quiet: Mapping[str, str], verbose: Iterable[str]) -> None:
    for name, level_name in quiet.items():
        level = logging.getLevelName(level_name.upper())
        if isinstance(level, int):
            logging.getLogger(name).setLevel(level)
    # verbose wins over quiet
    for name in verbose:
        logging.getLogger(name).setLevel(logging.DEBUG)


def configure_logging(
    *,
    level_name: str = "info",
    file_path: Optional[str] = None,
    verbose_modules: Optional[List[str]] = None,
    quiet_modules: Optional[Dict[str, str]] = None,
    json: bool | None = None,
) -> None:
    """Replace the root handlers and apply per-module levels.

    *quiet_modules* is merged over the built-in quiet table; *json* ``None``
    defers to ``$LOG_FORMAT``.
    """
    level = logging.getLevelName(level_name.upper())
    if not isinstance(level, int):
        level = logging.INFO

    root = logging.getLogger()
    for h in list(root.handlers):
        root.removeHandler(h)
    root.setLevel(level)
    for h in _handlers(level, _formatter(json), file_path):
        root.addHandler(h)

    _set_module_levels({**_QUIET_BY_DEFAULT, **(quiet_modules or {})}, verbose_modules or [])
