# pi_crossed/metrics.py
from __future__ import annotations
"""Minimal OpenTelemetry metrics for verification runs.

A counter of executed checks (attributes: suite, passed) and a histogram of
check durations in milliseconds.  Nothing is exported unless
``CONSOLE_METRICS=true``; shutdown is idempotent and silent.
"""

import atexit
import logging
import os
from typing import Any

from opentelemetry import metrics
from opentelemetry.sdk.metrics import MeterProvider
from opentelemetry.sdk.metrics.export import (
    ConsoleMetricExporter,
    PeriodicExportingMetricReader,
)
from opentelemetry.sdk.resources import SERVICE_NAME, Resource

__all__ = ["init_metrics", "record_check", "shutdown_metrics"]

logger = logging.getLogger(__name__)

# ---------------------------------------------------------------------------
# Globals
# ---------------------------------------------------------------------------

_provider: MeterProvider | None = None
_counter: Any | None = None
_histogram: Any | None = None


def _console_enabled() -> bool:
    return os.getenv("CONSOLE_METRICS", "false").lower() == "true"


# ---------------------------------------------------------------------------
# Public API
# ---------------------------------------------------------------------------

def init_metrics() -> None:
    """Create (or reuse) the global MeterProvider and instruments.  Idempotent."""
    global _provider, _counter, _histogram  # noqa: PLW0603 - module-level singletons

    if _provider is not None and _counter is not None and _histogram is not None:
        return

    if _provider is None:
        current = metrics.get_meter_provider()
        _provider = current if isinstance(current, MeterProvider) else None

    if _provider is None:
        readers: list[Any] = []
        if _console_enabled():
            interval = int(os.getenv("OTEL_EXPORT_INTERVAL_MS", "15000"))
            readers.append(
                PeriodicExportingMetricReader(ConsoleMetricExporter(), export_interval_millis=interval)
            )
        service = os.getenv("OTEL_SERVICE_NAME", "pi-crossed")
        _provider = MeterProvider(resource=Resource({SERVICE_NAME: service}), metric_readers=readers)
        metrics.set_meter_provider(_provider)

    meter = metrics.get_meter("pi-crossed", "0.1.0")
    _counter = meter.create_counter("pi_crossed.checks", unit="1", description="Executed checks")
    _histogram = meter.create_histogram(
        "pi_crossed.check.duration", unit="ms", description="Check wall time"
    )


def record_check(suite: str, passed: bool, millis: float) -> None:
    if _counter is None or _histogram is None:
        init_metrics()
    attrs = {"suite": suite, "passed": str(passed).lower()}
    _counter.add(1, attrs)  # type: ignore[union-attr]
    _histogram.record(millis, attrs)  # type: ignore[union-attr]


def shutdown_metrics() -> None:
    """Idempotent shutdown that stays silent on repeat calls."""
    global _provider, _counter, _histogram  # noqa: PLW0603

    p = _provider
    _provider = _counter = _histogram = None
    if p is None:
        return
    if getattr(p, "_shutdown", False) or getattr(p, "_is_shutdown", False):
        return
    try:
        p.shutdown()
    except Exception:  # noqa: BLE001 - exporter errors during exit are irrelevant
        pass
    try:
        logger.debug("OpenTelemetry metrics provider shut down")
    except ValueError:
        # stderr already closed at interpreter exit
        pass


atexit.register(shutdown_metrics)
