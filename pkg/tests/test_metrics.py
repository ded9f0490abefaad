# tests/test_metrics.py
"""
Unit tests for pi_crossed.metrics: provider setup, check recording and
shutdown.  The OpenTelemetry API is patched so no global provider leaks
between tests.
"""

import os
from unittest.mock import Mock, patch

import pytest

import pi_crossed.metrics as metrics_module


@pytest.fixture
def meter():
    """Patch the meter factory and return the fake meter."""
    fake = Mock()
    fake.create_counter.return_value = Mock()
    fake.create_histogram.return_value = Mock()
    with patch("pi_crossed.metrics.metrics.get_meter", return_value=fake):
        yield fake


class _FakeProvider:
    def __init__(self, *args, **kwargs):
        self.args, self.kwargs = args, kwargs
        self.shutdown = Mock()


class TestInit:
    """init_metrics creates the provider and instruments exactly once."""

    def setup_method(self):
        metrics_module._provider = None
        metrics_module._counter = None
        metrics_module._histogram = None

    def teardown_method(self):
        metrics_module._provider = None
        metrics_module._counter = None
        metrics_module._histogram = None

    @patch.dict(os.environ, {}, clear=True)
    @patch("pi_crossed.metrics.metrics.set_meter_provider")
    @patch("pi_crossed.metrics.metrics.get_meter_provider", return_value=Mock())
    def test_creates_provider_without_readers(self, _get, mock_set, meter):
        with patch("pi_crossed.metrics.MeterProvider", _FakeProvider):
            metrics_module.init_metrics()

        mock_set.assert_called_once()
        provider = mock_set.call_args.args[0]
        assert provider.kwargs["metric_readers"] == []
        assert metrics_module._counter is meter.create_counter.return_value
        assert metrics_module._histogram is meter.create_histogram.return_value

    @patch.dict(os.environ, {"CONSOLE_METRICS": "TRUE", "OTEL_EXPORT_INTERVAL_MS": "500"})
    @patch("pi_crossed.metrics.metrics.set_meter_provider")
    @patch("pi_crossed.metrics.metrics.get_meter_provider", return_value=Mock())
    @patch("pi_crossed.metrics.ConsoleMetricExporter")
    @patch("pi_crossed.metrics.PeriodicExportingMetricReader")
    def test_console_reader_when_enabled(self, mock_reader, mock_exporter, _get, _set, meter):
        with patch("pi_crossed.metrics.MeterProvider", _FakeProvider):
            metrics_module.init_metrics()

        mock_reader.assert_called_once_with(mock_exporter.return_value, export_interval_millis=500)

    def test_reuses_existing_sdk_provider(self, meter):
        existing = _FakeProvider()
        with patch("pi_crossed.metrics.MeterProvider", _FakeProvider), \
             patch("pi_crossed.metrics.metrics.get_meter_provider", return_value=existing), \
             patch("pi_crossed.metrics.metrics.set_meter_provider") as mock_set:
            metrics_module.init_metrics()

        mock_set.assert_not_called()
        assert metrics_module._provider is existing

    def test_idempotent(self):
        provider, counter, histogram = Mock(), Mock(), Mock()
        metrics_module._provider = provider
        metrics_module._counter = counter
        metrics_module._histogram = histogram

        with patch("pi_crossed.metrics.metrics.get_meter_provider") as mock_get:
            metrics_module.init_metrics()
            mock_get.assert_not_called()

        assert metrics_module._counter is counter


class TestRecordAndShutdown:
    def setup_method(self):
        metrics_module._provider = Mock(_shutdown=False, _is_shutdown=False)
        metrics_module._counter = Mock()
        metrics_module._histogram = Mock()

    def teardown_method(self):
        metrics_module._provider = None
        metrics_module._counter = None
        metrics_module._histogram = None

    def test_record_check_attributes(self):
        counter, histogram = metrics_module._counter, metrics_module._histogram
        metrics_module.record_check("tool_criterion", True, 12.5)

        attrs = {"suite": "tool_criterion", "passed": "true"}
        counter.add.assert_called_once_with(1, attrs)
        histogram.record.assert_called_once_with(12.5, attrs)

    def test_record_initialises_lazily(self):
        metrics_module._counter = None
        with patch("pi_crossed.metrics.init_metrics") as mock_init:
            mock_init.side_effect = lambda: setattr(metrics_module, "_counter", Mock())
            metrics_module.record_check("dirsum", False, 1.0)
        mock_init.assert_called_once()

    def test_shutdown_is_idempotent(self):
        provider = metrics_module._provider
        metrics_module.shutdown_metrics()
        metrics_module.shutdown_metrics()

        provider.shutdown.assert_called_once()
        assert metrics_module._provider is None
        assert metrics_module._counter is None

    def test_shutdown_swallows_exporter_errors(self):
        metrics_module._provider.shutdown.side_effect = RuntimeError("exporter gone")
        metrics_module.shutdown_metrics()
        assert metrics_module._provider is None

    def test_shutdown_skips_already_closed_provider(self):
        provider = metrics_module._provider
        provider._shutdown = True
        metrics_module.shutdown_metrics()
        provider.shutdown.assert_not_called()
