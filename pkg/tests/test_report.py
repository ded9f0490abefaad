# tests/test_report.py
import json

import pytest
from pydantic import ValidationError

from pi_crossed.report import (
    REPORT_VERSION,
    CheckRecord,
    Summary,
    VerificationReport,
    build_report,
    write_report,
)


def _record(name: str, passed: bool = True, residual=0.0) -> CheckRecord:
    return CheckRecord(name=name, anchor=f"anchor for {name}", residual=residual, threshold=1e-10, passed=passed)


class TestBuildReport:
    def test_sorted_and_summarised(self):
        report = build_report([_record("ops.b"), _record("ops.a", passed=False)], timestamp="2026-01-01T00:00:00Z")
        assert [c.name for c in report.checks] == ["ops.a", "ops.b"]
        assert report.summary == Summary(total=2, passed=1)
        assert not report.all_passed
        assert report.version == REPORT_VERSION

    def test_empty_run_passes(self):
        report = build_report([])
        assert report.all_passed
        assert report.summary.total == 0

    def test_unsorted_checks_rejected(self):
        with pytest.raises(ValidationError):
            VerificationReport(
                timestamp="t",
                checks=[_record("z"), _record("a")],
                summary=Summary(total=2, passed=2),
            )

    def test_inconsistent_summary_rejected(self):
        with pytest.raises(ValidationError):
            VerificationReport(timestamp="t", checks=[_record("a")], summary=Summary(total=1, passed=0))


class TestSerialisation:
    def test_pass_alias_and_null_residual(self):
        report = build_report([_record("linalg.broken", passed=False, residual=None)], timestamp="t")
        text = report.to_json()
        assert text.endswith("\n")
        doc = json.loads(text)
        check = doc["checks"][0]
        assert check["pass"] is False
        assert "passed" not in check
        assert check["residual"] is None
        assert check["paperAnchor"] == "anchor for linalg.broken"
        assert "anchor" not in check
        assert doc["summary"] == {"total": 1, "passed": 0}

    def test_record_accepts_alias(self):
        record = CheckRecord.model_validate(
            {"name": "x", "paperAnchor": "", "residual": 1e-3, "threshold": 1e-10, "pass": False}
        )
        assert not record.passed
        assert record.millis == 0

    @pytest.mark.asyncio
    async def test_write_report(self, tmp_path):
        path = tmp_path / "report.json"
        report = build_report([_record("a"), _record("b")], timestamp="t")
        await write_report(report, str(path))
        assert VerificationReport.model_validate_json(path.read_text()) == report

    @pytest.mark.asyncio
    async def test_write_report_bad_path(self, tmp_path):
        with pytest.raises(OSError):
            await write_report(build_report([]), str(tmp_path / "missing" / "report.json"))
