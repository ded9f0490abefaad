# pi_crossed/report.py
"""Verification report: one record per check, sorted by name, plus a summary."""
from __future__ import annotations

import logging
from datetime import datetime, timezone
from typing import Iterable, Optional

import aiofiles
from pydantic import BaseModel, ConfigDict, Field, model_validator

__all__ = [
    "REPORT_VERSION",
    "CheckRecord",
    "Summary",
    "VerificationReport",
    "build_report",
    "write_report",
]

logger = logging.getLogger(__name__)

REPORT_VERSION = "1"


class CheckRecord(BaseModel):
    """Outcome of one named check.

    ``residual`` is ``None`` (``null`` in JSON) when the check raised.
    """

    model_config = ConfigDict(populate_by_name=True, frozen=True)

    name: str
    anchor: str = Field(alias="paperAnchor")
    residual: Optional[float]
    threshold: float
    passed: bool = Field(alias="pass")
    millis: int = 0


class Summary(BaseModel):
    total: int
    passed: int


class VerificationReport(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    version: str = REPORT_VERSION
    timestamp: str
    checks: list[CheckRecord]
    summary: Summary

    @model_validator(mode="after")
    def _consistent(self) -> "VerificationReport":
        names = [c.name for c in self.checks]
        if names != sorted(names):
            raise ValueError("checks must be sorted by name")
        if self.summary.total != len(self.checks) or self.summary.passed != sum(c.passed for c in self.checks):
            raise ValueError("summary does not match checks")
        return self

    @property
    def all_passed(self) -> bool:
        return self.summary.passed == self.summary.total

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2) + "\n"


def build_report(records: Iterable[CheckRecord], timestamp: Optional[str] = None) -> VerificationReport:
    ordered = sorted(records, key=lambda r: r.name)
    return VerificationReport(
        timestamp=timestamp or datetime.now(timezone.utc).isoformat(),
        checks=ordered,
        summary=Summary(total=len(ordered), passed=sum(r.passed for r in ordered)),
    )


async def write_report(report: VerificationReport, path: str) -> None:
    """Write UTF-8 JSON with a trailing newline.  ``OSError`` propagates."""
    async with aiofiles.open(path, "w", encoding="utf-8") as f:
        await f.write(report.to_json())
    logger.info("Report written to %s (%d/%d passed)", path, report.summary.passed, report.summary.total)
