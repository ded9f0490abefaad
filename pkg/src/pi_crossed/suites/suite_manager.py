# pi_crossed/suites/suite_manager.py
"""
SuiteManager runs suites concurrently inside an **asyncio.TaskGroup**.

Each suite executes in a worker thread (the checks are NumPy-bound); the
collected records are merged and sorted by check name so the report does not
depend on completion order.
"""
from __future__ import annotations

import asyncio
import logging
from typing import Dict, List, Sequence

from pi_crossed import metrics
from pi_crossed.report import CheckRecord
from pi_crossed.suites.suite_registry import SuiteRegistry
from pi_crossed.suites.verification_suite import SuiteContext, VerificationSuite

__all__ = ["SuiteManager", "DuplicateCheck"]

logger = logging.getLogger(__name__)


class DuplicateCheck(Exception):
    """Two suites emitted a check with the same name."""


class SuiteManager:
    def __init__(self, registry: SuiteRegistry) -> None:
        self.registry = registry

    def list_suites(self) -> List[Dict[str, str]]:
        """Stable listing of ``{name, description, paperAnchor}``, sorted by name."""
        return [
            {"name": s.name, "description": s.description, "paperAnchor": s.anchor}
            for s in (self.registry.get(n) for n in self.registry.names())
        ]

    async def _run_one(self, suite: VerificationSuite, ctx: SuiteContext) -> List[CheckRecord]:
        logger.info("Running suite %s", suite.name)
        records = await asyncio.to_thread(suite.run, ctx)
        for r in records:
            metrics.record_check(suite.name, r.passed, r.millis)
        passed = sum(r.passed for r in records)
        logger.info("Suite %s finished: %d/%d checks passed", suite.name, passed, len(records))
        return records

    async def run(self, suites: Sequence[VerificationSuite], ctx: SuiteContext) -> List[CheckRecord]:
        """Run *suites* concurrently and return all records sorted by name."""
        async with asyncio.TaskGroup() as tg:
            tasks = [tg.create_task(self._run_one(s, ctx), name=s.name) for s in suites]

        records: Dict[str, CheckRecord] = {}
        for task in tasks:
            for r in task.result():
                if r.name in records:
                    raise DuplicateCheck(r.name)
                records[r.name] = r
        return [records[n] for n in sorted(records)]
