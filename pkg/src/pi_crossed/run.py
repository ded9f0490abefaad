#!/usr/bin/env python3
# pi_crossed/run.py
from __future__ import annotations
"""Async-native CLI entry-point for the verification runner."""
import asyncio
import json
import logging
import sys
from typing import Any, Dict, Optional, Sequence

from pi_crossed.arguments import parse_args
from pi_crossed.config import ConfigError, build_logging_config, build_suite_config, load_config
from pi_crossed.logging import configure_logging
from pi_crossed.metrics import init_metrics, shutdown_metrics
from pi_crossed.report import build_report, write_report
from pi_crossed.suites import DuplicateCheck, SuiteContext, SuiteManager, UnknownSuite, build_registry

__all__ = ["EXIT_OK", "EXIT_FAILED", "EXIT_USAGE", "apply_overrides", "run_cli"]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------

def apply_overrides(cfg: Dict[str, Any], args) -> Dict[str, Any]:  # noqa: ANN001 - argparse namespace
    """Fold command-line flags into the merged config dictionary (in-place)."""
    if args.suites:
        cfg["suites"] = [s.strip() for chunk in args.suites for s in chunk.split(",") if s.strip()]
    if args.cutoff is not None:
        cfg["cutoff"] = args.cutoff
    if args.grid_n is not None:
        cfg["gridN"] = args.grid_n
    if args.tol is not None:
        cfg.setdefault("tolerances", {})["eqTol"] = args.tol
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.out_path:
        cfg["outPath"] = args.out_path
    if args.log_level and isinstance(cfg.get("logging"), dict):
        cfg["logging"]["level"] = args.log_level
    if args.inject_perturbation:
        cfg["injectPerturbation"] = True
    return cfg


# ---------------------------------------------------------------------------
# CLI entry
# ---------------------------------------------------------------------------

async def _main_async(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)

    # ── config ----------------------------------------------------------
    try:
        raw = apply_overrides(await load_config(args.config), args)
        log_cfg = build_logging_config(raw)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    configure_logging(
        level_name=log_cfg.level,
        file_path=log_cfg.file,
        verbose_modules=log_cfg.verbose_modules,
        quiet_modules=log_cfg.quiet_modules,
    )

    registry = build_registry()
    manager = SuiteManager(registry)

    if args.list:
        json.dump(manager.list_suites(), sys.stdout, ensure_ascii=False, indent=2)
        sys.stdout.write("\n")
        return EXIT_OK

    try:
        config = build_suite_config(raw)
        ctx = SuiteContext(config)
        suites = registry.resolve(config.suites, ctx)
    except ConfigError as exc:
        logger.error("Invalid configuration: %s", exc)
        return EXIT_USAGE
    except UnknownSuite as exc:
        logger.error("Unknown suite %s; known suites: %s", exc, ", ".join(registry.names()))
        return EXIT_USAGE

    # ── run -----------------------------------------------------------
    init_metrics()
    logger.info("Running %d suites: %s", len(suites), ", ".join(s.name for s in suites))
    try:
        records = await manager.run(suites, ctx)
    except DuplicateCheck as exc:
        logger.error("Check name %s emitted twice; no report written", exc)
        return EXIT_FAILED
    except ExceptionGroup as group:
        for exc in group.exceptions:
            logger.error("Suite aborted outside its checks: %r", exc)
        return EXIT_FAILED
    report = build_report(records)

    try:
        await write_report(report, config.out_path)
    except OSError as exc:
        logger.error("Cannot write report to %s: %s", config.out_path, exc)
        return EXIT_USAGE

    if report.all_passed:
        logger.info("All %d checks passed", report.summary.total)
        return EXIT_OK
    failed = [c.name for c in report.checks if not c.passed]
    logger.warning("%d of %d checks failed: %s", len(failed), report.summary.total, ", ".join(failed))
    return EXIT_FAILED


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    """Entry-point for ``python -m pi_crossed`` and the *pi-crossed* script."""
    try:
        return asyncio.run(_main_async(argv))
    except KeyboardInterrupt:
        return EXIT_FAILED
    finally:
        shutdown_metrics()


if __name__ == "__main__":  # pragma: no cover
    sys.exit(run_cli())
