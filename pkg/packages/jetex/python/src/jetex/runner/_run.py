"""Run suites check by check and assemble reports."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import Any

from jetex._errors import JetexError
from jetex._parallel import map_runs

from ._experiment import ExperimentConfig
from ._report import CheckRow, Report, environment
from ._suites import SUITE_CHECKS, Check, extension_checks

logger = logging.getLogger(__name__)

# Sub-suites of "all", in report order.
ALL_SUITES = ("jets", "bergman", "dbar", "bump", "pipeline", "geom")
# Config fields that choose where a report goes, not what it contains.
_OUTPUT_FIELDS = ("out", "format")


def run_checks(suite: str, checks: Sequence[Check]) -> list[CheckRow]:
    """Evaluate ``checks`` in order, stopping at the first library error.

    The failing check still gets a row: ``measured`` names the error and
    ``passed`` is False. Later checks of the suite are not run.
    """
    rows: list[CheckRow] = []
    for check in checks:
        try:
            outcome = check.evaluate()
        except JetexError as e:
            logger.error("suite=%s aborted at %s: %s", suite, check.id, e)
            message = f"aborted: {type(e).__name__}: {e}"
            rows.append(CheckRow(suite, check.id, check.anchor, message, None, False))
            break
        row = CheckRow(
            suite,
            check.id,
            check.anchor,
            outcome.measured,
            outcome.claimed,
            bool(outcome.passed),
            outcome.tolerance,
        )
        logger.info("suite=%s id=%s pass=%s", suite, check.id, row.passed)
        rows.append(row)
    return rows


def _report_config(config: ExperimentConfig) -> dict[str, Any]:
    return {k: v for k, v in config.to_dict().items() if k not in _OUTPUT_FIELDS}


def run(config: ExperimentConfig) -> Report:
    """Execute the suite named by ``config``.

    ``all`` runs every suite, concurrently when the lab ``threads`` option
    allows, and concatenates their rows in :data:`ALL_SUITES` order. Reports
    carry no timings, so equal configs give equal reports.

    Example:
        >>> report = run(ExperimentConfig("jets"))
        >>> report.exit_code
        0
    """
    names = ALL_SUITES if config.suite == "all" else (config.suite,)
    logger.info("running suite=%s seed=%s", config.suite, config.seed)

    def run_one(name: str) -> list[CheckRow]:
        return run_checks(name, SUITE_CHECKS[name](config.with_suite(name)))

    rows = [row for suite_rows in map_runs(run_one, names) for row in suite_rows]
    report = Report(config.suite, tuple(rows), environment(config.seed), _report_config(config))
    logger.info(
        "suite=%s rows=%d failures=%d", config.suite, len(report.rows), len(report.failures)
    )
    return report


def run_extension(config: ExperimentConfig) -> Report:
    """Extend the jet of ``config`` alone, without the seeded pipeline batch."""
    rows = run_checks("extend", extension_checks(config))
    return Report("extend", tuple(rows), environment(config.seed), _report_config(config))


__all__ = ["ALL_SUITES", "run", "run_checks", "run_extension"]
