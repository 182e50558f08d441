# pylint: disable=protected-access
"""
Set of utility functions to run a verification and generate its report
"""

import json
import logging
import multiprocessing
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from tabulate import tabulate

import libconformal
from libconformal.lib.base import DiffConfig
from libconformal.lib.catalog import Scenario
from libconformal.lib.checks import Check, build_checks
from libconformal.lib.concurrency import (
    get_point_jobs,
    imap_job,
    register_checks,
    registered_check,
    worker_init,
)
from libconformal.lib.constants import (
    ExitStatus,
    PointStatus,
    Verdict,
    get_conformal_settings,
)
from libconformal.lib.sampling import sample_points
from libconformal.models import CheckResult, PointResult, RunConfig, VerificationReport

logger = logging.getLogger(__name__)

# Report entries that change between otherwise identical runs
VOLATILE_KEYS = ("generated_at",)


@imap_job
def evaluate_point(tag: str, index: int, x: np.ndarray) -> Tuple[str, PointResult]:
    """
    Evaluate one registered check at one sample point
    """

    return tag, registered_check(tag).evaluate(index, x)


def collect_point_results(
    config: RunConfig,
    checks: Sequence[Check],
    points: np.ndarray,
    progress_callback: Optional[Callable] = None,
) -> Optional[Dict[str, List[PointResult]]]:
    """
    Evaluate every check at every point, in this process or in a pool of
    config.jobs workers. Returns None when interrupted.
    """

    # Default progress callback to no-op
    update_progress = progress_callback or (lambda *_, **__: None)

    results = {check.tag.value: [] for check in checks}
    jobs = get_point_jobs(checks, points, update_progress)

    if config.jobs <= 1:
        register_checks(checks)

        try:
            for tag, point in map(evaluate_point, jobs):
                results[tag].append(point)

        except KeyboardInterrupt:
            logger.warning("Aborting")
            return None

        return results

    with multiprocessing.Pool(
        processes=config.jobs,
        initializer=worker_init,
        initargs=(config.to_document(),),
    ) as pool:

        logger.debug(f"Starting pool with {pool._processes} processes")

        try:
            for tag, point in pool.imap(evaluate_point, jobs, chunksize=1):
                results[tag].append(point)

        except KeyboardInterrupt:
            logger.warning("Aborting")

            # Politely terminate workers
            pool.terminate()
            pool.join()

            return None

    return results


def exit_status(verdicts: Sequence[str]) -> ExitStatus:
    if Verdict.FAIL.value in verdicts:
        return ExitStatus.FAIL

    if Verdict.WARN.value in verdicts or Verdict.NOT_APPLICABLE.value in verdicts:
        return ExitStatus.WARN

    return ExitStatus.PASS


def environment(config: RunConfig, checks: Sequence[Check]) -> Dict[str, Any]:
    """
    Settings a report depends on
    """

    return {
        "samples": config.samples,
        "seed": config.seed,
        "rays": config.rays,
        "scheme": config.scheme.value,
        "deformation": config.deformation,
        "tolerances": {check.tag.value: check.tolerance for check in checks},
        "settings": dict(get_conformal_settings()),
    }


def build_report(
    config: RunConfig,
    scenario: Scenario,
    checks: Sequence[Check],
    point_results: Dict[str, List[PointResult]],
) -> VerificationReport:
    """
    Ordered reduction of the point results, by check tag then point index
    """

    check_results: Dict[str, CheckResult] = {}

    for check in sorted(checks, key=lambda check: check.tag.value):
        result = check.reduce(point_results[check.tag.value])
        check_results[check.tag.value] = result

        logger.info(f"{check.tag.value}: {result.verdict}")

    verdicts = [result.verdict for result in check_results.values()]
    status = exit_status(verdicts)

    return VerificationReport(
        generated_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        version=libconformal.__version__,
        scenario=scenario.describe(),
        environment=environment(config, checks),
        checks=check_results,
        overall_pass=all(verdict == Verdict.PASS.value for verdict in verdicts),
        exit_status=int(status),
    )


def run_verification(
    config: RunConfig, progress_bar_context: Optional[Callable] = None
) -> Optional[VerificationReport]:
    """
    Build the scenario and checks of a configuration, sample points, evaluate
    and reduce. Configuration problems raise, an interrupt returns None.
    """

    # Confirm environment settings
    for key, value in get_conformal_settings():
        logger.debug(f"{key}: {value}")

    scenario, checks = build_checks(config)

    logger.info(
        f"Sampling {config.samples} points in scenario {scenario.name} (seed {config.seed})"
    )
    points = sample_points(
        scenario.domain, config.samples, config.seed, DiffConfig(scheme=config.scheme)
    )

    if progress_bar_context is None:
        point_results = collect_point_results(config, checks, points)
    else:
        with progress_bar_context(
            total=len(checks) * len(points),
            desc="Checking points",
            unit="jobs",
            color="green",
        ) as bar:
            point_results = collect_point_results(
                config, checks, points, progress_callback=bar.update
            )

    if point_results is None:
        return None

    return build_report(config, scenario, checks, point_results)


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def report_to_json(report: VerificationReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2, default=_json_default)


def write_report(report: VerificationReport, path: Path) -> None:
    """
    Write the report as JSON with stable key ordering
    """

    path.parent.mkdir(parents=True, exist_ok=True)

    with path.open("w", encoding="utf8") as fp:
        fp.write(report_to_json(report))
        fp.write("\n")

    logger.info(f"Report written to {path}")


def comparable(document: Dict[str, Any]) -> Dict[str, Any]:
    """
    Report document without the entries that differ between identical runs
    """

    return {key: value for key, value in document.items() if key not in VOLATILE_KEYS}


def summary_table(report: VerificationReport) -> str:
    """
    Human-readable summary of a report
    """

    def fmt(value: Optional[float]) -> str:
        return "-" if value is None else f"{value:.3e}"

    table = [
        [
            "check",
            "verdict",
            "tolerance",
            "max residual",
            "mean residual",
            "ok",
            "n/a",
            "failed",
        ]
    ]

    for tag, result in sorted(report.checks.items()):
        statuses = [point.status for point in result.points]
        table.append(
            [
                tag,
                result.verdict,
                f"{result.tolerance:.0e}",
                fmt(result.residual_max),
                fmt(result.residual_mean),
                statuses.count(PointStatus.OK.value),
                statuses.count(PointStatus.NOT_APPLICABLE.value),
                statuses.count(PointStatus.FAILED.value),
            ]
        )

    return tabulate(table, headers="firstrow")
