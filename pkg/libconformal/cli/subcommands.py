# pylint: disable=too-many-arguments
"""
The functions in this module are entry points for conformal sub-commands, e.g. `conformal verify ...`
"""

import logging
import time
from pathlib import Path
from typing import Optional

import click
import enlighten
from humanfriendly import format_timespan

from libconformal.cli.utils import (
    MockContext,
    check_out_path,
    list_scenarios,
    load_run_config,
)
from libconformal.lib.constants import ExitStatus, Scheme
from libconformal.lib.exceptions import ConformalException
from libconformal.lib.report import run_verification, summary_table, write_report
from libconformal.models import RunConfig

logger = logging.getLogger(__name__)


def verify(
    config_path: Path,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    tol: Optional[float] = None,
    report: Optional[Path] = None,
    scheme: Optional[str] = None,
    jobs: Optional[int] = None,
    progress: bool = False,
) -> int:
    """
    Click sub command function called by `conformal verify`
    """

    start = time.perf_counter()

    # Make or fake our progress bar context objects
    if progress:
        progress_bars = enlighten.get_manager()
        progress_bar_context = progress_bars.counter
    else:
        progress_bar_context = MockContext

    try:
        config = RunConfig.from_document(load_run_config(config_path))

        # Command-line overrides
        if samples is not None:
            config.samples = samples
        if seed is not None:
            config.seed = seed
        if scheme is not None:
            config.scheme = Scheme(scheme)
        if jobs is not None:
            config.jobs = jobs
        if report is not None:
            config.report = report
        if tol is not None:
            config.tolerances = {tag: tol for tag in config.checks}

        if config.report:
            check_out_path(config.report)

        verification = run_verification(config, progress_bar_context)

    except ConformalException as exc:
        click.echo(click.style(f"{exc}", fg="red"), err=True)
        return int(ExitStatus.CONFIG_ERROR)

    if verification is None:
        return int(ExitStatus.FAIL)

    click.echo(summary_table(verification))

    if config.report:
        write_report(verification, config.report)

    logger.info(f"All done in {format_timespan(time.perf_counter() - start)}")

    return verification.exit_status


def scenarios() -> int:
    """
    Click sub command function called by `conformal scenarios`
    """

    return list_scenarios()
