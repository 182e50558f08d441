# pylint: disable=unused-argument,too-many-arguments
"""
Command-line interface for libconformal
"""

import logging
import sys

import click
import click_log
import psutil

from libconformal.cli import (
    CONTEXT_SETTINGS,
    FLOAT_METAVAR,
    INT_METAVAR,
    PATH_METAVAR,
    subcommands,
)
from libconformal.cli.utils import PathPath
from libconformal.lib.constants import ASCII_ART_NAME, Scheme

logger = logging.getLogger(__name__)

# Set configuration on the root logger
click_log.basic_config(logging.getLogger())


def set_log_level_from_verbose(ctx, param, value):
    """
    Callback for conformal subcommands that sets the root logger according to the verbosity option
    """
    if value > 1:
        level = logging.DEBUG
        click.echo(ASCII_ART_NAME)
    elif value > 0:
        level = logging.INFO
    else:
        # Default
        level = logging.WARNING
    logging.getLogger().setLevel(level)
    return level


def cpu_count():
    """
    Return the number of available cores
    """

    # Use logical cores until this issue is fixed
    # https://github.com/giampaolo/psutil/issues/1620
    return psutil.cpu_count(logical=True)


def resolve_jobs(ctx, param, value):
    """
    Callback for the jobs option, 0 means one job per core
    """

    if value == 0:
        return cpu_count()

    return value


@click.group(context_settings=CONTEXT_SETTINGS)
@click.version_option()
def conformal():
    """
    Main command
    """


@conformal.command(context_settings=CONTEXT_SETTINGS, short_help="Run a verification.")
@click.argument(
    "config",
    metavar="CONFIG",
    type=PathPath(exists=True, dir_okay=False, resolve_path=True),
)
@click.option(
    "-n",
    "--samples",
    metavar=INT_METAVAR,
    type=click.IntRange(min=1),
    help=f"Draw {INT_METAVAR} sample points.",
)
@click.option(
    "--seed",
    metavar=INT_METAVAR,
    type=click.IntRange(min=0),
    help=f"Seed the point and ray streams with {INT_METAVAR}.",
)
@click.option(
    "--tol",
    metavar=FLOAT_METAVAR,
    type=click.FloatRange(min=0, min_open=True),
    help=f"Use tolerance {FLOAT_METAVAR} for every check.",
)
@click.option(
    "-r",
    "--report",
    metavar=PATH_METAVAR,
    type=PathPath(dir_okay=False, resolve_path=True),
    help=f"Write the JSON report to {PATH_METAVAR}.",
)
@click.option(
    "--scheme",
    type=click.Choice([scheme.value for scheme in Scheme]),
    help="Differentiation scheme.",
)
@click.option(
    "-j",
    "--jobs",
    metavar=INT_METAVAR,
    type=click.IntRange(min=0),
    callback=resolve_jobs,
    help=f"Use {INT_METAVAR} concurrent jobs, 0 for all {cpu_count()} cores.",
)
@click.option(
    "-v",
    "--verbose",
    count=True,
    callback=set_log_level_from_verbose,
    help="Increase verbosity (can be repeated).",
    expose_value=False,
)
@click.option("-p", "--progress", is_flag=True, help="Show progress.")
def verify(config, samples, seed, tol, report, scheme, jobs, progress):
    """
    Verify the checks of a run configuration over seeded sample points.

    CONFIG is a JSON document naming a scenario, a list of checks and optional
    sampling, tolerance and scheme settings. Command-line options override it.

    Exit status is 0 when every check passes, 1 when one fails, 2 when one
    warns or does not apply, and 64 when the configuration cannot be used.
    """

    status = subcommands.verify(
        config_path=config,
        samples=samples,
        seed=seed,
        tol=tol,
        report=report,
        scheme=scheme,
        jobs=jobs,
        progress=progress,
    )
    sys.exit(status)


@conformal.command(
    context_settings=CONTEXT_SETTINGS, short_help="List builtin scenarios and checks."
)
@click.option(
    "-v",
    "--verbose",
    count=True,
    callback=set_log_level_from_verbose,
    help="Increase verbosity (can be repeated).",
    expose_value=False,
)
def scenarios():
    """
    List builtin scenarios and available checks.
    """

    status = subcommands.scenarios()
    sys.exit(status)
