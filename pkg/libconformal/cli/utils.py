# pylint: disable=unused-argument,too-few-public-methods,arguments-differ
"""
Command-line interface utilities
"""

import json
from contextlib import AbstractContextManager
from pathlib import Path
from typing import Any, Dict

import click
from jsonschema import ValidationError, validate
from tabulate import tabulate

from libconformal.data import RUN_CONFIG_SCHEMA
from libconformal.lib.catalog import BUILTINS
from libconformal.lib.checks import CHECKS
from libconformal.lib.exceptions import ConfigError


class PathPath(click.Path):
    """
    A Click path argument that returns a pathlib Path, not a string

    https://github.com/pallets/click/issues/405#issuecomment-470812067
    """

    def convert(self, value, param, ctx):
        return Path(super().convert(value, param, ctx))


class MockContext(AbstractContextManager):
    """
    A no-op context manager
    It accepts an arbitrary number of keyword arguments and returns an object whose attributes are all None

    Modified from https://github.com/python/cpython/blob/v3.7.4/Lib/contextlib.py#L685-L703
    """

    def __init__(self, **__):
        pass

    def __getattribute__(self, item):
        return None

    def __enter__(self):
        return self

    def __exit__(self, *excinfo):
        pass


def load_run_config(path: Path) -> Dict[str, Any]:
    """
    Read a run configuration file and validate it against the run configuration schema
    """

    try:
        with path.open(encoding="utf8") as json_fp:
            document = json.load(json_fp)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"Unable to read {path}: {exc}") from exc

    try:
        validate(instance=document, schema=RUN_CONFIG_SCHEMA)
    except ValidationError as exc:
        location = "/".join(str(part) for part in exc.absolute_path) or "<root>"
        raise ConfigError(
            f"Invalid run configuration at {location}: {exc.message}"
        ) from exc

    return document


def check_out_path(value: Path) -> Path:
    """
    Refuse to overwrite an existing report
    """

    if value.is_file():
        raise ConfigError(f'File "{value}" already exists.')

    return value


def list_scenarios() -> int:
    """
    Print builtin scenarios and available checks
    """

    table = [["scenario", "description"]]
    table.extend([name, description] for name, (_, description) in BUILTINS.items())

    print(tabulate(table, headers="firstrow"))
    print()

    table = [["check", "aliases", "description"]]
    table.extend(
        [tag.value, ", ".join(tag.aliases), check.description]
        for tag, check in CHECKS.items()
    )

    print(tabulate(table, headers="firstrow"))

    return 0
