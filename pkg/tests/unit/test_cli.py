# pylint: disable=missing-docstring,invalid-name,too-few-public-methods

import json
from contextlib import contextmanager
from pathlib import Path
from typing import Iterable, List, Optional

import click
import pytest
from click.testing import CliRunner, Result

import libconformal
from libconformal.cli import subcommands
from libconformal.cli.cli import conformal, resolve_jobs
from libconformal.cli.utils import check_out_path, load_run_config
from libconformal.lib.exceptions import ConfigError

SPACE_FORM = {"builtin": {"name": "space-form"}}
UNKNOWN = {"builtin": {"name": "no-such-scenario"}}


@contextmanager
def does_not_raise():
    yield


class Expected:
    """
    Result object type for parametrized tests. Expand as necessary...
    """

    def __init__(self, status: int, tokens: Iterable[str] = (), **kwargs):
        self.status = status
        self.tokens = tokens

        for key, value in kwargs.items():
            setattr(self, key, value)


def run_conformal_subcommand(
    cmd: str,
    options: List,
    args: Optional[Path],
    runner: CliRunner,
    expected: Optional[Expected],
) -> Result:
    """
    Block of code to run a given conformal subcommand as part of a test
    """

    if not cmd:
        raise ValueError("Empty conformal subcommand string")

    subcommand = [cmd]
    subcommand.extend(str(option) for option in options)

    if args:
        subcommand.append(str(args))

    result = runner.invoke(conformal, subcommand)

    if expected:
        assert result.exit_code == expected.status

        for token in expected.tokens:
            assert token in result.output

    return result


def verify(
    options: List,
    args: Optional[Path],
    runner: CliRunner,
    expected: Optional[Expected],
) -> Result:
    """
    Block of code to run a verification as part of a test
    """

    return run_conformal_subcommand("verify", options, args, runner, expected)


@pytest.mark.parametrize(
    "params, expected",
    [
        (["-h"], "Usage"),
        (["--help"], "Usage"),
        (["--version"], libconformal.__version__),
    ],
)
def test_conformal(cli_runner, params, expected):
    result = cli_runner.invoke(conformal, args=params)

    assert result.exit_code == 0
    assert expected in result.output


def test_conformal_without_subcommand(cli_runner):
    result = cli_runner.invoke(conformal)

    assert "Usage" in result.output


@pytest.mark.parametrize(
    "params, expected",
    [
        ([], Expected(status=2, tokens=["Usage"])),
        (["-h"], Expected(status=0, tokens=["Usage", "Exit status"])),
        (["/wrong/input/path"], Expected(status=2, tokens=["does not exist"])),
    ],
)
def test_conformal_verify_usage(cli_runner, params, expected):
    verify(params, None, cli_runner, expected)


@pytest.mark.parametrize(
    "params, expected",
    [
        ([], Expected(status=0, tokens=["theorem1", "pass"])),
        (["-vv", "-p"], Expected(status=0, tokens=["All done"])),
        (["-n", 12, "--seed", 3, "--scheme", "central4"], Expected(status=0)),
        (["-j", 2], Expected(status=0)),
        (["-n", 0], Expected(status=2, tokens=["Invalid value"])),
        (["--tol", 0], Expected(status=2, tokens=["Invalid value"])),
        (["--scheme", "central8"], Expected(status=2, tokens=["Invalid value"])),
    ],
)
def test_conformal_verify_dilation(
    cli_runner, dilation_document, write_run_config, params, expected
):
    verify(params, write_run_config(dilation_document), cli_runner, expected)


def test_conformal_verify_writes_report(
    cli_runner, dilation_document, write_run_config
):
    path = write_run_config(dilation_document)
    report = path.parent / "report.json"

    verify(["-r", report], path, cli_runner, Expected(status=0))

    with report.open(encoding="utf8") as fp:
        document = json.load(fp)

    assert document["exit_status"] == 0
    assert document["environment"]["seed"] == 7

    # Existing reports are never overwritten
    result = verify(["-r", report], path, cli_runner, Expected(status=64))

    assert "already exists" in result.output


def test_conformal_verify_tolerance_override(
    cli_runner, dilation_document, write_run_config
):
    path = write_run_config(dilation_document)
    report = path.parent / "report.json"

    verify(["--tol", 1e-3, "-r", report], path, cli_runner, Expected(status=0))

    with report.open(encoding="utf8") as fp:
        document = json.load(fp)

    assert document["environment"]["tolerances"] == {"theorem1": 1e-3}


@pytest.mark.parametrize(
    "document, expected",
    [
        (
            {
                "scenario": {"builtin": {"name": "flat+const-b+moebius"}},
                "checks": ["theorem1"],
                "samples": {"count": 10},
            },
            Expected(status=1, tokens=["fail"]),
        ),
        (
            {
                "scenario": {"builtin": {"name": "flat+const-b+dilation"}},
                "checks": ["theorem1"],
                "samples": {"count": 5},
            },
            Expected(status=2, tokens=["warn"]),
        ),
        (
            {
                "scenario": {"builtin": {"name": "flat+perturbed-b"}},
                "checks": ["mkropina-bd"],
                "samples": {"count": 3},
            },
            Expected(status=2, tokens=["not-applicable"]),
        ),
        (
            {
                "scenario": {"builtin": {"name": "flat+const-b+dilation"}},
                "checks": ["geodesic"],
            },
            Expected(status=64, tokens=["Invalid run configuration at checks/0"]),
        ),
        (
            {"scenario": {"builtin": {"name": "flat+const-b+dilation"}}},
            Expected(status=64, tokens=["Invalid run configuration at <root>"]),
        ),
        (
            {"scenario": UNKNOWN, "checks": ["closed"]},
            Expected(
                status=64,
                tokens=["Invalid run configuration at scenario/builtin/name"],
            ),
        ),
        (
            {
                "scenario": {"builtin": {"name": "flat-euclidean"}},
                "checks": ["theorem2-exp"],
            },
            Expected(status=64, tokens=["needs a metric of type exp"]),
        ),
    ],
)
def test_conformal_verify_exit_status(
    cli_runner, write_run_config, document, expected
):
    verify([], write_run_config(document), cli_runner, expected)


def test_conformal_verify_theorem1_on_dilation(cli_runner, write_run_config):
    path = write_run_config(
        {
            "scenario": {"builtin": {"name": "flat+const-b+dilation"}},
            "checks": ["theorem1"],
            "samples": {"count": 50},
        }
    )
    report = path.parent / "report.json"

    verify(["-r", report], path, cli_runner, Expected(status=0, tokens=["theorem1"]))

    with report.open(encoding="utf8") as fp:
        document = json.load(fp)

    result = document["checks"]["theorem1"]

    assert result["verdict"] == "pass"
    assert len(result["points"]) == 50
    assert all(
        point["fitted"]["c"] == pytest.approx(0.4, abs=1e-9)
        for point in result["points"]
    )


def test_conformal_verify_with_aliases(cli_runner, write_run_config):
    path = write_run_config(
        {
            "scenario": {"builtin": {"name": "flat+const-b+dilation"}},
            "checks": ["conformal-generic", "theorem1"],
            "samples": {"count": 20, "seed": 7, "rays": 4},
            "tolerances": {"conformal-generic": 1e-5},
        }
    )
    report = path.parent / "report.json"

    verify(["-r", report], path, cli_runner, Expected(status=0))

    with report.open(encoding="utf8") as fp:
        document = json.load(fp)

    assert list(document["checks"]) == ["theorem1"]
    assert document["environment"]["tolerances"] == {"theorem1": 1e-5}


def test_conformal_verify_example1(cli_runner, write_run_config, kropina_family_cases):
    path = write_run_config(
        {
            "scenario": {"example1": kropina_family_cases["B2"]},
            "checks": ["example1-full"],
            "samples": {"count": 50, "seed": 11},
        }
    )
    report = path.parent / "report.json"

    verify(["-r", report], path, cli_runner, Expected(status=0))

    with report.open(encoding="utf8") as fp:
        document = json.load(fp)

    details = document["checks"]["example1-full"]["details"]

    assert details["homothety"]["verdict"] == "non-homothetic"
    assert details["factor"]["kappa"] == -1.0
    assert document["scenario"]["factor_convention"] == -1.0


def test_conformal_verify_unknown_tolerance(
    cli_runner, dilation_document, write_run_config
):
    document = {**dilation_document, "tolerances": {"geodesic": 1e-3}}

    verify(
        [],
        write_run_config(document),
        cli_runner,
        Expected(status=64, tokens=["Invalid run configuration at tolerances"]),
    )


def test_conformal_verify_kropina_family(
    cli_runner, write_run_config, kropina_family_cases
):
    document = {
        "scenario": {"kropina_family": kropina_family_cases["A2"]},
        "checks": ["closed"],
        "samples": {"count": 10, "seed": 1},
    }

    verify(
        [],
        write_run_config(document),
        cli_runner,
        Expected(status=0, tokens=["closed"]),
    )


def test_conformal_verify_config_error_writes_no_report(cli_runner, write_run_config):
    path = write_run_config(
        {
            "scenario": {"builtin": {"name": "flat+const-b+dilation"}},
            "checks": ["bogus"],
        }
    )
    report = path.parent / "report.json"

    verify(["-r", report], path, cli_runner, Expected(status=64))

    assert not report.exists()


def test_conformal_verify_unreadable_config(cli_runner, write_run_config):
    path = write_run_config({})
    path.write_text("{not json", encoding="utf8")

    verify([], path, cli_runner, Expected(status=64, tokens=["Unable to read"]))


def test_conformal_verify_interrupted(
    cli_runner, dilation_document, write_run_config, mocker
):
    mocker.patch.object(subcommands, "run_verification", return_value=None)

    verify([], write_run_config(dilation_document), cli_runner, Expected(status=1))


def test_conformal_scenarios(cli_runner):
    result = run_conformal_subcommand(
        "scenarios",
        [],
        None,
        cli_runner,
        Expected(
            status=0,
            tokens=["flat+const-b+dilation", "example1-full", "lemma51"],
        ),
    )

    assert "description" in result.output


@pytest.mark.parametrize(
    "document, context",
    [
        ({"scenario": SPACE_FORM, "checks": ["einstein"]}, does_not_raise()),
        ({"scenario": {}, "checks": ["einstein"]}, pytest.raises(ConfigError)),
        ({"scenario": SPACE_FORM, "checks": []}, pytest.raises(ConfigError)),
        (
            {"scenario": SPACE_FORM, "checks": ["einstein"], "jobs": 0},
            pytest.raises(ConfigError),
        ),
    ],
)
def test_load_run_config(write_run_config, document, context):
    with context:
        assert load_run_config(write_run_config(document)) == document


def test_check_out_path(write_run_config):
    path = write_run_config({})

    with pytest.raises(ConfigError):
        check_out_path(path)

    assert check_out_path(path.parent / "other.json") == path.parent / "other.json"


@pytest.mark.parametrize("value, cores", [(0, True), (3, False), (None, False)])
def test_resolve_jobs(value, cores, mocker):
    mocker.patch("libconformal.cli.cli.cpu_count", return_value=16)

    resolved = resolve_jobs(click.Context(conformal), None, value)

    assert resolved == (16 if cores else value)
