# pylint: disable=invalid-name,missing-docstring,redefined-outer-name
import json
import os
from pathlib import Path
from tempfile import TemporaryDirectory
from typing import Callable, Dict

import numpy as np
import pytest

from libconformal.lib.base import DiffConfig
from libconformal.lib.catalog import KropinaFamilyParams
from libconformal.lib.constants import Scheme

# Skip load tests
if not os.getenv("CONFORMAL_LOAD_TESTING"):
    collect_ignore_glob = ["load/*"]


KROPINA_FAMILY_CASES = {
    "A2": dict(
        n=2,
        mu=-1.0,
        tau=0.3,
        gamma=[1.0, 0.0],
        eta=[1.0, 0.6],
        Q=[[0.0, 2.0], [-2.0, 0.0]],
        variant="A",
    ),
    "A3": dict(
        n=3,
        mu=-1.0,
        tau=0.3,
        gamma=[1.0, 0.0, 0.0],
        eta=[1.0, 0.6, 0.0],
        Q=[[0.0, 2.0, 0.5], [-2.0, 0.0, 0.0], [-0.5, 0.0, 0.0]],
        variant="A",
    ),
    "B2": dict(
        n=2,
        mu=1.0,
        tau=0.0,
        gamma=[1.0, 0.0],
        eta=[0.0, 1.0],
        Q=[[0.0, 0.0], [0.0, 0.0]],
        variant="B",
    ),
    "B3": dict(
        n=3,
        mu=1.0,
        tau=0.0,
        gamma=[1.0, 0.0, 0.0],
        eta=[0.0, 1.0, 0.0],
        Q=[[0.0, 0.0, 0.5], [0.0, 0.0, -0.5], [-0.5, 0.5, 0.0]],
        variant="B",
    ),
    "complement": dict(
        n=2,
        mu=-1.0,
        tau=0.0,
        gamma=[1.0, 0.0],
        eta=[1.0, 0.0],
        Q=[[0.0, 0.0], [0.0, 0.0]],
        variant="A",
    ),
}


@pytest.fixture(scope="session")
def mock_progress_callback() -> Callable:
    """
    Returns:
        A no-op function
    """

    yield lambda *_, **__: None


@pytest.fixture(scope="session")
def analytic_config() -> DiffConfig:
    yield DiffConfig(scheme=Scheme.ANALYTIC)


@pytest.fixture(scope="session")
def central4_config() -> DiffConfig:
    yield DiffConfig(scheme=Scheme.CENTRAL4)


@pytest.fixture(scope="session")
def central2_config() -> DiffConfig:
    yield DiffConfig(scheme=Scheme.CENTRAL2)


@pytest.fixture(scope="function")
def rng() -> np.random.Generator:
    yield np.random.default_rng(1234)


@pytest.fixture(scope="function", params=["A2", "A3", "B2", "B3"])
def kropina_family_params(request) -> KropinaFamilyParams:
    """
    Returns:
        Non-homothetic Kropina family parameters (per parameter)
    """

    yield KropinaFamilyParams(**KROPINA_FAMILY_CASES[request.param])


@pytest.fixture(scope="function")
def complement_params() -> KropinaFamilyParams:
    yield KropinaFamilyParams(**KROPINA_FAMILY_CASES["complement"])


@pytest.fixture(scope="function")
def dilation_document() -> Dict:
    """
    Returns:
        A run configuration that complies to libconformal/data/run_config.schema.json
    """

    yield {
        "scenario": {"builtin": {"name": "flat+const-b+dilation"}},
        "checks": ["theorem1"],
        "samples": {"count": 20, "seed": 7, "rays": 4},
    }


@pytest.fixture(scope="function")
def write_run_config() -> Callable[[Dict], Path]:
    """
    Returns:
        A function that writes a run configuration into a temporary directory
    """

    with TemporaryDirectory() as tmpdir:

        def write(document: Dict, name: str = "run.json") -> Path:
            path = Path(tmpdir) / name
            with path.open(mode="w", encoding="UTF-8") as json_file:
                json.dump(document, json_file)
            return path

        yield write


@pytest.fixture(scope="session")
def kropina_family_cases() -> Dict[str, Dict]:
    """
    Returns:
        Kropina family parameter documents by case name
    """

    yield KROPINA_FAMILY_CASES


@pytest.fixture(scope="session")
def inline_dilation() -> Callable[..., Dict]:
    """
    Returns:
        A function building an inline scenario for V = 0.8 x on the flat plane
        with a constant unit one-form, where the conformal factor is 0.4
    """

    def scenario(**expected) -> Dict:
        return {
            "inline": {
                "name": "inline-dilation",
                "dim": 2,
                "metric": [[1.0, 0.0], [0.0, 1.0]],
                "one_form": [1.0, 0.0],
                "vector_field": [
                    {"terms": [[0.8, [1, 0]]]},
                    {"terms": [[0.8, [0, 1]]]},
                ],
                "expected": expected,
            }
        }

    yield scenario
