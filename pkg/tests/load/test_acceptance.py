# pylint: disable=missing-docstring,invalid-name
import itertools
import logging
import time

import numpy as np
import pytest
from humanfriendly import format_timespan

from libconformal.lib.constants import ExitStatus, Scheme, Verdict
from libconformal.lib.metrics import DeformationTriple, deformation_ode_residual
from libconformal.lib.report import comparable, run_verification
from libconformal.models import RunConfig, VerificationReport

logger = logging.getLogger(__name__)

DILATION = {"builtin": {"name": "flat+const-b+dilation"}}
MOEBIUS = {"builtin": {"name": "flat+const-b+moebius"}}
M_KROPINA = {"phi": {"family": "m-kropina", "m": 2}}


def exp_dilation(epsilon: int) -> dict:
    return {
        "builtin": {
            "name": "flat+const-b+dilation",
            "params": {"phi": {"family": "exp", "epsilon": epsilon}},
        }
    }


def random_polynomial(rng: np.random.Generator, n: int, scale: float) -> dict:
    """
    Polynomial of degree at most 2 in n variables, coefficients in [-scale, scale]
    """

    return {
        "terms": [
            [float(rng.uniform(-scale, scale)), list(powers)]
            for powers in itertools.product(range(3), repeat=n)
            if sum(powers) <= 2
        ]
    }


def random_curved_scenario(seed: int, n: int) -> dict:
    """
    Randers metric on a curved polynomial metric, positive definite on the
    default box |x_i| <= 0.5 with ||beta||_alpha < 1
    """

    rng = np.random.default_rng(seed)
    metric = [[None] * n for _ in range(n)]

    for i in range(n):
        for j in range(i, n):
            entry = random_polynomial(rng, n, 0.05)
            if i == j:
                # The constant monomial comes first
                entry["terms"][0][0] += 1.0
            metric[i][j] = metric[j][i] = entry

    return {
        "inline": {
            "name": f"random-{seed}",
            "dim": n,
            "metric": metric,
            "one_form": [random_polynomial(rng, n, 0.05) for _ in range(n)],
            "vector_field": [random_polynomial(rng, n, 1.0) for _ in range(n)],
            "phi": {"family": "randers"},
        }
    }


def verification(
    scenario: dict, checks: list, count: int = 100, **kwargs
) -> VerificationReport:
    start = time.perf_counter()
    report = run_verification(
        RunConfig(scenario=scenario, checks=checks, samples=count, seed=11, **kwargs)
    )
    logger.info(
        f"Verified {', '.join(checks)} over {count} points in "
        f"{format_timespan(time.perf_counter() - start)}"
    )
    return report


def verdicts(report: VerificationReport) -> dict:
    return {tag: result.verdict for tag, result in report.checks.items()}


@pytest.mark.parametrize(
    "name",
    [
        "flat+const-b+dilation",
        "flat+const-b+rotation",
        "flat+const-b+linear",
        "flat+const-b+moebius",
    ],
)
def test_lift_identities(name):
    report = verification({"builtin": {"name": name}}, ["lift-identity"], rays=4)

    assert verdicts(report) == {"lift-identity": Verdict.PASS.value}


@pytest.mark.parametrize("seed, n", [(0, 2), (1, 2), (2, 3), (3, 3), (4, 2)])
def test_lift_identities_on_curved_metrics(seed, n):
    report = verification(
        random_curved_scenario(seed, n),
        ["lift-identity"],
        rays=4,
        scheme=Scheme.CENTRAL4,
    )
    result = report.checks["lift-identity"]

    assert result.verdict == Verdict.PASS.value
    assert len(result.points) == 100
    assert result.residual_max <= 1e-6


def test_dilation_positive_controls():
    checks = ["theorem1", "theorem2-kropina", "direct-defect"]
    report = verification(DILATION, checks, count=50)

    # The Kropina profile only warns about the generic characterization
    assert all(verdict == Verdict.PASS.value for verdict in verdicts(report).values())
    assert report.exit_status == int(ExitStatus.PASS)

    for tag in checks:
        result = report.checks[tag]
        assert result.details["factor"]["kappa"] == 1.0
        assert result.details["homothety"]["verdict"] == "homothetic"
        for point in result.points:
            assert point.fitted["c"] == pytest.approx(0.4, abs=1e-8)


@pytest.mark.parametrize("epsilon", [1, -1])
def test_exp_type_positive_controls(epsilon):
    checks = ["theorem2-exp", "vcb2", "deform", "ode-y42"]
    report = verification(exp_dilation(epsilon), checks, count=50, rays=4)

    assert report.overall_pass

    for point in report.checks["theorem2-exp"].points:
        assert point.fitted["c"] == pytest.approx(0.4, abs=1e-9)
        assert point.fitted["tau"] == pytest.approx(0.8, abs=1e-9)

    assert report.checks["deform"].residual_max <= 1e-8
    assert report.checks["vcb2"].residual_max <= 1e-8
    assert report.checks["ode-y42"].details["grid_residual"] <= 1e-10


def test_moebius_negative_control():
    report = verification(MOEBIUS, ["theorem1"], count=50)
    result = report.checks["theorem1"]

    assert result.verdict == Verdict.FAIL.value
    assert result.residual_max >= 1e-2
    assert report.exit_status == int(ExitStatus.FAIL)


@pytest.mark.parametrize("case", ["A2", "A3", "B2", "B3"])
def test_kropina_family_reproduction(case, kropina_family_cases):
    report = verification(
        {"kropina_family": kropina_family_cases[case]},
        ["example1-full", "closed", "douglas-kropina"],
    )

    assert report.overall_pass

    result = report.checks["example1-full"]

    assert result.details["homothety"]["verdict"] == "non-homothetic"
    assert result.details["factor"]["matched"]
    # The fits recover -c on this family, which the scenario declares
    assert result.details["factor"]["kappa"] == -1.0
    assert result.details["factor"]["verdict"] == Verdict.PASS.value
    assert report.scenario["factor_convention"] == -1.0

    for point in result.points:
        assert point.components["unit_norm"] <= 1e-9
        assert point.components["closed"] <= 1e-7
        assert point.components["douglas"] <= 1e-7
        assert point.components["fit"] <= 1e-5


@pytest.mark.parametrize("epsilon", [1, -1])
def test_deformation_ode(epsilon):
    special = DeformationTriple.special_solution(epsilon)
    identity = DeformationTriple.identity(epsilon)

    for t in np.linspace(0.5, 3.0, 100):
        assert max(abs(res) for res in deformation_ode_residual(special, t)) <= 1e-10

        res_u, res_v = deformation_ode_residual(identity, t)
        assert res_u == pytest.approx(epsilon / t**2, abs=1e-12)
        assert res_v == pytest.approx(-1 / t**2, abs=1e-12)


def test_identity_deformation_is_rejected():
    report = verification(
        exp_dilation(1), ["ode-y42"], count=20, deformation="identity"
    )

    assert verdicts(report) == {"ode-y42": Verdict.FAIL.value}


def test_tau_sigma_on_linear_field():
    report = verification(
        {"builtin": {"name": "flat+const-b+linear", "params": {"n": 3, "lambda": 0.5}}},
        ["lemma51"],
        count=50,
        tolerances={"lemma51": 1e-8},
    )
    details = report.checks["lemma51"].details

    assert report.overall_pass
    assert details["hypotheses_hold"]
    assert details["spread"] <= 1e-8
    assert details["mean"] == pytest.approx(-0.5)


@pytest.mark.parametrize(
    "scenario, checks, verdict",
    [
        (
            {"builtin": {"name": "flat-euclidean", "params": M_KROPINA}},
            ["mkropina-bd", "einstein", "killing", "closed"],
            Verdict.PASS,
        ),
        (
            {"builtin": {"name": "flat+perturbed-b", "params": M_KROPINA}},
            ["mkropina-bd"],
            Verdict.FAIL,
        ),
        (
            {"builtin": {"name": "space-form", "params": {"n": 3, "mu": 1.0}}},
            ["einstein"],
            Verdict.PASS,
        ),
    ],
)
def test_classification(scenario, checks, verdict):
    report = verification(scenario, checks)

    assert set(verdicts(report).values()) == {verdict.value}

    if verdict is Verdict.FAIL:
        assert report.checks["mkropina-bd"].residual_max >= 1e-3


def test_determinism():
    checks = ["theorem1", "direct-defect", "lift-identity"]

    first = verification(DILATION, checks, count=200)
    second = verification(DILATION, checks, count=200)

    assert comparable(first.to_dict()) == comparable(second.to_dict())


@pytest.mark.parametrize("scenario", [DILATION, MOEBIUS])
def test_direct_defect_agrees_with_fit(scenario):
    report = verification(scenario, ["theorem1", "direct-defect"], count=50)

    fit, defect = report.checks["theorem1"], report.checks["direct-defect"]

    assert fit.verdict == defect.verdict


@pytest.mark.parametrize("case", ["A2", "B3"])
def test_direct_defect_agrees_with_kropina_family_fit(case, kropina_family_cases):
    report = verification(
        {"kropina_family": kropina_family_cases[case]},
        ["theorem2-kropina", "direct-defect"],
        count=50,
    )

    fit, defect = report.checks["theorem2-kropina"], report.checks["direct-defect"]

    assert fit.verdict == defect.verdict == Verdict.PASS.value
    assert defect.details["factor"]["kappa"] == -1.0


@pytest.mark.parametrize("epsilon", [1, -1])
def test_direct_defect_agrees_with_exp_fit(epsilon):
    report = verification(
        exp_dilation(epsilon), ["theorem2-exp", "direct-defect"], count=50
    )

    fit, defect = report.checks["theorem2-exp"], report.checks["direct-defect"]

    assert fit.verdict == defect.verdict == Verdict.PASS.value


def test_tau_sigma_on_kropina_family(kropina_family_cases):
    report = verification(
        {"kropina_family": kropina_family_cases["A2"]}, ["lemma51"], count=50
    )
    result = report.checks["lemma51"]

    # beta is not a conformal one-form on this family
    assert result.verdict == Verdict.NOT_APPLICABLE.value
    assert not result.details["hypotheses_hold"]
    assert result.details["beta_conformal_residual"] > 1e-2
    assert report.exit_status == int(ExitStatus.WARN)


def test_kropina_family_complement(kropina_family_cases):
    report = verification(
        {"kropina_family": kropina_family_cases["complement"]}, ["example1-full"]
    )
    result = report.checks["example1-full"]

    assert report.scenario["degenerate"]
    assert result.verdict == Verdict.WARN.value
    assert result.details["homothety"]["verdict"] == "homothetic"
    assert result.details["homothety"]["killing"]
    assert all("reduced-rank fit" in point.warnings for point in result.points)
    assert report.exit_status == int(ExitStatus.WARN)
