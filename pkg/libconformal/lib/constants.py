# pylint: disable=missing-docstring

import os
import textwrap
from enum import Enum, IntEnum
from typing import List

# Allow these to be set through the environment
CONFORMAL_H_FIRST = float(os.environ.get("CONFORMAL_H_FIRST", 1e-5))
CONFORMAL_H_SECOND = float(os.environ.get("CONFORMAL_H_SECOND", 1e-4))
CONFORMAL_JET_TOLERANCE = float(os.environ.get("CONFORMAL_JET_TOLERANCE", 1e-6))

# Relative asymmetry of a difference Hessian above which second derivatives are not trusted
CONFORMAL_HESSIAN_CONFIDENCE = float(
    os.environ.get("CONFORMAL_HESSIAN_CONFIDENCE", 1e-6)
)

CONFORMAL_SAMPLE_RETRIES = int(os.environ.get("CONFORMAL_SAMPLE_RETRIES", 100))
CONFORMAL_ODE_TOLERANCE = float(os.environ.get("CONFORMAL_ODE_TOLERANCE", 1e-8))
CONFORMAL_UNIT_NORM_TOLERANCE = float(
    os.environ.get("CONFORMAL_UNIT_NORM_TOLERANCE", 1e-6)
)

# Interval between progress updates in the job generator
CONFORMAL_PROGRESS_STEP = int(os.environ.get("CONFORMAL_PROGRESS_STEP", 10))

# Squared norms below this are treated as zero
VANISHING_NORM = 1e-12

# Minimum number of positive points for a homothety verdict
MIN_HOMOTHETY_POINTS = 10

DEFAULT_SAMPLE_COUNT = 50
DEFAULT_RAY_COUNT = 8
DEFAULT_SEED = 0


class Scheme(str, Enum):
    CENTRAL2 = "central2"
    CENTRAL4 = "central4"
    ANALYTIC = "analytic"


class Verdict(str, Enum):
    PASS = "pass"
    WARN = "warn"
    FAIL = "fail"
    NOT_APPLICABLE = "not-applicable"


class ExitStatus(IntEnum):
    PASS = 0
    FAIL = 1
    WARN = 2
    CONFIG_ERROR = 64


class PointStatus(str, Enum):
    OK = "ok"
    FAILED = "failed"
    NOT_APPLICABLE = "not-applicable"


class CheckTag(str, Enum):
    LIFT_IDENTITY = "lift-identity"
    CONFORMAL_GENERIC = "theorem1"
    CONFORMAL_UNIT_KROPINA = "theorem2-kropina"
    CONFORMAL_EXP = "theorem2-exp"
    CONFORMAL_KROPINA_TYPE = "prop41"
    DIRECT_DEFECT = "direct-defect"
    DOUGLAS_KROPINA = "douglas-kropina"
    KROPINA_CLASS = "mkropina-bd"
    EXP_CLASS = "exp-bd"
    KILLING = "killing"
    EINSTEIN = "einstein"
    CLOSED = "closed"
    TAU_SIGMA = "lemma51"
    B_NORM_FLOW = "vcb2"
    DEFORMATION_LIFT = "deform"
    DEFORMATION_ODE = "ode-y42"
    KROPINA_FAMILY = "example1-full"

    @classmethod
    def _missing_(cls, value):
        if value in CHECK_TAG_ALIASES:
            return cls(CHECK_TAG_ALIASES[value])
        return None

    @property
    def aliases(self) -> List[str]:
        return [
            alias for alias, name in CHECK_TAG_ALIASES.items() if name == self.value
        ]


# Descriptive names accepted wherever a check tag is
CHECK_TAG_ALIASES = {
    "conformal-generic": "theorem1",
    "conformal-unit-kropina": "theorem2-kropina",
    "conformal-exp": "theorem2-exp",
    "conformal-kropina-type": "prop41",
    "kropina-class": "mkropina-bd",
    "exp-class": "exp-bd",
    "tau-sigma": "lemma51",
    "b-norm-flow": "vcb2",
    "deformation-lift": "deform",
    "deformation-ode": "ode-y42",
    "kropina-family": "example1-full",
}

CHECK_NAMES = [tag.value for tag in CheckTag] + list(CHECK_TAG_ALIASES)

# Verdict tolerances with 4th-order or analytic differentiation
DEFAULT_TOLERANCES = {
    CheckTag.LIFT_IDENTITY: 1e-6,
    CheckTag.CONFORMAL_GENERIC: 1e-6,
    CheckTag.CONFORMAL_UNIT_KROPINA: 1e-6,
    CheckTag.CONFORMAL_EXP: 1e-6,
    CheckTag.CONFORMAL_KROPINA_TYPE: 1e-6,
    CheckTag.DIRECT_DEFECT: 1e-5,
    CheckTag.DOUGLAS_KROPINA: 1e-7,
    CheckTag.KROPINA_CLASS: 1e-6,
    CheckTag.EXP_CLASS: 1e-6,
    CheckTag.KILLING: 1e-6,
    CheckTag.EINSTEIN: 1e-4,
    CheckTag.CLOSED: 1e-7,
    CheckTag.TAU_SIGMA: 1e-6,
    CheckTag.B_NORM_FLOW: 1e-6,
    CheckTag.DEFORMATION_LIFT: 1e-6,
    CheckTag.DEFORMATION_ODE: 1e-10,
    CheckTag.KROPINA_FAMILY: 1e-5,
}

# 2nd-order differences lose accuracy on every derivative-based check
CENTRAL2_TOLERANCE_FLOOR = 1e-4

# Candidate ratios between a fitted and an expected conformal factor
FACTOR_CONVENTIONS = (1.0, -1.0, 2.0, -2.0, 0.5, -0.5)

# Factors smaller than this are compared absolutely
FACTOR_SCALE_FLOOR = 1e-3


# fmt: off
ASCII_ART_NAME = textwrap.dedent(r"""
                   __                            _
  ___ ___  _ __  / _| ___  _ __ _ __ ___   __ _| |
 / __/ _ \| '_ \| |_ / _ \| '__| '_ ` _ \ / _` | |
| (_| (_) | | | |  _| (_) | |  | | | | | | (_| | |
 \___\___/|_| |_|_|  \___/|_|  |_| |_| |_|\__,_|_|
""")  # noqa: W291
# fmt: on


def get_conformal_settings():
    """
    Return the environment-tunable settings as (name, value) pairs
    """

    return [
        (key, value)
        for key, value in globals().items()
        if key.startswith("CONFORMAL_")
    ]
