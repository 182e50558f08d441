"""
libconformal record types
"""

from .configuration import RunConfig
from .fit import (
    ClassReport,
    ConformalFit,
    DeformedLift,
    DirectFit,
    FactorComparison,
    FactorField,
    Homothety,
    HomothetyReport,
    ProfileFit,
    TauSigmaReport,
)
from .geometry import BetaInvariants, LieData
from .report import CheckResult, PointResult, VerificationReport
