"""Realized cumulants for martingales."""

from .bell import N_MAX, bell_eval, bell_terms, g_eval, quadratic_part_coefficients
from .cumulants import conditional_cumulants_from_moments, cumulants_to_moments, moments_to_cumulants
from .exceptions import CapacityError, ModelError, PathParseError, RealizedCumulantsError
from .paths import JumpMark, MultiPath, PathBatch
from .realized import RealizedStatistic, realized_cumulant
from .report import VerificationReport

__version__ = "0.1.0"

__all__ = [
    "N_MAX",
    "CapacityError",
    "JumpMark",
    "ModelError",
    "MultiPath",
    "PathBatch",
    "PathParseError",
    "RealizedCumulantsError",
    "RealizedStatistic",
    "VerificationReport",
    "bell_eval",
    "bell_terms",
    "conditional_cumulants_from_moments",
    "cumulants_to_moments",
    "g_eval",
    "moments_to_cumulants",
    "quadratic_part_coefficients",
    "realized_cumulant",
]
