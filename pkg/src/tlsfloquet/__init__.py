"""Floquet propagators for periodically driven two-level systems."""

from .classifier import Condition, ConditionReport, classify
from .errors import (
    AccuracyError,
    DegenerateDriveError,
    FrequencyMismatchError,
    InconsistentOmegaError,
    NumericalError,
    ResonanceError,
    SecularTermError,
    StiffnessError,
    TLSFloquetError,
    UnsupportedError,
    UnsupportedSpectrumError,
    WrongConditionError,
)
from .expansion import Expansion, affine_kappa_oracle, assemble_g, expand, omega_value
from .fourier import FourierSeries, index_budget
from .interaction import Interaction, build_phase_functions
from .oracle import integrate, monodromy_omega
from .propagator import FloquetOperator, build_U, transition_probability, unitarity_defect

__all__ = [
    "AccuracyError",
    "Condition",
    "ConditionReport",
    "DegenerateDriveError",
    "Expansion",
    "FloquetOperator",
    "FourierSeries",
    "FrequencyMismatchError",
    "InconsistentOmegaError",
    "Interaction",
    "NumericalError",
    "ResonanceError",
    "SecularTermError",
    "StiffnessError",
    "TLSFloquetError",
    "UnsupportedError",
    "UnsupportedSpectrumError",
    "WrongConditionError",
    "affine_kappa_oracle",
    "assemble_g",
    "build_U",
    "build_phase_functions",
    "classify",
    "expand",
    "index_budget",
    "integrate",
    "monodromy_omega",
    "omega_value",
    "transition_probability",
    "unitarity_defect",
]

__version__ = "0.1.0"
