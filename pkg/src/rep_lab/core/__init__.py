"""Domain types, error hierarchy and initial-data classification."""

from .classify import classify, compute_J, gap_product, validate
from .errors import (
    AmbiguousExponent,
    ConfigurationError,
    DegenerateSpectrum,
    DimensionMismatch,
    InsufficientTailSamples,
    NoCrossing,
    NonFiniteInput,
    NonFiniteState,
    NonPositiveDensity,
    NonPositiveParameter,
    NonPositiveU,
    NotABlowupTrajectory,
    NumericalError,
    OutOfDomain,
    RepError,
    StepSizeUnderflow,
    TheoryViolation,
    UnresolvedCase,
)
from .models import CaseLabel, Classification, REPParams, RuleTag, SpectralInitialData, Verdict

__all__ = [
    # Models
    "REPParams",
    "SpectralInitialData",
    "Classification",
    "Verdict",
    "RuleTag",
    "CaseLabel",
    # Rules
    "validate",
    "compute_J",
    "classify",
    "gap_product",
    # Errors
    "RepError",
    "ConfigurationError",
    "NumericalError",
    "TheoryViolation",
    "NonPositiveParameter",
    "DimensionMismatch",
    "NonFiniteInput",
    "DegenerateSpectrum",
    "OutOfDomain",
    "NonPositiveDensity",
    "NonPositiveU",
    "StepSizeUnderflow",
    "NonFiniteState",
    "NoCrossing",
    "InsufficientTailSamples",
    "AmbiguousExponent",
    "NotABlowupTrajectory",
    "UnresolvedCase",
]
