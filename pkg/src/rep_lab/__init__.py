"""rep_lab

Numerical laboratory for finite-time blow-up in the restricted Euler-Poisson
spectral dynamics: classification of initial data, integration in the
linearizing u coordinates, blow-up time extraction, rate fitting and checks of
the measured rates against the closed-form predictions.
"""

from .analysis import (
    BlowupAnalysis,
    BlowupReport,
    PredictedRates,
    RateFit,
    detect_blowup,
    predicted_rates,
    run_blowup,
    verify_global,
)
from .core import (
    CaseLabel,
    Classification,
    REPParams,
    SpectralInitialData,
    Verdict,
    classify,
)
from .core.errors import (
    ConfigurationError,
    NotABlowupTrajectory,
    NumericalError,
    RepError,
    TheoryViolation,
)
from .dynamics import LambdaSystem, u_system
from .integrate import StepControl, Trajectory, integrate
from .oracle import ExampleFamily, example_eval, example_tB

__all__ = [
    "REPParams",
    "SpectralInitialData",
    "Classification",
    "Verdict",
    "CaseLabel",
    "classify",
    "LambdaSystem",
    "u_system",
    "StepControl",
    "Trajectory",
    "integrate",
    "detect_blowup",
    "run_blowup",
    "predicted_rates",
    "verify_global",
    "BlowupAnalysis",
    "BlowupReport",
    "PredictedRates",
    "RateFit",
    "ExampleFamily",
    "example_eval",
    "example_tB",
    "RepError",
    "ConfigurationError",
    "NumericalError",
    "TheoryViolation",
    "NotABlowupTrajectory",
]

__version__ = "0.1.0"
