"""Adaptive and reference integrators, events and trajectories."""

from .control import StepControl
from .dopri import dopri_step, integrate
from .events import (
    Event,
    EventKind,
    density_overflow,
    detect_u1_zero,
    event_value,
    lambda_escape,
    pole_reach,
    refine_bracket,
    u1_zero,
    u_cap,
)
from .rk4 import reference_integrate, rk4_step
from .trajectory import (
    DenseOutput,
    Diagnostics,
    HermiteDenseOutput,
    PolynomialDenseOutput,
    Terminal,
    TerminalKind,
    Trajectory,
)

__all__ = [
    "StepControl",
    # Integrators
    "integrate",
    "dopri_step",
    "reference_integrate",
    "rk4_step",
    # Events
    "Event",
    "EventKind",
    "u1_zero",
    "u_cap",
    "lambda_escape",
    "density_overflow",
    "pole_reach",
    "detect_u1_zero",
    "refine_bracket",
    "event_value",
    # Trajectories
    "Trajectory",
    "Terminal",
    "TerminalKind",
    "Diagnostics",
    "DenseOutput",
    "PolynomialDenseOutput",
    "HermiteDenseOutput",
]
