"""Blow-up time extraction, rate fitting and theory checks."""

from .blowup import (
    BlowupDetection,
    PoleProjection,
    PQEstimate,
    detect_blowup,
    estimate_pq,
    find_blowup_time,
    project_pole,
    rate_trajectory,
    u1_slope,
)
from .bounds import lower_bound_tB
from .pipeline import BlowupAnalysis, analyze_blowup, default_t_max, run_blowup
from .rates import (
    Ladder,
    LadderSpec,
    case_observed,
    fit_rate,
    fit_series,
    ladder,
    measure_gamma,
    measure_R0,
    predicted_rates,
    quadratic_roots,
    richardson,
)
from .report import BlowupReport, PredictedRates, RateFit
from .verify import (
    HARD_CHECKS,
    OscillationCheck,
    check_non_oscillation,
    doubling_rounds,
    hard_failures,
    raise_on_violation,
    shell_integrals,
    verify,
    verify_global,
)

__all__ = [
    # Reports
    "BlowupReport",
    "RateFit",
    "PredictedRates",
    # Blow-up time
    "lower_bound_tB",
    "find_blowup_time",
    "project_pole",
    "PoleProjection",
    "detect_blowup",
    "BlowupDetection",
    "rate_trajectory",
    "estimate_pq",
    "PQEstimate",
    "u1_slope",
    # Rates
    "Ladder",
    "LadderSpec",
    "ladder",
    "richardson",
    "fit_series",
    "fit_rate",
    "measure_gamma",
    "measure_R0",
    "quadratic_roots",
    "case_observed",
    "predicted_rates",
    # Verification
    "verify",
    "verify_global",
    "check_non_oscillation",
    "OscillationCheck",
    "shell_integrals",
    "doubling_rounds",
    "hard_failures",
    "raise_on_violation",
    "HARD_CHECKS",
    # Pipeline
    "BlowupAnalysis",
    "analyze_blowup",
    "run_blowup",
    "default_t_max",
]
