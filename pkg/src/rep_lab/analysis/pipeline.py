from __future__ import annotations

import logging
import math
import typing as t
from dataclasses import dataclass, replace

from rep_lab.analysis.blowup import BlowupDetection, detect_blowup, estimate_pq, rate_trajectory, u1_slope
from rep_lab.analysis.bounds import lower_bound_tB
from rep_lab.analysis.rates import (
    LAMBDA_TRIALS,
    RHO_TRIALS,
    Ladder,
    LadderSpec,
    case_observed,
    fit_rate,
    ladder,
    measure_gamma,
    measure_R0,
    predicted_rates,
)
from rep_lab.analysis.report import BlowupReport, PredictedRates, RateFit
from rep_lab.analysis.verify import raise_on_violation, verify
from rep_lab.core.classify import classify
from rep_lab.core.errors import AmbiguousExponent, InsufficientTailSamples, NotABlowupTrajectory, UnresolvedCase
from rep_lab.core.models import Classification, REPParams, SpectralInitialData
from rep_lab.dynamics.systems import USpaceSystem
from rep_lab.integrate.control import StepControl
from rep_lab.integrate.trajectory import Trajectory

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BlowupAnalysis:
    classification: Classification
    detection: BlowupDetection
    report: BlowupReport
    predictions: t.Optional[PredictedRates]
    rate_traj: Trajectory
    rungs: Ladder

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {
            "classification": self.classification.to_dict(),
            "report": self.report.to_dict(),
            "predicted": self.predictions.to_dict() if self.predictions else None,
            "terminal": {
                "u": self.detection.u_traj.terminal.to_dict(),
                "lambda": self.detection.lam_traj.terminal.to_dict(),
                "pair": self.detection.pair_traj.terminal.to_dict() if self.detection.pair_traj else None,
            },
        }


def _try_fit(
    rungs: Ladder, quantity: str, trials: t.Sequence[float], *, allow_log: bool = False
) -> t.Optional[RateFit]:
    try:
        return fit_rate(rungs, rungs.tB, quantity, trials, allow_log=allow_log)
    except (AmbiguousExponent, InsufficientTailSamples) as exc:
        _logger.warning("rate fit for %s skipped: %s", quantity, exc)
        return None


def analyze_blowup(
    params: REPParams,
    init: SpectralInitialData,
    detection: BlowupDetection,
    control: StepControl,
    *,
    spec: LadderSpec = LadderSpec(),
    classification: t.Optional[Classification] = None,
) -> BlowupAnalysis:
    """Rates, boundary data and theory residuals for a detected blow-up."""
    if not detection.detected:
        raise NotABlowupTrajectory(detection.lam_traj.terminal.kind.value)
    classification = classification or classify(params, init)
    tB = float(detection.t_blowup)
    tangential = detection.tangential
    reuse = detection.pair_traj if tangential else detection.lam_traj
    rate_traj = rate_trajectory(params, init, control, tB, spec, reuse, tangential=tangential)
    rungs = ladder(rate_traj, tB, spec)

    xi1 = _try_fit(rungs, "lambda1", LAMBDA_TRIALS)
    xin = _try_fit(rungs, "lambdan", LAMBDA_TRIALS, allow_log=True)
    rho_rate = _try_fit(rungs, "rho", RHO_TRIALS)
    gamma = measure_gamma(rungs)
    R0 = measure_R0(rungs, init.rho0, gamma)

    pq_source = rate_traj if tangential else detection.u_traj
    pq = estimate_pq(pq_source, init, tB, spec)
    slope = u1_slope(detection.u_traj)
    observed = case_observed(init, xi1, gamma)

    predictions: t.Optional[PredictedRates] = None
    label = classification.case_label or observed
    try:
        C = -xi1.coefficient if xi1 is not None and xi1.exponent == 2.0 else None
        predictions = predicted_rates(label, params, init, C=C, tB=tB, R0=R0)
    except UnresolvedCase as exc:
        _logger.info("%s", exc)

    report = BlowupReport(
        tB=tB,
        tB_bracket=detection.bracket,
        tangential=tangential,
        J=init.J,
        p=pq.p,
        q=pq.q,
        p_raw=pq.p_raw,
        q_raw=pq.q_raw,
        u1_slope=slope,
        gamma=gamma,
        R0=R0,
        xi1=xi1,
        xin=xin,
        rho_rate=rho_rate,
        case_observed=observed,
        lower_bound=lower_bound_tB(params, init.lambda0[0]),
    )
    abel = detection.u_traj.diagnostics.residual_max if isinstance(detection.u_traj.system, USpaceSystem) else math.nan
    residuals = verify(
        rate_traj,
        report,
        predictions,
        params,
        init,
        rungs=rungs,
        escape=rate_traj if tangential else detection.lam_traj,
        abel_max=abel,
    )
    report = replace(report, residuals=residuals)
    _logger.info(
        "t_B=%.12g (%s), case observed %s, gamma=%.6g",
        tB,
        "tangential" if tangential else "transversal",
        observed.value if observed else "?",
        gamma,
    )
    return BlowupAnalysis(classification, detection, report, predictions, rate_traj, rungs)


def run_blowup(
    params: REPParams,
    init: SpectralInitialData,
    control: StepControl = StepControl(),
    t_max: t.Optional[float] = None,
    *,
    spec: LadderSpec = LadderSpec(),
    strict: bool = True,
) -> BlowupAnalysis:
    """Classify, detect, measure and verify one initial datum.

    Raises NotABlowupTrajectory when nothing blows up before ``t_max`` and,
    with ``strict``, TheoryViolation when a hard check fails.
    """
    classification = classify(params, init)
    t_max = default_t_max(params) if t_max is None else t_max
    detection = detect_blowup(params, init, control, t_max)
    analysis = analyze_blowup(params, init, detection, control, spec=spec, classification=classification)
    if strict:
        raise_on_violation(analysis.report.residuals)
    return analysis


def default_t_max(params: REPParams) -> float:
    """A hundred time units of 1/omega."""
    return 100.0 / params.omega
