"""Measured blow-up data checked against what the theory proves.

Every check produces a residual; only a few of them are hard failures
(see ``HARD_CHECKS``). The rest are reported for the caller to judge.
"""

from __future__ import annotations

import logging
import math
import typing as t
from dataclasses import dataclass

import numpy as np
from scipy.integrate import fixed_quad

from rep_lab.analysis.rates import Ladder
from rep_lab.analysis.report import BlowupReport, PredictedRates
from rep_lab.core.errors import TheoryViolation
from rep_lab.core.models import CaseLabel, REPParams, SpectralInitialData
from rep_lab.integrate.trajectory import TerminalKind, Trajectory

_logger = logging.getLogger(__name__)

LAMBDA_CHECK = 1e3
TB_SLACK = 1e-9
PQ_ORDER_TOL = 1e-4
DOUBLING_ROUNDS = 6
# a shell passes the doubling test when its integral is at least this share of the previous one;
# rho ~ d^-a gives a ratio of 2^(a - 1), so only a > 0.93 passes
SHELL_RATIO = 0.95
BOUNDED_RATIO = 10.0

HARD_CHECKS: t.Dict[str, t.Callable[[float], bool]] = {
    "tB_lower_bound_slack": lambda r: r >= -TB_SLACK,
    "pq_order": lambda r: r <= PQ_ORDER_TOL,
    "J_range": lambda r: r == 0,
}


@dataclass(frozen=True)
class OscillationCheck:
    passed: bool
    extrema: int
    worst_amplitude: float

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {"passed": self.passed, "extrema": self.extrema, "worstAmplitude": self.worst_amplitude}


def check_non_oscillation(
    traj: Trajectory,
    tB: t.Optional[float] = None,
    *,
    decades: float = 1.0,
    noise: float = 1e-9,
) -> OscillationCheck:
    """Look for sign-alternating local extrema of each lambda over the last ``decades`` before t_B.

    An extremum counts when the jump around it exceeds ``noise`` relative to
    the local magnitude. A failure points at the integration, not at the theory.
    """
    tB = traj.t_end if tB is None else tB
    distance = tB - np.asarray(traj.ts)
    closest = max(float(distance[-1]), 0.0)
    reach = closest * 10.0**decades if closest > 0 else float(distance[max(0, distance.size - 32)])
    mask = distance <= reach
    lambdas = np.array([traj.system.lambdas(y) for y in traj.ys[mask]])
    if lambdas.shape[0] < 3:
        return OscillationCheck(True, 0, 0.0)
    _, first = np.unique(lambdas[0], return_index=True)
    extrema = 0
    worst = 0.0
    for column in np.sort(first):
        series = lambdas[:, column]
        steps = np.diff(series)
        turns = np.flatnonzero(np.sign(steps[1:]) * np.sign(steps[:-1]) < 0)
        for i in turns:
            scale = max(abs(series[i + 1]), 1.0)
            amplitude = min(abs(steps[i]), abs(steps[i + 1])) / scale
            worst = max(worst, amplitude)
            if amplitude > noise:
                extrema += 1
    if extrema:
        _logger.warning("lambda oscillates near t_B: %d significant extrema (worst %.3e)", extrema, worst)
    return OscillationCheck(extrema == 0, extrema, worst)


def shell_integrals(traj: Trajectory, rungs: Ladder, *, points: int = 8) -> np.ndarray:
    """Integral of rho over each dyadic shell [t_m, t_{m+1}] of the ladder."""
    out = np.empty(len(rungs) - 1)
    for m in range(len(rungs) - 1):
        a, b = float(rungs.t[m]), float(rungs.t[m + 1])
        value, _ = fixed_quad(lambda s: np.array([traj.density_at(x) for x in np.atleast_1d(s)]), a, b, n=points)
        out[m] = value
    return out


def doubling_rounds(shells: np.ndarray) -> int:
    """How many consecutive shells keep at least SHELL_RATIO of the previous one's mass."""
    if shells.size < 2:
        return 0
    return int(np.count_nonzero(shells[1:] >= SHELL_RATIO * shells[:-1]))


def _sign_pattern(lam_end: np.ndarray, J: int, log_growth_n: bool, rungs: t.Optional[Ladder]) -> float:
    violations = int(np.count_nonzero(lam_end[:J] >= -LAMBDA_CHECK))
    upper = lam_end[J:]
    if log_growth_n:
        # |ln d| growth may still sit below zero at the last sample; only the trend counts
        if rungs is not None and len(rungs) > 1:
            tail = rungs.lambdas[:, J:]
            violations += int(np.any(np.diff(tail, axis=0) < 0))
    else:
        violations += int(np.count_nonzero(upper <= LAMBDA_CHECK))
    return float(violations)


def _log_bound(rungs: Ladder, J: int) -> float:
    """Fit K on the first half of the ladder so |lambda_i| <= K |ln d|, then measure the excess on the rest."""
    if J >= rungs.lambdas.shape[1]:
        return 0.0
    ratios = np.abs(rungs.lambdas[:, J:]).max(axis=1) / np.abs(np.log(rungs.d))
    half = len(rungs) // 2
    K = float(ratios[:half].max())
    return float(max(0.0, ratios[half:].max() / (2.0 * K) - 1.0))


def _relative(measured: float, expected: float) -> float:
    return abs(measured - expected) / max(abs(expected), 1.0)


def verify(
    traj: Trajectory,
    report: BlowupReport,
    predictions: t.Optional[PredictedRates],
    params: REPParams,
    init: SpectralInitialData,
    *,
    rungs: t.Optional[Ladder] = None,
    escape: t.Optional[Trajectory] = None,
    abel_max: float = math.nan,
) -> t.Dict[str, float]:
    """Residual map for one blow-up run.

    ``traj`` is the run that reaches into the ladder (log-pair form for
    tangential blow-ups, lambda-space otherwise), ``escape`` the run whose
    last sample is used for the sign pattern.
    """
    residuals: t.Dict[str, float] = {}
    n, J = init.n, init.J
    spread = init.spread

    residuals["tB_lower_bound_slack"] = report.tB - report.lower_bound
    residuals["pq_sum"] = abs(report.p + report.q - spread)
    residuals["pq_order"] = max(0.0, report.q - report.p, -report.q)
    residuals["J_range"] = 0.0 if 1 <= J <= n / 2 else 1.0
    residuals["abel_max"] = abel_max

    log_growth_n = bool(report.xin is not None and report.xin.log_growth)
    lam_end = (escape or traj).system.lambdas((escape or traj).y_end)
    residuals["sign_pattern"] = _sign_pattern(np.asarray(lam_end), J, log_growth_n, rungs)

    if rungs is not None:
        shells = shell_integrals(traj, rungs)
        residuals["rho_integral_divergence"] = float(max(0, DOUBLING_ROUNDS - doubling_rounds(shells)))
    residuals["non_oscillation"] = 0.0 if check_non_oscillation(traj, report.tB).passed else 1.0

    xi1, xin, rho = report.xi1, report.xin, report.rho_rate
    if predictions is not None:
        case = predictions.case
        if case is CaseLabel.IIC:
            _second_order(residuals, params, xi1, xin, rho)
        else:
            _first_order(residuals, predictions, xi1, xin, rho, rungs)
        if predictions.quadratic_roots is not None and xi1 is not None and xi1.exponent == 1.0:
            residuals["R0_quadratic"] = abs(xi1.coefficient - predictions.quadratic_roots[0])
        if case is CaseLabel.I and rungs is not None:
            residuals["log_bound"] = _log_bound(rungs, J)
            scaled = rungs.d * rungs.rho
            residuals["rho_first_order_bounded"] = max(0.0, float(scaled[-1] / scaled[0]) / BOUNDED_RATIO - 1.0)
    _logger.debug("verification residuals: %s", residuals)
    return residuals


def _first_order(
    residuals: t.Dict[str, float],
    predictions: PredictedRates,
    xi1: t.Any,
    xin: t.Any,
    rho: t.Any,
    rungs: t.Optional[Ladder],
) -> None:
    measured_n = None
    if xin is not None:
        measured_n = 0.0 if xin.log_growth else xin.coefficient
    if xi1 is not None and predictions.xi1 is not None:
        residuals["xi1_error"] = _relative(xi1.coefficient, predictions.xi1)
    if measured_n is not None and predictions.xin is not None:
        residuals["xin_error"] = abs(measured_n - predictions.xin)
    if xi1 is not None and measured_n is not None:
        residuals["xi_sum_plus_1"] = abs(xi1.coefficient + measured_n + 1.0)
    if rho is None:
        return
    if predictions.rho_exponent is not None:
        residuals["rho_rate_error"] = abs(rho.exponent - predictions.rho_exponent)
    elif predictions.case is CaseLabel.IIA:
        # little-o of 1/(t_B - t)^2: either a lower exponent or a vanishing exponent-2 prefactor
        decaying = rungs is not None and bool(np.all(np.diff(rungs.d**2 * rungs.rho) < 0))
        residuals["rho_rate_error"] = 0.0 if rho.exponent < 2.0 or decaying else 1.0


def _second_order(residuals: t.Dict[str, float], params: REPParams, xi1: t.Any, xin: t.Any, rho: t.Any) -> None:
    if xi1 is None:
        return
    C = -xi1.coefficient
    if xin is not None:
        residuals["xin_error"] = _relative(xin.coefficient, C)
        residuals["xi_sum"] = abs(xi1.coefficient + xin.coefficient) / max(C, 1.0)
    if rho is not None:
        expected = 4.0 * C**2 / params.k
        residuals["rho_rate_error"] = _relative(rho.coefficient, expected)
        # C recovered from the density prefactor, compared with the lambda_1 one
        C_rho = math.sqrt(params.k * max(rho.coefficient, 0.0) / 4.0)
        residuals["xi1_error"] = _relative(-C_rho, xi1.coefficient)


def verify_global(lam_traj: Trajectory, u_traj: t.Optional[Trajectory] = None) -> t.Dict[str, float]:
    """Boundedness residuals for runs that reached t_max."""
    lambdas = lam_traj.sample_lambdas()
    rho = lam_traj.sample_densities()
    residuals = {
        "sup_lambda": float(np.max(np.abs(lambdas))),
        "sup_rho": float(np.max(rho)),
        "inf_rho": float(np.min(rho)),
        "reached_tmax": 0.0 if lam_traj.terminal.kind is TerminalKind.REACHED_TMAX else 1.0,
    }
    if u_traj is not None:
        residuals["abel_max"] = u_traj.diagnostics.residual_max
    return residuals


def hard_failures(residuals: t.Mapping[str, float]) -> t.List[str]:
    return [name for name, ok in HARD_CHECKS.items() if name in residuals and not ok(residuals[name])]


def raise_on_violation(residuals: t.Mapping[str, float]) -> None:
    failed = hard_failures(residuals)
    if failed:
        raise TheoryViolation(failed[0], residuals[failed[0]])
