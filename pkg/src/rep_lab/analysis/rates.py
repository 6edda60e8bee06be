"""Blow-up rates measured on a dyadic ladder of times approaching t_B.

The ladder is t_m = t_B - delta 2^-m. A quantity q is fitted as
q ~ coefficient / (t_B - t)^exponent; the exponent is picked from a small set
of trial values by how flat (t_B - t)^exponent q is over the ladder, and the
coefficient is the Richardson limit of that product.
"""

from __future__ import annotations

import logging
import math
import typing as t
from dataclasses import dataclass

import numpy as np

from rep_lab.analysis.report import PredictedRates, RateFit
from rep_lab.core.classify import gap_product
from rep_lab.core.errors import AmbiguousExponent, InsufficientTailSamples, UnresolvedCase
from rep_lab.core.models import CaseLabel, Classification, REPParams, SpectralInitialData
from rep_lab.integrate.trajectory import Trajectory

_logger = logging.getLogger(__name__)

MIN_LADDER_POINTS = 4
# log-log slopes flatter than this are read as logarithmic growth
LOG_GROWTH_SLOPE = 0.5
AMBIGUITY_RATIO = 2.0
LAMBDA_TRIALS = (1.0, 2.0)
RHO_TRIALS = (1.0, 2.0, 4.0)
GAMMA_VALUES = (-1.0, -2.0, -4.0)

Quantity = t.Union[str, t.Callable[["Ladder"], np.ndarray]]


@dataclass(frozen=True)
class LadderSpec:
    delta: float = 1e-2
    rungs: int = 13

    def distances(self, tB: float) -> np.ndarray:
        base = min(self.delta, 0.5 * tB)
        return base * 2.0 ** -np.arange(self.rungs, dtype=float)

    def floor(self, tB: float) -> float:
        return float(self.distances(tB)[-1])


@dataclass(frozen=True)
class Ladder:
    """States of one trajectory sampled at t_B - d for each ladder distance d."""

    tB: float
    d: np.ndarray
    t: np.ndarray
    lambdas: np.ndarray
    rho: np.ndarray
    ys: np.ndarray

    def __len__(self) -> int:
        return int(self.d.size)

    def select(self, quantity: Quantity) -> np.ndarray:
        if callable(quantity):
            return np.asarray(quantity(self), dtype=float)
        if quantity == "lambda1":
            return self.lambdas[:, 0]
        if quantity == "lambdan":
            return self.lambdas[:, -1]
        if quantity == "rho":
            return self.rho
        if quantity == "sum":
            return self.lambdas.sum(axis=1)
        if quantity.startswith("lambda"):
            return self.lambdas[:, int(quantity[len("lambda") :]) - 1]
        raise KeyError(quantity)


def ladder(traj: Trajectory, tB: float, spec: LadderSpec = LadderSpec()) -> Ladder:
    d = spec.distances(tB)
    times = tB - d
    inside = (times >= traj.t_start) & (times <= traj.t_end)
    if int(inside.sum()) < MIN_LADDER_POINTS:
        raise InsufficientTailSamples(MIN_LADDER_POINTS, int(inside.sum()), "ladder points covered by the trajectory")
    d, times = d[inside], times[inside]
    ys = np.atleast_2d(traj(times))
    lambdas = np.array([traj.system.lambdas(y) for y in ys])
    rho = np.array([traj.system.density(y) for y in ys])
    return Ladder(tB=tB, d=d, t=times, lambdas=lambdas, rho=rho, ys=ys)


def richardson(values: np.ndarray) -> float:
    """Limit of a sequence sampled at halving distances with an O(d) error."""
    values = np.asarray(values, dtype=float)
    if values.size < 2:
        return float(values[-1])
    return float(2.0 * values[-1] - values[-2])


def fit_series(
    d: np.ndarray,
    values: np.ndarray,
    trials: t.Sequence[float] = LAMBDA_TRIALS,
    *,
    allow_log: bool = False,
) -> RateFit:
    """Fit values ~ coefficient / d^exponent over distances ``d`` ordered towards zero."""
    d = np.asarray(d, dtype=float)
    values = np.asarray(values, dtype=float)
    if d.size < MIN_LADDER_POINTS:
        raise InsufficientTailSamples(MIN_LADDER_POINTS, int(d.size))
    span = math.log10(float(d.max() / d.min()))
    if span < 2.0:
        raise InsufficientTailSamples(MIN_LADDER_POINTS, int(d.size), f"window spans {span:.2f} decades, need 2")
    if np.any(values == 0) or not np.all(np.isfinite(values)):
        raise InsufficientTailSamples(MIN_LADDER_POINTS, int(np.count_nonzero(values)), "zero or non-finite samples")
    sign = float(np.sign(values[-1]))
    magnitude = np.abs(values)
    slope = float(np.polyfit(np.log(d), np.log(magnitude), 1)[0])
    decades = int(math.floor(span))

    if allow_log and abs(slope) < LOG_GROWTH_SLOPE:
        # q ~ K log(1/d): report K
        K = magnitude / np.log(1.0 / d)
        residual = float(np.max(np.abs(K / K[-1] - 1.0)))
        return RateFit(0.0, sign * richardson(K), decades, residual, True, slope, float(values[-1]))

    residuals: t.Dict[float, float] = {}
    for exponent in trials:
        scaled = d**exponent * magnitude
        residuals[float(exponent)] = float(np.max(np.abs(scaled / scaled[-1] - 1.0)))
    ranked = sorted(residuals, key=residuals.__getitem__)
    best = ranked[0]
    if len(ranked) > 1 and residuals[ranked[1]] < AMBIGUITY_RATIO * residuals[best]:
        raise AmbiguousExponent(residuals)
    coefficient = sign * richardson(d**best * magnitude)
    _logger.debug("rate fit: exponent=%g coefficient=%.12g slope=%.4f", best, coefficient, slope)
    return RateFit(best, coefficient, decades, residuals[best], False, slope, float(values[-1]))


def fit_rate(
    traj: t.Union[Trajectory, Ladder],
    tB: float,
    quantity: Quantity,
    trials: t.Sequence[float] = LAMBDA_TRIALS,
    *,
    spec: LadderSpec = LadderSpec(),
    allow_log: bool = False,
) -> RateFit:
    rungs = traj if isinstance(traj, Ladder) else ladder(traj, tB, spec)
    return fit_series(rungs.d, rungs.select(quantity), trials, allow_log=allow_log)


def measure_gamma(rungs: Ladder) -> float:
    """Richardson limit of (t_B - t) * sum(lambda)."""
    return richardson(rungs.d * rungs.lambdas.sum(axis=1))


def snap_gamma(gamma: float, tol: float = 0.05) -> t.Optional[float]:
    for value in GAMMA_VALUES:
        if abs(gamma - value) < tol:
            return value
    return None


def measure_R0(rungs: Ladder, rho0: float, gamma: float, *, tail: int = 4, spread: float = 0.05) -> t.Optional[float]:
    """Limit of exp(-int R) = (rho/rho0) (t_B/(t_B - t))^gamma, when it settles."""
    snapped = snap_gamma(gamma)
    if snapped is None or len(rungs) < tail:
        return None
    with np.errstate(over="ignore", invalid="ignore"):
        weights = rungs.rho / rho0 * (rungs.tB / rungs.d) ** snapped
    last = weights[-tail:]
    if not np.all(np.isfinite(last)) or np.any(last <= 0):
        return None
    if (last.max() - last.min()) / abs(last[-1]) >= spread:
        return None
    return float(last[-1])


def quadratic_roots(params: REPParams, rho0: float, tB: float, R0: float) -> t.Tuple[float, float]:
    """Roots of xi^2 + xi - k rho0 t_B^2 R0 / n = 0, smaller first."""
    a = params.k * rho0 * tB**2 * R0 / params.n
    disc = math.sqrt(1.0 + 4.0 * a)
    return 0.5 * (-1.0 - disc), 0.5 * (-1.0 + disc)


def case_observed(init: SpectralInitialData, xi1: t.Optional[RateFit], gamma: float) -> t.Optional[CaseLabel]:
    if xi1 is not None and xi1.exponent == 2.0:
        return CaseLabel.IIC
    snapped = snap_gamma(gamma)
    if snapped == -4.0:
        return CaseLabel.IIC
    if snapped == -1.0:
        return CaseLabel.I
    if snapped == -2.0:
        if init.J == 2:
            return CaseLabel.IIB if init.n == 4 else CaseLabel.IIA
        if init.J >= 3:
            return CaseLabel.III
    return None


def predicted_rates(
    classification: t.Union[Classification, CaseLabel, None],
    params: REPParams,
    init: SpectralInitialData,
    *,
    C: t.Optional[float] = None,
    tB: t.Optional[float] = None,
    R0: t.Optional[float] = None,
) -> PredictedRates:
    """Rates the theory attaches to a case label.

    ``C`` is the second-order pole coefficient, which the theory leaves free;
    pass the measured one to get the dependent density coefficient.
    """
    case = classification.case_label if isinstance(classification, Classification) else classification
    if case is None:
        raise UnresolvedCase("the initial data carries no case label")
    roots = quadratic_roots(params, init.rho0, tB, R0) if tB is not None and R0 is not None else None
    n, J = init.n, init.J

    if case is CaseLabel.I:
        return PredictedRates(case, 1, -1.0, xi1=-1.0, xin=0.0, rho_exponent=1.0, log_growth_n=True)
    if case is CaseLabel.IIA:
        # density grows faster than 1/(t_B - t) but slower than 1/(t_B - t)^2
        return PredictedRates(case, 1, -2.0, xi1=-1.0, xin=0.0, log_growth_n=True, quadratic_roots=roots)
    if case is CaseLabel.IIB:
        A0 = gap_product(init)
        ratio = A0 / (A0 - params.k * init.rho0)
        xi1 = 0.5 * (-1.0 - math.sqrt(ratio))
        return PredictedRates(case, 1, -2.0, xi1=xi1, xin=-1.0 - xi1, rho_exponent=2.0, quadratic_roots=roots)
    if case is CaseLabel.IIC:
        rho_coefficient = 4.0 * C**2 / params.k if C is not None else None
        return PredictedRates(
            case,
            2,
            -4.0,
            xi1=-C if C is not None else None,
            xin=C,
            rho_exponent=4.0,
            rho_coefficient=rho_coefficient,
        )
    # case III: xi1 + xin = -1 and J xi1 + (n - J) xin = -2
    C3 = (n - J - 2) / (n - 2 * J)
    return PredictedRates(case, 1, -2.0, xi1=-C3, xin=C3 - 1.0, rho_exponent=2.0, quadratic_roots=roots)
