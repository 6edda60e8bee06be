"""Terminal events watched on every accepted step.

An event fires when its function goes from positive to non-positive across an
accepted step; the crossing is then bracketed by bisection on the step's
dense output.
"""

from __future__ import annotations

import enum
import logging
import math
import typing as t
from dataclasses import dataclass

import numpy as np

from rep_lab.core.errors import NoCrossing, NumericalError
from rep_lab.dynamics.base import CoordinateSystem
from rep_lab.dynamics.systems import LogPairSystem, USpaceSystem
from rep_lab.integrate.trajectory import Trajectory

_logger = logging.getLogger(__name__)

EventFunction = t.Callable[[float, np.ndarray], float]


class EventKind(str, enum.Enum):
    BLOWUP = "blowup"
    OVERFLOW = "overflow"


@dataclass(frozen=True)
class Event:
    name: str
    fn: EventFunction
    kind: EventKind = EventKind.BLOWUP
    # decides, from the state just past the crossing, whether t_event is only an escape time
    tangential: t.Callable[[float, np.ndarray], bool] = lambda t, y: False


def event_value(fn: EventFunction, t_value: float, y: np.ndarray) -> float:
    # states where the coordinate map breaks down (u <= 0) count as already crossed
    try:
        value = float(fn(t_value, y))
    except NumericalError:
        return -math.inf
    return value if math.isfinite(value) else -math.inf


def refine_bracket(
    evaluate: t.Callable[[float], np.ndarray],
    fn: EventFunction,
    t_lo: float,
    t_hi: float,
    width: float,
) -> t.Tuple[float, float]:
    """Bisect [t_lo, t_hi] keeping fn(t_lo) > 0 >= fn(t_hi)."""
    while t_hi - t_lo > width:
        mid = 0.5 * (t_lo + t_hi)
        if mid <= t_lo or mid >= t_hi:
            break
        if event_value(fn, mid, evaluate(mid)) > 0:
            t_lo = mid
        else:
            t_hi = mid
    return t_lo, t_hi


def u1_zero(system: USpaceSystem, eps: float, transversal_tol: float) -> Event:
    def fn(t_value: float, y: np.ndarray) -> float:
        return system.u_first(y) - eps

    def tangential(t_value: float, y: np.ndarray) -> bool:
        v1 = system.v_first(y)
        if not v1 < 0:
            return True
        return eps / -v1 > transversal_tol * max(1.0, abs(t_value))

    return Event("u1_zero", fn, EventKind.BLOWUP, tangential)


def u_cap(system: USpaceSystem, cap: float) -> Event:
    return Event("u_cap", lambda t_value, y: cap - system.u_last(y), EventKind.BLOWUP, lambda t_value, y: True)


def lambda_escape(system: CoordinateSystem, threshold: float) -> Event:
    return Event(
        "lambda_escape",
        lambda t_value, y: threshold - system.escape_magnitude(y),
        EventKind.BLOWUP,
        lambda t_value, y: True,
    )


def pole_reach(system: LogPairSystem, reach: float) -> Event:
    """Fires once the projected distance to the pole drops below ``reach``, scaled by max(1, t)."""

    def fn(t_value: float, y: np.ndarray) -> float:
        return min(system.pole_distance(y), 1.0) - reach * max(1.0, abs(t_value))

    return Event("pole_reach", fn, EventKind.BLOWUP, lambda t_value, y: True)


def density_overflow(system: CoordinateSystem, cap: float) -> Event:
    return Event("density_overflow", lambda t_value, y: cap - system.density(y), EventKind.OVERFLOW)


def detect_u1_zero(
    traj: Trajectory,
    u_zero_eps: float,
    *,
    bracket_rtol: float = 1e-12,
) -> t.Tuple[float, float]:
    """Bracket the first time u_1 drops to ``u_zero_eps`` on a u-space trajectory.

    Falls back to the projected crossing recorded by the integrator when the
    run stopped short of the threshold.
    """
    system = traj.system
    if not isinstance(system, USpaceSystem):
        raise TypeError("detect_u1_zero needs a u-space trajectory")

    def fn(t_value: float, y: np.ndarray) -> float:
        return system.u_first(y) - u_zero_eps

    values = np.array([event_value(fn, float(ti), yi) for ti, yi in zip(traj.ts, traj.ys)])
    below = np.flatnonzero(values <= 0)
    if below.size and below[0] > 0:
        hi = int(below[0])
        t_lo, t_hi = float(traj.ts[hi - 1]), float(traj.ts[hi])
        width = bracket_rtol * max(1.0, abs(t_hi))
        bracket = refine_bracket(traj.dense, fn, t_lo, t_hi, width)
        _logger.debug("u_1 crossing bracketed in [%.17g, %.17g]", *bracket)
        return bracket
    if traj.terminal.projected and traj.terminal.bracket is not None:
        return traj.terminal.bracket
    raise NoCrossing(traj.t_start, traj.t_end)
