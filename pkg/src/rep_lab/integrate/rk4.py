from __future__ import annotations

import logging
import math
import typing as t

import numpy as np

from rep_lab.core.errors import NonFiniteState, NonPositiveParameter
from rep_lab.dynamics.base import CoordinateSystem
from rep_lab.integrate.trajectory import Diagnostics, HermiteDenseOutput, Terminal, TerminalKind, Trajectory

_logger = logging.getLogger(__name__)


def rk4_step(rhs: t.Callable[[float, np.ndarray], np.ndarray], t0: float, y: np.ndarray, h: float) -> np.ndarray:
    k1 = rhs(t0, y)
    k2 = rhs(t0 + 0.5 * h, y + 0.5 * h * k1)
    k3 = rhs(t0 + 0.5 * h, y + 0.5 * h * k2)
    k4 = rhs(t0 + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def reference_integrate(
    system: CoordinateSystem,
    h_fixed: float,
    t_max: float,
    *,
    t0: float = 0.0,
    y0: t.Optional[np.ndarray] = None,
) -> Trajectory:
    """Classical fixed-step RK4; the last step is shortened to land on ``t_max``."""
    if not h_fixed > 0:
        raise NonPositiveParameter("h_fixed", h_fixed)
    steps = max(1, math.ceil((t_max - t0) / h_fixed - 1e-9))
    y = np.array(system.initial_vector() if y0 is None else y0, dtype=float)
    ts = np.empty(steps + 1)
    ys = np.empty((steps + 1, y.size))
    fs = np.empty_like(ys)
    ts[0], ys[0], fs[0] = t0, y, system.rhs(t0, y)
    residual = np.empty(steps + 1)
    residual[0] = system.residual(y)
    for i in range(steps):
        t_value = t0 + i * h_fixed
        h = min(h_fixed, t_max - t_value)
        y = rk4_step(system.rhs, t_value, y, h)
        t_next = t_max if i == steps - 1 else t0 + (i + 1) * h_fixed
        if not np.all(np.isfinite(y)):
            raise NonFiniteState(t_next)
        ts[i + 1], ys[i + 1], fs[i + 1] = t_next, y, system.rhs(t_next, y)
        residual[i + 1] = system.residual(y)
    _logger.debug("reference RK4 finished %d steps of h=%.3e", steps, h_fixed)
    diagnostics = Diagnostics(
        steps=steps, rejected=0, rhs_evaluations=5 * steps + 1, residual=residual, method="rk4"
    )
    dense = HermiteDenseOutput(ts, ys, fs)
    return Trajectory(system, ts, ys, dense, Terminal(TerminalKind.REACHED_TMAX), diagnostics)
