"""Dormand-Prince 5(4) with PI step control, native dense output and events."""

from __future__ import annotations

import logging
import math
import typing as t

import numpy as np

from rep_lab.core.errors import NonFiniteState, NonPositiveDensity, NonPositiveParameter, NonPositiveU
from rep_lab.dynamics.base import CoordinateSystem
from rep_lab.dynamics.systems import USpaceSystem
from rep_lab.integrate.control import StepControl
from rep_lab.integrate.events import Event, EventKind, event_value, refine_bracket
from rep_lab.integrate.trajectory import (
    Diagnostics,
    HermiteDenseOutput,
    PolynomialDenseOutput,
    Terminal,
    TerminalKind,
    Trajectory,
)

_logger = logging.getLogger(__name__)

C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
]
B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# difference between the 5th and embedded 4th order weights
E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40])
# quartic continuous extension, columns multiply (x, x^2, x^3, x^4)
P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

Rhs = t.Callable[[float, np.ndarray], np.ndarray]


def dopri_step(
    rhs: Rhs, t0: float, y: np.ndarray, f: np.ndarray, h: float
) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One trial step. Returns (y_new, error estimate, stage matrix K with K[6] = f(t+h, y_new))."""
    K = np.empty((7, y.size))
    K[0] = f
    for s in range(1, 6):
        K[s] = rhs(t0 + C[s] * h, y + h * (A[s] @ K[:s]))
    y_new = y + h * (B[:6] @ K[:6])
    K[6] = rhs(t0 + h, y_new)
    return y_new, h * (E @ K), K


class _Run:
    """Mutable bookkeeping for one integration."""

    def __init__(self, system: CoordinateSystem, control: StepControl, events: t.Sequence[Event]) -> None:
        self.system = system
        self.control = control
        self.events = list(events)
        self.ts: t.List[float] = []
        self.ys: t.List[np.ndarray] = []
        self.fs: t.List[np.ndarray] = []
        self.Qs: t.List[np.ndarray] = []
        self.residuals: t.List[float] = []
        self.steps = 0
        self.rejected = 0
        self.nfev = 0

    def record(self, t_value: float, y: np.ndarray, f: np.ndarray, Q: t.Optional[np.ndarray]) -> None:
        self.ts.append(t_value)
        self.ys.append(y)
        self.fs.append(f)
        if Q is not None:
            self.Qs.append(Q)
        try:
            self.residuals.append(self.system.residual(y))
        except (NonPositiveU, NonPositiveDensity):
            self.residuals.append(math.nan)

    def finish(self, terminal: Terminal) -> Trajectory:
        ts = np.asarray(self.ts)
        ys = np.vstack(self.ys)
        if self.control.dense_output == "hermite" or not self.Qs:
            dense = HermiteDenseOutput(ts, ys, np.vstack(self.fs))
        else:
            dense = PolynomialDenseOutput(ts, ys, np.stack(self.Qs))
        diagnostics = Diagnostics(
            steps=self.steps,
            rejected=self.rejected,
            rhs_evaluations=self.nfev,
            residual=np.asarray(self.residuals),
            method="dopri5",
        )
        _logger.debug(
            "integration finished: %s at t=%.17g after %d steps (%d rejected)",
            terminal.kind.value,
            ts[-1],
            self.steps,
            self.rejected,
        )
        return Trajectory(self.system, ts, ys, dense, terminal, diagnostics)


def _first_crossing(
    run: _Run,
    armed: t.List[bool],
    t_old: float,
    y_old: np.ndarray,
    t_new: float,
    y_new: np.ndarray,
    Q: np.ndarray,
) -> t.Optional[Terminal]:
    h = t_new - t_old

    def local(t_value: float) -> np.ndarray:
        x = (t_value - t_old) / h
        return y_old + h * (Q @ np.array([x, x * x, x**3, x**4]))

    best: t.Optional[t.Tuple[float, float, Event]] = None
    for i, event in enumerate(run.events):
        if not armed[i] or event_value(event.fn, t_new, y_new) > 0:
            continue
        width = run.control.bracket_width(t_new)
        lo, hi = refine_bracket(local, event.fn, t_old, t_new, width)
        if best is None or hi < best[1]:
            best = (lo, hi, event)
    if best is None:
        return None
    lo, hi, event = best
    kind = TerminalKind.BLOWUP_EVENT if event.kind is EventKind.BLOWUP else TerminalKind.DENSITY_OVERFLOW
    tangential = bool(event.tangential(hi, local(hi)))
    _logger.debug("event %s bracketed in [%.17g, %.17g] (tangential=%s)", event.name, lo, hi, tangential)
    return Terminal(kind, t_event=hi, bracket=(lo, hi), event=event.name, tangential=tangential)


def _projected_crossing(system: CoordinateSystem, t_value: float, y: np.ndarray) -> t.Optional[Terminal]:
    if not isinstance(system, USpaceSystem):
        return None
    u1, v1 = system.u_first(y), system.v_first(y)
    if not (u1 > 0 and v1 < 0):
        return None
    t_proj = t_value + u1 / -v1
    return Terminal(
        TerminalKind.BLOWUP_EVENT,
        t_event=t_proj,
        bracket=(t_value, t_proj),
        event="u1_zero",
        tangential=False,
        projected=True,
    )


def integrate(
    system: CoordinateSystem,
    control: StepControl,
    t_max: float,
    events: t.Sequence[Event] = (),
    *,
    t0: float = 0.0,
    y0: t.Optional[np.ndarray] = None,
) -> Trajectory:
    """Adaptive 5(4) integration from ``t0`` to ``t_max`` or the first terminal event."""
    if not (t_max > t0 and math.isfinite(t_max)):
        raise NonPositiveParameter("t_max - t0", t_max - t0, requirement="positive and finite")
    y = np.array(system.initial_vector() if y0 is None else y0, dtype=float)
    f = system.rhs(t0, y)
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(f))):
        raise NonFiniteState(t0)

    run = _Run(system, control, events)
    run.nfev = 1
    run.record(t0, y, f, None)
    armed = [event_value(ev.fn, t0, y) > 0 for ev in run.events]

    t_value = t0
    h = min(control.h_init, control.h_max, t_max - t0)
    err_old = 1e-4
    last_failure: t.Optional[str] = None
    just_rejected = False
    terminal: t.Optional[Terminal] = None

    while terminal is None:
        if t_value >= t_max:
            terminal = Terminal(TerminalKind.REACHED_TMAX)
            break
        if run.steps >= control.max_steps:
            _logger.warning("step budget of %d exhausted at t=%.17g", control.max_steps, t_value)
            terminal = Terminal(TerminalKind.STEP_SIZE_UNDERFLOW)
            break
        h = min(h, system.max_step(y), control.h_max)
        last_step = h >= t_max - t_value
        if last_step:
            h = t_max - t_value
        if (h < control.h_min and not last_step) or t_value + h == t_value:
            terminal = _projected_crossing(system, t_value, y)
            if terminal is not None:
                _logger.info("step size collapsed near the root; projected crossing at %.17g", terminal.t_event)
                break
            if last_failure == "nonfinite":
                raise NonFiniteState(t_value)
            _logger.warning("step size %.3e below h_min at t=%.17g", h, t_value)
            terminal = Terminal(TerminalKind.STEP_SIZE_UNDERFLOW)
            break

        try:
            y_new, err_vec, K = dopri_step(system.rhs, t_value, y, f, h)
        except (NonPositiveU, NonPositiveDensity):
            run.nfev += 6
            run.rejected += 1
            last_failure = "domain"
            just_rejected = True
            h *= 0.25
            continue
        run.nfev += 6

        scale = control.atol + control.rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(err_vec) / scale))
        if not (math.isfinite(err) and np.all(np.isfinite(y_new))):
            run.rejected += 1
            last_failure = "nonfinite"
            just_rejected = True
            h *= 0.25
            continue

        if err <= 1.0:
            t_new = t_max if last_step else t_value + h
            Q = K.T @ P
            run.steps += 1
            run.record(t_new, y_new, K[6], Q)
            terminal = _first_crossing(run, armed, t_value, y, t_new, y_new, Q)
            t_value, y, f = t_new, y_new, K[6]
            if err == 0.0:
                factor = control.max_factor
            else:
                factor = control.safety * err ** (-control.alpha) * err_old**control.beta
                factor = min(control.max_factor, max(control.min_factor, factor))
            if just_rejected:
                factor = min(factor, 1.0)
            err_old = max(err, 1e-4)
            h *= factor
            last_failure = None
            just_rejected = False
        else:
            run.rejected += 1
            last_failure = "error"
            just_rejected = True
            h *= max(control.min_factor, control.safety * err ** (-control.alpha))

    if terminal.kind is TerminalKind.BLOWUP_EVENT:
        _logger.info("blow-up event %s at t=%.17g", terminal.event, terminal.t_event)
    return run.finish(terminal)
