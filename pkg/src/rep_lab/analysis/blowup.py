"""Blow-up time and boundary data (p, q, u_1 slope) extracted from trajectories."""

from __future__ import annotations

import logging
import typing as t
from dataclasses import dataclass

import numpy as np

from rep_lab.analysis.rates import Ladder, LadderSpec, ladder, richardson
from rep_lab.core.errors import NotABlowupTrajectory
from rep_lab.core.models import REPParams, SpectralInitialData
from rep_lab.dynamics.base import CoordinateSystem
from rep_lab.dynamics.systems import LambdaSystem, LogPairSystem, USpaceSystem, u_system
from rep_lab.integrate.control import StepControl
from rep_lab.integrate.dopri import integrate
from rep_lab.integrate.events import density_overflow, lambda_escape, pole_reach, u1_zero, u_cap
from rep_lab.integrate.trajectory import Trajectory

_logger = logging.getLogger(__name__)

# the log-pair run stops this close to t_B, relative to max(1, t)
POLE_REACH = 1e-7


class PoleProjection(t.NamedTuple):
    tB: float
    bracket: t.Tuple[float, float]
    order: int


class PQEstimate(t.NamedTuple):
    p: float
    q: float
    p_raw: float
    q_raw: float


def project_pole(traj: Trajectory) -> PoleProjection:
    """t_B from the last log-pair sample: (ln u_1 u_n)' ~ -m / (t_B - t) with m the pole order.

    The bracket is the spread between the projections from the last two samples.
    """
    system = traj.system
    if not isinstance(system, LogPairSystem):
        raise TypeError("project_pole needs a log-pair trajectory")
    t_end, y_end = traj.t_end, traj.y_end
    if not y_end[1] < 0:
        raise NotABlowupTrajectory(traj.terminal.kind.value)
    order = system.pole_order(t_end, y_end)
    tB = t_end + order / -float(y_end[1])
    previous = tB
    if len(traj) > 1 and traj.ys[-2][1] < 0:
        previous = float(traj.ts[-2]) + order / -float(traj.ys[-2][1])
    half = abs(tB - previous)
    bracket = (max(t_end, tB - half), tB + half)
    _logger.debug("pole of order %d projected to t_B=%.17g +- %.3e", order, tB, half)
    return PoleProjection(tB, bracket, order)


def find_blowup_time(traj: Trajectory) -> t.Tuple[float, t.Tuple[float, float]]:
    """t_B and an enclosing bracket.

    A transversal root of u_1 is projected linearly from the refined bracket;
    a log-pair run is projected from the pole of (ln u_1 u_n)'.
    """
    terminal = traj.terminal
    if not terminal.is_blowup:
        raise NotABlowupTrajectory(terminal.kind.value)
    system = traj.system
    if isinstance(system, LogPairSystem):
        projection = project_pole(traj)
        return projection.tB, projection.bracket
    if not isinstance(system, USpaceSystem) or terminal.tangential:
        raise TypeError("t_B needs a transversal u-space run or a log-pair run")
    lo, hi = terminal.bracket
    if terminal.projected:
        return float(terminal.t_event), (float(lo), float(hi))
    y_lo = traj(lo)
    u1, v1 = system.u_first(y_lo), system.v_first(y_lo)
    tB = lo + u1 / -v1
    return tB, (float(lo), max(float(hi), tB))


def u1_slope(traj: Trajectory) -> float:
    """v_1 at the last u-space sample before t_B."""
    system = traj.system
    if not isinstance(system, USpaceSystem):
        raise TypeError("u1_slope needs a u-space trajectory")
    lo = traj.terminal.bracket[0] if traj.terminal.bracket else traj.t_end
    return system.v_first(traj(min(lo, traj.t_end)))


def _pq_series(rungs: Ladder, system: CoordinateSystem, init: SpectralInitialData) -> t.Tuple[np.ndarray, np.ndarray]:
    if isinstance(system, USpaceSystem):
        p = np.empty(len(rungs))
        q = np.empty(len(rungs))
        for i, y in enumerate(rungs.ys):
            u, v = system.group_uv(y)
            p[i] = -v[0] * u[-1]
            q[i] = u[0] * v[-1]
        return p, q
    if isinstance(system, LogPairSystem):
        pairs = np.array([system.boundary_products(y) for y in rungs.ys])
        return pairs[:, 0], pairs[:, 1]
    # from u_1 u_n = spread / (lambda_n - lambda_1)
    lam1, lamn = rungs.lambdas[:, 0], rungs.lambdas[:, -1]
    gap = lamn - lam1
    return init.spread * -lam1 / gap, init.spread * lamn / gap


def estimate_pq(
    traj: Trajectory,
    init: SpectralInitialData,
    tB: float,
    spec: LadderSpec = LadderSpec(),
) -> PQEstimate:
    """Limits p = -lim v_1 u_n and q = lim u_1 v_n by Richardson extrapolation over the ladder."""
    rungs = ladder(traj, tB, spec)
    p, q = _pq_series(rungs, traj.system, init)
    return PQEstimate(richardson(p), richardson(q), float(p[-1]), float(q[-1]))


@dataclass(frozen=True)
class BlowupDetection:
    t_blowup: t.Optional[float]
    bracket: t.Optional[t.Tuple[float, float]]
    tangential: bool
    u_traj: Trajectory
    lam_traj: Trajectory
    # log-pair run, present whenever t_B came from it
    pair_traj: t.Optional[Trajectory] = None

    @property
    def detected(self) -> bool:
        return self.t_blowup is not None


def u_space_events(system: USpaceSystem, control: StepControl) -> t.List[t.Any]:
    return [
        u1_zero(system, control.u_zero_eps, control.transversal_tol),
        u_cap(system, control.u_cap),
        density_overflow(system, control.density_cap),
    ]


def lambda_space_events(system: LambdaSystem, control: StepControl) -> t.List[t.Any]:
    return [lambda_escape(system, control.lambda_escape), density_overflow(system, control.density_cap)]


def pair_events(system: LogPairSystem, control: StepControl) -> t.List[t.Any]:
    return [pole_reach(system, POLE_REACH), density_overflow(system, control.density_cap)]


def detect_blowup(
    params: REPParams,
    init: SpectralInitialData,
    control: StepControl,
    t_max: float,
    *,
    reduced: bool = True,
) -> BlowupDetection:
    """Run u-space and lambda-space side by side and decide whether, and when, the solution blows up.

    A transversal u_1 root settles t_B on its own. When either run stops on
    anything else, the log-pair run decides: it blows up before t_max or the
    data is reported as not blowing up.
    """
    usys = u_system(params, init, reduced=reduced)
    u_traj = integrate(usys, control, t_max, u_space_events(usys, control))
    lsys = LambdaSystem(params, init)
    lam_traj = integrate(lsys, control, t_max, lambda_space_events(lsys, control))

    if u_traj.terminal.is_blowup and not u_traj.terminal.tangential:
        tB, bracket = find_blowup_time(u_traj)
        return BlowupDetection(tB, bracket, False, u_traj, lam_traj)
    if (u_traj.terminal.is_blowup or lam_traj.terminal.is_blowup) and init.spread > 0:
        psys = LogPairSystem(params, init)
        pair_traj = integrate(psys, control, t_max, pair_events(psys, control))
        if pair_traj.terminal.is_blowup:
            tB, bracket = find_blowup_time(pair_traj)
            return BlowupDetection(tB, bracket, True, u_traj, lam_traj, pair_traj)
        _logger.info("escape not confirmed in log-pair form (%s)", pair_traj.terminal.kind.value)
    _logger.info(
        "no blow-up before t_max=%g (u-space: %s, lambda-space: %s)",
        t_max,
        u_traj.terminal.kind.value,
        lam_traj.terminal.kind.value,
    )
    return BlowupDetection(None, None, False, u_traj, lam_traj)


def rate_trajectory(
    params: REPParams,
    init: SpectralInitialData,
    control: StepControl,
    tB: float,
    spec: LadderSpec = LadderSpec(),
    reuse: t.Optional[Trajectory] = None,
    *,
    tangential: bool = False,
) -> Trajectory:
    """Run reaching half a ladder floor short of t_B: log-pair form when tangential, lambda-space otherwise."""
    t_stop = tB - 0.5 * spec.floor(tB)
    kind = LogPairSystem if tangential else LambdaSystem
    if reuse is not None and isinstance(reuse.system, kind) and reuse.t_end >= t_stop:
        return reuse
    system = kind(params, init)
    return integrate(system, control, t_stop, [density_overflow(system, control.density_cap)])
