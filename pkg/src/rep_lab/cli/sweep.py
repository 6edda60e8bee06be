"""Grid sweeps: every grid point is classified and, when blow-up is possible, analysed.

Rows run on a bounded worker pool and come back in grid order. A failing row
records its status and message and never stops the sweep.
"""

from __future__ import annotations

import itertools
import logging
import re
import typing as t
from dataclasses import dataclass, field

import anyio
import anyio.to_process
import anyio.to_thread
import numpy as np

from rep_lab.analysis.pipeline import default_t_max, run_blowup
from rep_lab.cli.config import GridValues, RunConfig
from rep_lab.core.classify import classify, gap_product
from rep_lab.core.errors import (
    ConfigurationError,
    NotABlowupTrajectory,
    NumericalError,
    TheoryViolation,
    UnresolvedCase,
)
from rep_lab.core.models import REPParams, SpectralInitialData
from rep_lab.integrate.control import StepControl

_logger = logging.getLogger(__name__)

_LAMBDA_KEY = re.compile(r"^lambda0\[(\d+(?:\s*,\s*\d+)*)\]$")
SCALAR_KEYS = ("k", "c_b", "rho0")

COLUMNS = (
    "index",
    "n",
    "J",
    "rho0",
    "verdict",
    "reason",
    "case",
    "status",
    "tB",
    "tB_width",
    "tangential",
    "case_observed",
    "xi1",
    "xin",
    "rho_exponent",
    "gamma",
    "p",
    "q",
    "message",
)


@dataclass(frozen=True)
class SweepPoint:
    index: int
    values: t.Dict[str, float]
    n: int
    k: float
    c_b: float
    rho0: t.Optional[float]
    lambda0: t.Tuple[float, ...]
    constraint: t.Optional[str]
    control: StepControl
    t_max: t.Optional[float] = None


@dataclass
class SweepRow:
    index: int
    values: t.Dict[str, float]
    status: str = "ok"
    message: str = ""
    fields: t.Dict[str, t.Any] = field(default_factory=dict)

    def cells(self, keys: t.Sequence[str]) -> t.List[t.Any]:
        data = {"status": self.status, "message": self.message, **self.fields}
        return [self.index] + [self.values.get(k) for k in keys] + [data.get(c) for c in COLUMNS[1:]]


def grid_axis(values: GridValues) -> t.List[float]:
    if isinstance(values, dict):
        return [float(v) for v in np.linspace(values["start"], values["stop"], int(values["num"]))]
    return [float(v) for v in values]


def lambda_indices(key: str, n: int) -> t.List[int]:
    match = _LAMBDA_KEY.match(key)
    if match is None:
        raise ConfigurationError(f"unknown sweep key {key!r}")
    indices = [int(part) for part in match.group(1).split(",")]
    for index in indices:
        if not 1 <= index <= n:
            raise ConfigurationError(f"sweep key {key!r}: index {index} outside 1..{n}")
    return [i - 1 for i in indices]


def expand_grid(config: RunConfig) -> t.List[SweepPoint]:
    """Cartesian product of the grid axes in the order they are written."""
    if config.sweep is None or config.params is None or config.init is None:
        raise ConfigurationError("sweep mode needs 'params', 'init' and 'sweep' sections")
    base_lambda = list(config.init.lambda0)
    n = config.params.n
    targets: t.Dict[str, t.Optional[t.List[int]]] = {}
    for key in config.sweep.grid:
        targets[key] = None if key in SCALAR_KEYS else lambda_indices(key, n)
    axes = [grid_axis(v) for v in config.sweep.grid.values()]
    control = config.control.build()

    points = []
    for index, combo in enumerate(itertools.product(*axes)):
        values = dict(zip(config.sweep.grid.keys(), combo))
        scalars = {"k": config.params.k, "c_b": config.params.c_b, "rho0": config.init.rho0}
        lam = list(base_lambda)
        for key, value in values.items():
            if targets[key] is None:
                scalars[key] = value
            else:
                for i in targets[key]:
                    lam[i] = value
        points.append(
            SweepPoint(
                index=index,
                values=values,
                n=n,
                k=scalars["k"],
                c_b=scalars["c_b"],
                rho0=scalars["rho0"],
                lambda0=tuple(lam),
                constraint=config.sweep.constraint,
                control=control,
                t_max=config.control.t_max,
            )
        )
    return points


def _build(point: SweepPoint) -> t.Tuple[REPParams, SpectralInitialData]:
    params = REPParams(n=point.n, k=point.k, c_b=point.c_b)
    rho0 = point.rho0
    if point.constraint == "A0=k*rho0":
        if point.n != 4:
            raise ConfigurationError("constraint A0=k*rho0 needs n=4")
        spectrum = SpectralInitialData.from_values(1.0, point.lambda0)
        rho0 = gap_product(spectrum) / params.k
    return params, SpectralInitialData.from_values(rho0, point.lambda0)


def evaluate_point(point: SweepPoint) -> SweepRow:
    """One grid row; never raises for domain failures."""
    row = SweepRow(point.index, dict(point.values))
    try:
        params, init = _build(point)
    except ConfigurationError as exc:
        row.status, row.message = "config-error", str(exc)
        return row
    verdict = classify(params, init)
    row.fields.update(
        n=params.n,
        J=init.J,
        rho0=init.rho0,
        verdict=verdict.verdict.value,
        reason=verdict.reason.value,
        case=verdict.case_label.value if verdict.case_label else None,
    )
    if not verdict.blowup_possible:
        return row
    t_max = point.t_max if point.t_max is not None else default_t_max(params)
    try:
        analysis = run_blowup(params, init, point.control, t_max)
    except NotABlowupTrajectory as exc:
        row.status, row.message = "no-blowup", str(exc)
        return row
    except ConfigurationError as exc:
        row.status, row.message = "config-error", str(exc)
        return row
    except TheoryViolation as exc:
        row.status, row.message = "theory-violation", str(exc)
        return row
    except (NumericalError, UnresolvedCase) as exc:
        row.status, row.message = "numerical-error", str(exc)
        _logger.warning("sweep row %d failed: %s", point.index, exc)
        return row
    report = analysis.report
    row.fields.update(
        tB=report.tB,
        tB_width=report.tB_width,
        tangential=report.tangential,
        case_observed=report.case_observed.value if report.case_observed else None,
        xi1=report.xi1.coefficient if report.xi1 else None,
        xin=report.xin.coefficient if report.xin else None,
        rho_exponent=report.rho_rate.exponent if report.rho_rate else None,
        gamma=report.gamma,
        p=report.p,
        q=report.q,
    )
    return row


async def run_sweep(config: RunConfig) -> t.List[SweepRow]:
    points = expand_grid(config)
    if config.sweep is None:
        raise ConfigurationError("sweep mode needs a 'sweep' section")
    limiter = anyio.CapacityLimiter(config.sweep.workers)
    rows: t.List[t.Optional[SweepRow]] = [None] * len(points)
    use_processes = config.sweep.executor == "process"
    _logger.info("sweeping %d grid points on %d %s workers", len(points), config.sweep.workers, config.sweep.executor)

    async def work(point: SweepPoint) -> None:
        if use_processes:
            rows[point.index] = await anyio.to_process.run_sync(evaluate_point, point, limiter=limiter)
        else:
            rows[point.index] = await anyio.to_thread.run_sync(evaluate_point, point, limiter=limiter)

    async with anyio.create_task_group() as tg:
        for point in points:
            tg.start_soon(work, point)
    return [row for row in rows if row is not None]


def sweep_table(config: RunConfig, rows: t.Sequence[SweepRow]) -> t.Tuple[t.List[str], t.List[t.List[t.Any]]]:
    keys = list(config.sweep.grid.keys()) if config.sweep else []
    header = ["index"] + keys + list(COLUMNS[1:])
    return header, [row.cells(keys) for row in rows]
