"""Run configuration: one JSON document validated before any computation."""

from __future__ import annotations

import json
import math
import typing as t
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from rep_lab.core.errors import ConfigurationError, DimensionMismatch
from rep_lab.core.models import REPParams, SpectralInitialData
from rep_lab.integrate.control import StepControl
from rep_lab.oracle.example import ExampleFamily

Mode = t.Literal["simulate", "blowup", "classify", "verify-example", "sweep", "rates"]
GridValues = t.Union[t.List[float], t.Dict[str, float]]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ParamsSection(_Section):
    n: int
    k: float
    c_b: float

    def build(self) -> REPParams:
        return REPParams(n=self.n, k=self.k, c_b=self.c_b)


class InitSection(_Section):
    rho0: float
    lambda0: t.List[float]

    def build(self) -> SpectralInitialData:
        return SpectralInitialData.from_values(self.rho0, self.lambda0)


class ControlSection(_Section):
    rtol: float = 1e-10
    atol: float = 1e-12
    h_init: float = 1e-4
    h_min: float = 1e-16
    h_max: float = math.inf
    lambda_escape: float = 1e8
    u_zero_eps: float = 1e-12
    u_cap: float = 1e12
    density_cap: float = 1e250
    transversal_tol: float = 1e-9
    max_steps: int = 2_000_000
    dense_output: t.Literal["native", "hermite"] = "native"
    t_max: t.Optional[float] = Field(default=None, gt=0, allow_inf_nan=False)
    reduced: bool = True

    def build(self) -> StepControl:
        return StepControl(**self.model_dump(exclude={"t_max", "reduced"}))


class OutputsSection(_Section):
    dir: str = "out"
    formats: t.List[t.Literal["csv", "json"]] = Field(default_factory=lambda: ["csv", "json"])
    sample_stride: int = Field(default=1, ge=1)
    svg: bool = False


class ExampleSection(_Section):
    k: float = 4.0
    c_b: float = 1.0
    lambda10: float = -1.0
    lambda40: float = 1.0

    def build(self) -> ExampleFamily:
        return ExampleFamily(k=self.k, c_b=self.c_b, lambda10=self.lambda10, lambda40=self.lambda40)


class SweepSection(_Section):
    grid: t.Dict[str, GridValues]
    constraint: t.Optional[t.Literal["A0=k*rho0"]] = None
    workers: int = Field(default=4, ge=1)
    executor: t.Literal["thread", "process"] = "thread"

    @field_validator("grid")
    @classmethod
    def _check_grid(cls, grid: t.Dict[str, GridValues]) -> t.Dict[str, GridValues]:
        for key, values in grid.items():
            if isinstance(values, dict):
                missing = {"start", "stop", "num"} - set(values)
                if missing or set(values) - {"start", "stop", "num"}:
                    raise ValueError(f"grid[{key!r}] needs exactly start, stop and num")
            elif not values:
                raise ValueError(f"grid[{key!r}] is empty")
        return grid


class RunConfig(_Section):
    params: t.Optional[ParamsSection] = None
    init: t.Optional[InitSection] = None
    control: ControlSection = Field(default_factory=ControlSection)
    outputs: OutputsSection = Field(default_factory=OutputsSection)
    mode: t.Optional[Mode] = None
    example: t.Optional[ExampleSection] = None
    sweep: t.Optional[SweepSection] = None

    @model_validator(mode="after")
    def _check_sections(self) -> "RunConfig":
        if self.mode == "verify-example":
            return self
        if self.mode is not None and (self.params is None or self.init is None):
            raise ValueError(f"mode {self.mode!r} needs both 'params' and 'init'")
        return self

    def require_problem(self) -> t.Tuple[REPParams, SpectralInitialData]:
        if self.params is None or self.init is None:
            raise ConfigurationError("config needs both 'params' and 'init'")
        params, init = self.params.build(), self.init.build()
        if init.n != params.n:
            raise DimensionMismatch(params.n, init.n)
        return params, init


def load_config(path: t.Union[str, Path]) -> RunConfig:
    """Parse and validate a config file. Every failure surfaces as ConfigurationError."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError(f"cannot read config {path}: {exc}") from exc
    return parse_config(raw)


def parse_config(raw: t.Any) -> RunConfig:
    try:
        return RunConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigurationError(f"invalid config: {exc}") from exc
