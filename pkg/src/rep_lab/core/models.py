from __future__ import annotations

import enum
import math
import typing as t
from dataclasses import dataclass, field

import numpy as np

from rep_lab.core.errors import ConfigurationError, DimensionMismatch, NonFiniteInput, NonPositiveParameter


class Verdict(str, enum.Enum):
    GLOBAL_BOUNDED = "GlobalBounded"
    BLOWUP_POSSIBLE = "BlowupPossible"


class RuleTag(str, enum.Enum):
    J_EXCEEDS_HALF = "J>n/2"
    J_HALF_AT_LEAST_THREE = "J>=3,J=n/2"
    DEGENERATE = "degenerate"
    SIMPLE_MINIMUM = "J=1"
    DOUBLE_MINIMUM = "J=2,n>=5"
    GAP_ABOVE_DENSITY = "J=2,n=4,A0>k*rho0"
    GAP_ON_DENSITY = "J=2,n=4,A0=k*rho0"
    MULTIPLE_MINIMUM = "J>=3,n>2J"
    UNRESOLVED = "unresolved-by-theory"


class CaseLabel(str, enum.Enum):
    I = "I"  # noqa: E741
    IIA = "IIa"
    IIB = "IIb"
    IIC = "IIc"
    III = "III"

    @property
    def pole_order(self) -> int:
        return 2 if self is CaseLabel.IIC else 1


def _check_finite(name: str, *values: float) -> None:
    if not all(math.isfinite(v) for v in values):
        raise NonFiniteInput(name)


def minimum_multiplicity(values: t.Sequence[float]) -> int:
    if len(values) < 2:
        raise DimensionMismatch(2, len(values))
    lowest = min(values)
    return sum(1 for v in values if v == lowest)


@dataclass(frozen=True)
class REPParams:
    n: int
    k: float
    c_b: float
    omega: float = field(init=False)

    def __post_init__(self) -> None:
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 2:
            raise NonPositiveParameter("n", self.n, requirement="an integer >= 2")
        _check_finite("k", float(self.k))
        _check_finite("c_b", float(self.c_b))
        if self.k <= 0:
            raise NonPositiveParameter("k", self.k)
        if self.c_b <= 0:
            raise NonPositiveParameter("c_b", self.c_b)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k", float(self.k))
        object.__setattr__(self, "c_b", float(self.c_b))
        object.__setattr__(self, "omega", math.sqrt(self.k * self.c_b / self.n))

    @property
    def k_over_n(self) -> float:
        return self.k / self.n

    @property
    def omega2(self) -> float:
        """omega^2 as the product (k/n) c_b that lambda-space uses."""
        return self.k_over_n * self.c_b


@dataclass(frozen=True)
class SpectralInitialData:
    """Initial density and the ascending eigenvalue vector.

    ``J`` is the multiplicity of the smallest eigenvalue, counted with exact
    floating-point equality.
    """

    rho0: float
    lambda0: t.Tuple[float, ...]
    J: int

    def __post_init__(self) -> None:
        values = tuple(float(v) for v in self.lambda0)
        _check_finite("rho0", float(self.rho0))
        _check_finite("lambda0", *values)
        if self.rho0 <= 0:
            raise NonPositiveParameter("rho0", self.rho0)
        if any(b < a for a, b in zip(values, values[1:])):
            raise ConfigurationError("lambda0 must be sorted ascending")
        recomputed = minimum_multiplicity(values)
        if recomputed != self.J:
            raise ConfigurationError(f"stored J={self.J} does not match lambda0 (J={recomputed})")
        object.__setattr__(self, "rho0", float(self.rho0))
        object.__setattr__(self, "lambda0", values)

    @classmethod
    def from_values(cls, rho0: float, lambda0: t.Iterable[float]) -> "SpectralInitialData":
        values = [float(v) for v in lambda0]
        _check_finite("lambda0", *values)
        values.sort()
        return cls(rho0=float(rho0), lambda0=tuple(values), J=minimum_multiplicity(values))

    @property
    def n(self) -> int:
        return len(self.lambda0)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.lambda0, dtype=float)

    @property
    def spread(self) -> float:
        return self.lambda0[-1] - self.lambda0[0]


@dataclass(frozen=True)
class Classification:
    verdict: Verdict
    reason: RuleTag
    case_label: t.Optional[CaseLabel] = None
    A0: t.Optional[float] = None

    @property
    def blowup_possible(self) -> bool:
        return self.verdict is Verdict.BLOWUP_POSSIBLE

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {
            "verdict": self.verdict.value,
            "reason": self.reason.value,
            "caseLabel": self.case_label.value if self.case_label else None,
            "A0": self.A0,
        }
