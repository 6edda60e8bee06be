from __future__ import annotations

import math
import typing as t
from dataclasses import dataclass, field

from rep_lab.core.models import CaseLabel


@dataclass(frozen=True)
class RateFit:
    exponent: float
    coefficient: float
    window_decades: int
    residual: float
    log_growth: bool = False
    slope: float = math.nan
    tail: float = math.nan

    @property
    def C(self) -> float:
        return abs(self.coefficient)

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {
            "exponent": self.exponent,
            "coefficient": self.coefficient,
            "windowDecades": self.window_decades,
            "residual": self.residual,
            "C": self.C,
            "logGrowth": self.log_growth,
            "slope": self.slope,
            "tail": self.tail,
        }


@dataclass(frozen=True)
class PredictedRates:
    case: CaseLabel
    lambda_order: int
    gamma: float
    xi1: t.Optional[float] = None
    xin: t.Optional[float] = None
    rho_exponent: t.Optional[float] = None
    rho_coefficient: t.Optional[float] = None
    log_growth_n: bool = False
    quadratic_roots: t.Optional[t.Tuple[float, float]] = None

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {
            "case": self.case.value,
            "lambdaOrder": self.lambda_order,
            "gamma": self.gamma,
            "xi1": self.xi1,
            "xin": self.xin,
            "rhoExponent": self.rho_exponent,
            "rhoCoefficient": self.rho_coefficient,
            "logGrowthN": self.log_growth_n,
            "quadraticRoots": list(self.quadratic_roots) if self.quadratic_roots else None,
        }


@dataclass(frozen=True)
class BlowupReport:
    tB: float
    tB_bracket: t.Tuple[float, float]
    tangential: bool
    J: int
    p: float
    q: float
    p_raw: float
    q_raw: float
    u1_slope: float
    gamma: float
    R0: t.Optional[float]
    xi1: t.Optional[RateFit]
    xin: t.Optional[RateFit]
    rho_rate: t.Optional[RateFit]
    case_observed: t.Optional[CaseLabel]
    lower_bound: float
    residuals: t.Dict[str, float] = field(default_factory=dict)

    @property
    def tB_width(self) -> float:
        return self.tB_bracket[1] - self.tB_bracket[0]

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {
            "tB": self.tB,
            "tBBracket": list(self.tB_bracket),
            "tBWidth": self.tB_width,
            "tangential": self.tangential,
            "J": self.J,
            "p": self.p,
            "q": self.q,
            "pRaw": self.p_raw,
            "qRaw": self.q_raw,
            "u1_slope": self.u1_slope,
            "gamma": self.gamma,
            "R0": self.R0,
            "xi1": self.xi1.to_dict() if self.xi1 else None,
            "xin": self.xin.to_dict() if self.xin else None,
            "rho_rate": self.rho_rate.to_dict() if self.rho_rate else None,
            "caseObserved": self.case_observed.value if self.case_observed else None,
            "lowerBound": self.lower_bound,
            "residuals": dict(self.residuals),
        }
