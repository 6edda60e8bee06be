"""Closed-form solutions on the A0 = k*rho0 surface with lambda_10 = lambda_20, lambda_30 = lambda_40.

With s = (lambda_10 + lambda_40)/(2 omega), phi = arctan(s), theta = omega t - phi and
P = p/(s^2 + 1):

    lambda_1 = -P sec^2(theta) - omega tan(theta)
    lambda_4 = +P sec^2(theta) - omega tan(theta)
    rho      = rho0 sec^4(theta) / (s^2 + 1)^2
    u_1 u_4  = (s^2 + 1) cos^2(theta)

and the solution ceases to exist at theta = pi/2.
"""

from __future__ import annotations

import math
import typing as t
from dataclasses import dataclass, field

from rep_lab.core.errors import ConfigurationError, OutOfDomain
from rep_lab.core.models import REPParams, SpectralInitialData
from rep_lab.dynamics.states import LambdaState


class ExampleValues(t.NamedTuple):
    lambda1: float
    lambda3: float
    lambda4: float
    rho: float
    u1u4: float


@dataclass(frozen=True)
class ExampleFamily:
    k: float
    c_b: float
    lambda10: float
    lambda40: float
    params: REPParams = field(init=False, repr=False)
    init: SpectralInitialData = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if not self.lambda10 < self.lambda40:
            raise ConfigurationError("the family needs lambda10 < lambda40")
        params = REPParams(n=4, k=self.k, c_b=self.c_b)
        rho0 = (self.lambda40 - self.lambda10) ** 2 / params.k
        init = SpectralInitialData.from_values(rho0, (self.lambda10, self.lambda10, self.lambda40, self.lambda40))
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "init", init)

    @property
    def omega(self) -> float:
        return self.params.omega

    @property
    def rho0(self) -> float:
        return self.init.rho0

    @property
    def p(self) -> float:
        return 0.5 * (self.lambda40 - self.lambda10)

    @property
    def s(self) -> float:
        return (self.lambda10 + self.lambda40) / (2.0 * self.omega)

    @property
    def phi(self) -> float:
        return math.atan(self.s)

    @property
    def amplitude(self) -> float:
        return self.p / (self.s**2 + 1.0)

    @property
    def pole_coefficient(self) -> float:
        """C with (t_B - t)^2 lambda_1 -> -C and (t_B - t)^2 lambda_4 -> +C."""
        return self.amplitude / self.omega**2

    @property
    def density_coefficient(self) -> float:
        """Limit of (t_B - t)^4 rho, equal to 4 C^2 / k."""
        return self.rho0 / ((self.s**2 + 1.0) ** 2 * self.omega**4)

    def theta(self, t_value: float) -> float:
        if not 0.0 <= t_value < example_tB(self):
            raise OutOfDomain(t_value, example_tB(self))
        return self.omega * t_value - self.phi

    def u_pair(self, t_value: float) -> t.Tuple[float, float]:
        """u_1 and u_4 individually, from integrating lambda_1 and lambda_4 in closed form."""
        theta = self.theta(t_value)
        base = math.sqrt(self.s**2 + 1.0) * math.cos(theta)
        drift = self.amplitude / self.omega * (math.tan(theta) + self.s)
        return base * math.exp(-drift), base * math.exp(drift)

    def state(self, t_value: float) -> LambdaState:
        values = example_eval(self, t_value)
        lam = (values.lambda1, values.lambda1, values.lambda4, values.lambda4)
        return LambdaState(t=t_value, lam=lam, rho=values.rho)


def example_tB(family: ExampleFamily) -> float:
    return (0.5 * math.pi + family.phi) / family.omega


def example_eval(family: ExampleFamily, t_value: float) -> ExampleValues:
    theta = family.theta(t_value)
    sec2 = 1.0 / math.cos(theta) ** 2
    tan = math.tan(theta)
    scale = family.s**2 + 1.0
    lambda1 = -family.amplitude * sec2 - family.omega * tan
    lambda4 = family.amplitude * sec2 - family.omega * tan
    rho = family.rho0 * sec2**2 / scale**2
    return ExampleValues(lambda1, lambda4, lambda4, rho, scale * math.cos(theta) ** 2)
