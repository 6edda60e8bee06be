from __future__ import annotations

import math
from dataclasses import dataclass

from rep_lab.core.errors import NonPositiveParameter


@dataclass(frozen=True)
class StepControl:
    rtol: float = 1e-10
    atol: float = 1e-12
    h_init: float = 1e-4
    h_min: float = 1e-16
    h_max: float = math.inf
    lambda_escape: float = 1e8
    u_zero_eps: float = 1e-12
    u_cap: float = 1e12
    density_cap: float = 1e250
    # a u_1 crossing is transversal when u_1/|v_1| there is below this, scaled by max(1, t)
    transversal_tol: float = 1e-9
    bracket_rtol: float = 1e-12
    max_steps: int = 2_000_000
    # proportional-integral controller for the 5(4) pair
    safety: float = 0.9
    beta: float = 0.04
    min_factor: float = 0.2
    max_factor: float = 10.0
    dense_output: str = "native"

    def __post_init__(self) -> None:
        for name in ("rtol", "atol", "h_init", "h_min", "lambda_escape", "u_zero_eps", "u_cap", "density_cap"):
            value = getattr(self, name)
            if not value > 0:
                raise NonPositiveParameter(name, value)
        if not self.h_min <= self.h_max:
            raise NonPositiveParameter("h_max - h_min", self.h_max - self.h_min, requirement="non-negative")
        if self.dense_output not in ("native", "hermite"):
            raise NonPositiveParameter("dense_output", self.dense_output, requirement="'native' or 'hermite'")

    @property
    def alpha(self) -> float:
        return 0.2 - 0.75 * self.beta

    def bracket_width(self, t: float) -> float:
        return self.bracket_rtol * max(1.0, abs(t))
