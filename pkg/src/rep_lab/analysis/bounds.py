from __future__ import annotations

import math

from rep_lab.core.models import REPParams


def lower_bound_tB(params: REPParams, lambda10: float) -> float:
    """No solution starting from lambda_10 can cease to exist before this time."""
    omega = params.omega
    return math.atan(lambda10 / omega) / omega + 0.5 * math.pi / omega
