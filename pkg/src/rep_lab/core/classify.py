from __future__ import annotations

import logging
import math
import typing as t

import numpy as np

from rep_lab.core.errors import DimensionMismatch, NonFiniteInput
from rep_lab.core.models import (
    CaseLabel,
    Classification,
    REPParams,
    RuleTag,
    SpectralInitialData,
    Verdict,
    minimum_multiplicity,
)

_logger = logging.getLogger(__name__)

# A0 == k*rho0 is tested up to a few ulps so that rho0 derived as A0/k lands on the surface.
_SURFACE_RTOL = 1e-12

ParamsLike = t.Union[REPParams, t.Mapping[str, t.Any]]
InitLike = t.Union[SpectralInitialData, t.Mapping[str, t.Any]]


def compute_J(lambda0: t.Sequence[float]) -> int:
    values = np.asarray(lambda0, dtype=float)
    if values.ndim != 1:
        raise DimensionMismatch(1, values.ndim)
    if not np.all(np.isfinite(values)):
        raise NonFiniteInput("lambda0")
    return minimum_multiplicity(values.tolist())


def validate(params: ParamsLike, init: InitLike) -> t.Tuple[REPParams, SpectralInitialData]:
    """Normalize raw inputs into validated value objects.

    Sorts ``lambda0``, recomputes ``J`` and derives ``omega``. A ``J`` supplied
    with a mapping must agree with the recomputed one.
    """
    if not isinstance(params, REPParams):
        params = REPParams(n=params["n"], k=params["k"], c_b=params["c_b"])
    if not isinstance(init, SpectralInitialData):
        data = SpectralInitialData.from_values(init["rho0"], init["lambda0"])
        if init.get("J") is not None and int(init["J"]) != data.J:
            # re-run the constructor so the mismatch surfaces with its usual error
            SpectralInitialData(rho0=data.rho0, lambda0=data.lambda0, J=int(init["J"]))
        init = data
    if init.n != params.n:
        raise DimensionMismatch(params.n, init.n)
    return params, init


def gap_product(init: SpectralInitialData) -> float:
    lam = init.lambda0
    return (lam[0] - lam[2]) * (lam[0] - lam[3])


def classify(params: REPParams, init: SpectralInitialData) -> Classification:
    n, J = params.n, init.J
    a0 = gap_product(init) if n == 4 else None

    if J == n:
        result = Classification(Verdict.GLOBAL_BOUNDED, RuleTag.DEGENERATE, A0=a0)
    elif 2 * J > n:
        result = Classification(Verdict.GLOBAL_BOUNDED, RuleTag.J_EXCEEDS_HALF, A0=a0)
    elif J >= 3 and 2 * J == n:
        result = Classification(Verdict.GLOBAL_BOUNDED, RuleTag.J_HALF_AT_LEAST_THREE, A0=a0)
    elif J == 1:
        result = Classification(Verdict.BLOWUP_POSSIBLE, RuleTag.SIMPLE_MINIMUM, CaseLabel.I, A0=a0)
    elif J == 2 and n >= 5:
        result = Classification(Verdict.BLOWUP_POSSIBLE, RuleTag.DOUBLE_MINIMUM, CaseLabel.IIA)
    elif J == 2:
        k_rho0 = params.k * init.rho0
        if math.isclose(a0, k_rho0, rel_tol=_SURFACE_RTOL, abs_tol=0.0):
            result = Classification(Verdict.BLOWUP_POSSIBLE, RuleTag.GAP_ON_DENSITY, CaseLabel.IIC, A0=a0)
        elif a0 > k_rho0:
            result = Classification(Verdict.BLOWUP_POSSIBLE, RuleTag.GAP_ABOVE_DENSITY, CaseLabel.IIB, A0=a0)
        else:
            result = Classification(Verdict.BLOWUP_POSSIBLE, RuleTag.UNRESOLVED, None, A0=a0)
    else:
        result = Classification(Verdict.BLOWUP_POSSIBLE, RuleTag.MULTIPLE_MINIMUM, CaseLabel.III)

    _logger.debug("classified n=%d J=%d as %s (%s)", n, J, result.verdict.value, result.reason.value)
    return result
