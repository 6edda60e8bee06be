"""Right-hand sides of the spectral system in its three coordinate systems.

lambda-space: lambda_i' = -lambda_i^2 + (k/n)(rho - c_b), rho' = -rho * sum(lambda).
u-space:      u_i = exp(int lambda_i), u_i'' + omega^2 u_i = (k/n) rho u_i, rho = rho0 / prod(u).
matrix form:  M' = -M^2 + (k/n)(rho - c_b) I, rho' = -rho * tr(M).
"""

from __future__ import annotations

import typing as t

import numpy as np

from rep_lab.core.errors import DegenerateSpectrum, NonPositiveDensity, NonPositiveU
from rep_lab.core.models import REPParams, SpectralInitialData
from rep_lab.dynamics.states import LambdaRates, LambdaState, MatrixRates, MatrixState, Reduction, URates, UState


def lambda_rhs(state: LambdaState, params: REPParams) -> LambdaRates:
    if not state.rho > 0:
        raise NonPositiveDensity(state.rho)
    lam = state.lam
    dlam = -lam * lam + params.k_over_n * (state.rho - params.c_b)
    return LambdaRates(dlam=dlam, drho=-state.rho * float(np.sum(lam)))


def rho_from_u(u: t.Sequence[float], rho0: float, multiplicity: t.Optional[np.ndarray] = None) -> float:
    """Density recovered from the u-variables, ``rho0 / prod(u_i)``.

    ``multiplicity`` lets grouped callers pass one u per distinct eigenvalue.
    """
    values = np.asarray(u, dtype=float)
    bad = np.flatnonzero(~(values > 0))
    if bad.size:
        idx = int(bad[0])
        raise NonPositiveU(idx, float(values[idx]))
    if multiplicity is not None:
        values = values**multiplicity
    return rho0 / float(np.prod(values))


def u_rhs(state: UState, params: REPParams, rho0: float) -> URates:
    rho = rho_from_u(state.u, rho0)
    dv = (params.k_over_n * rho - params.omega2) * state.u
    return URates(du=np.array(state.v, dtype=float), dv=dv)


def abel_residual(state: UState, init: SpectralInitialData) -> np.ndarray:
    """r_ij = (v_i u_j - u_i v_j) - (lambda_i0 - lambda_j0); antisymmetric."""
    u, v = state.u, state.v
    lam0 = init.array
    pairing = np.outer(v, u) - np.outer(u, v)
    return pairing - (lam0[:, None] - lam0[None, :])


def reduce_to_two(init: SpectralInitialData) -> Reduction:
    lam0 = init.array
    spread = lam0[-1] - lam0[0]
    if spread == 0:
        raise DegenerateSpectrum()
    a = (lam0[-1] - lam0) / spread
    b = (lam0 - lam0[0]) / spread
    # endpoints are exact so the reduced system reproduces u_1 and u_n bitwise
    a[0], b[0], a[-1], b[-1] = 1.0, 0.0, 0.0, 1.0
    return Reduction(a=a, b=b)


def matrix_rhs(state: MatrixState, params: REPParams) -> MatrixRates:
    if not state.rho > 0:
        raise NonPositiveDensity(state.rho)
    M = state.M
    dM = -M @ M + params.k_over_n * (state.rho - params.c_b) * np.eye(M.shape[0])
    return MatrixRates(dM=dM, drho=-state.rho * float(np.trace(M)))
