from __future__ import annotations

import logging
import math
import typing as t
from abc import abstractmethod

import numpy as np

from rep_lab.core.errors import DegenerateSpectrum, DimensionMismatch, NonPositiveDensity, NonPositiveU
from rep_lab.core.models import REPParams, SpectralInitialData
from rep_lab.dynamics.base import Coordinates, CoordinateSystem
from rep_lab.dynamics.rhs import rho_from_u
from rep_lab.dynamics.states import LambdaState, MatrixState, UState

_logger = logging.getLogger(__name__)

# below this u_1 the step is capped so one step cannot jump over the root
NEAR_ZERO_U = 1e-6
# share of the distance to a pole of ln(u_1 u_n)' one step may cover
POLE_STEP_SHARE = 0.1


def group_levels(init: SpectralInitialData) -> t.Tuple[np.ndarray, np.ndarray]:
    """Distinct eigenvalues (ascending) and their multiplicities, by exact equality."""
    levels, counts = np.unique(init.array, return_counts=True)
    return levels, counts.astype(float)


def lambda_from_u(state: UState) -> np.ndarray:
    if np.any(state.u <= 0):
        idx = int(np.flatnonzero(state.u <= 0)[0])
        raise NonPositiveU(idx, float(state.u[idx]))
    return state.v / state.u


class LambdaSystem(CoordinateSystem):
    """Grouped lambda-space: one variable per distinct eigenvalue plus rho."""

    coords = Coordinates.LAMBDA

    def __init__(self, params: REPParams, init: SpectralInitialData) -> None:
        self.params = params
        self.init = init
        self.levels, self.multiplicity = group_levels(init)
        self._counts = self.multiplicity.astype(int)
        self._kn = params.k_over_n
        self._cb = params.c_b

    @property
    def n(self) -> int:
        return self.params.n

    def initial_vector(self) -> np.ndarray:
        return np.append(self.levels, self.init.rho0)

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        mu, rho = y[:-1], y[-1]
        if not rho > 0:
            raise NonPositiveDensity(float(rho))
        out = np.empty_like(y)
        out[:-1] = -mu * mu + self._kn * (rho - self._cb)
        out[-1] = -rho * float(np.dot(self.multiplicity, mu))
        return out

    def lambdas(self, y: np.ndarray) -> np.ndarray:
        return np.repeat(y[:-1], self._counts)

    def density(self, y: np.ndarray) -> float:
        return float(y[-1])

    def escape_magnitude(self, y: np.ndarray) -> float:
        return float(np.max(np.abs(y[:-1])))

    def state(self, t: float, y: np.ndarray) -> LambdaState:
        return LambdaState(t=t, lam=self.lambdas(y), rho=self.density(y))

    def u_from_integral(self, integral: np.ndarray) -> np.ndarray:
        """u_i = exp(int_0^t lambda_i) from the running integral of the state vector."""
        return np.repeat(np.exp(integral[:-1]), self._counts)


class USpaceSystem(CoordinateSystem):
    coords = Coordinates.U

    def __init__(self, params: REPParams, init: SpectralInitialData) -> None:
        self.params = params
        self.init = init
        self.levels, self.multiplicity = group_levels(init)
        self._counts = self.multiplicity.astype(int)
        self._omega2 = params.omega2
        self._kn = params.k_over_n
        self._rho0 = init.rho0

    @property
    def n(self) -> int:
        return self.params.n

    @abstractmethod
    def group_uv(self, y: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:  # pragma: no cover - interface
        raise NotImplementedError

    def density(self, y: np.ndarray) -> float:
        u, _ = self.group_uv(y)
        return rho_from_u(u, self._rho0, self.multiplicity)

    def lambdas(self, y: np.ndarray) -> np.ndarray:
        u, v = self.group_uv(y)
        if np.any(u <= 0):
            idx = int(np.flatnonzero(u <= 0)[0])
            raise NonPositiveU(idx, float(u[idx]))
        return np.repeat(v / u, self._counts)

    def u(self, y: np.ndarray) -> np.ndarray:
        return np.repeat(self.group_uv(y)[0], self._counts)

    def v(self, y: np.ndarray) -> np.ndarray:
        return np.repeat(self.group_uv(y)[1], self._counts)

    def u_first(self, y: np.ndarray) -> float:
        return float(self.group_uv(y)[0][0])

    def v_first(self, y: np.ndarray) -> float:
        return float(self.group_uv(y)[1][0])

    def u_last(self, y: np.ndarray) -> float:
        return float(self.group_uv(y)[0][-1])

    def v_last(self, y: np.ndarray) -> float:
        return float(self.group_uv(y)[1][-1])

    def state(self, t: float, y: np.ndarray) -> UState:
        return UState(t=t, u=self.u(y), v=self.v(y))

    def max_step(self, y: np.ndarray) -> float:
        u1, v1 = self.u_first(y), self.v_first(y)
        if u1 < NEAR_ZERO_U and v1 < 0:
            return 0.1 * u1 / -v1
        return math.inf

    def residual(self, y: np.ndarray) -> float:
        """Abel residual relative to the largest product |v_i u_j| it is formed from."""
        u, v = self.group_uv(y)
        products = np.outer(v, u)
        pairing = products - products.T
        target = self.levels[:, None] - self.levels[None, :]
        scale = max(1.0, float(np.max(np.abs(products))))
        return float(np.max(np.abs(pairing - target))) / scale


class USystem(USpaceSystem):
    """Grouped full u-space: (u_g, v_g) for every distinct eigenvalue."""

    def __init__(self, params: REPParams, init: SpectralInitialData) -> None:
        super().__init__(params, init)
        self._groups = self.levels.size

    def initial_vector(self) -> np.ndarray:
        return np.concatenate([np.ones(self._groups), self.levels])

    def group_uv(self, y: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:
        return y[: self._groups], y[self._groups :]

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        u, v = self.group_uv(y)
        rho = rho_from_u(u, self._rho0, self.multiplicity)
        return np.concatenate([v, (self._kn * rho - self._omega2) * u])


class ReducedUSystem(USpaceSystem):
    """Evolves only (u_1, v_1, u_n, v_n); the other u_j are fixed linear combinations."""

    def __init__(self, params: REPParams, init: SpectralInitialData) -> None:
        super().__init__(params, init)
        if self.levels.size < 2:
            raise DegenerateSpectrum()
        spread = self.levels[-1] - self.levels[0]
        self._a = (self.levels[-1] - self.levels) / spread
        self._b = (self.levels - self.levels[0]) / spread
        self._a[0], self._b[0], self._a[-1], self._b[-1] = 1.0, 0.0, 0.0, 1.0

    def initial_vector(self) -> np.ndarray:
        return np.array([1.0, self.levels[0], 1.0, self.levels[-1]])

    def group_uv(self, y: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:
        u = self._a * y[0] + self._b * y[2]
        v = self._a * y[1] + self._b * y[3]
        return u, v

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        u, _ = self.group_uv(y)
        rho = rho_from_u(u, self._rho0, self.multiplicity)
        gain = self._kn * rho - self._omega2
        return np.array([y[1], gain * y[0], y[3], gain * y[2]])


class LogPairSystem(CoordinateSystem):
    """u-space carried by the extreme pair in log form.

    State is y = (l, s, z) with l = ln(u_1 u_n), s = l' = lambda_1 + lambda_n and
    z = ln(u_1 / u_n). The Wronskian u_1 v_n - v_1 u_n stays equal to the initial
    spread S, which gives lambda_n - lambda_1 = S / (u_1 u_n) and closes the system:

        l' = s,   s' = 2 (k/n) rho - 2 omega^2 - s^2 / 2 - S^2 / (2 (u_1 u_n)^2),   z' = -S / (u_1 u_n).

    Every other u_j is a u_j = a_j u_1 + b_j u_n with fixed weights. Near a blow-up
    u_1 u_n vanishes like (t_B - t)^m with m = 1, or m = 2 on the critical surface,
    while u_1 alone may be exponentially flat; the log form keeps full relative
    precision in both.
    """

    coords = Coordinates.U

    def __init__(self, params: REPParams, init: SpectralInitialData) -> None:
        self.params = params
        self.init = init
        self.levels, self.multiplicity = group_levels(init)
        if self.levels.size < 2:
            raise DegenerateSpectrum()
        self._counts = self.multiplicity.astype(int)
        self._spread = float(self.levels[-1] - self.levels[0])
        a = (self.levels[-1] - self.levels) / self._spread
        b = (self.levels - self.levels[0]) / self._spread
        a[0], b[0], a[-1], b[-1] = 1.0, 0.0, 0.0, 1.0
        with np.errstate(divide="ignore"):
            self._log_a = np.log(a)
            self._log_b = np.log(b)
        self._mid_counts = self.multiplicity[1:-1]
        self._mid_log_b = self._log_b[1:-1]
        self._mid_ratio = a[1:-1] / b[1:-1]
        n, first = float(params.n), float(self.multiplicity[0])
        # ln(rho (u_1 u_n)^2 / rho0) = l_power l + z_power z - middle terms, exponents exact
        self._l_power = 2.0 - 0.5 * n
        self._z_power = 0.5 * (n - 2.0 * first)
        self._rho0 = init.rho0
        self._kn2 = 2.0 * params.k_over_n
        self._omega2 = params.omega2

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def spread(self) -> float:
        return self._spread

    def initial_vector(self) -> np.ndarray:
        return np.array([0.0, self.levels[0] + self.levels[-1], 0.0])

    def _log_scaled_density(self, y: np.ndarray) -> float:
        """ln(rho (u_1 u_n)^2 / rho0)."""
        ell, _, zeta = y
        tail = np.log1p(self._mid_ratio * np.exp(min(zeta, 0.0)))
        middle = float(np.dot(self._mid_counts, self._mid_log_b + tail))
        return self._l_power * ell + self._z_power * zeta - middle

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        ell, sig, _ = y
        with np.errstate(over="ignore", invalid="ignore"):
            inv_w = float(np.exp(-ell))
            scaled = self._rho0 * float(np.exp(self._log_scaled_density(y)))
            singular = (self._kn2 * scaled - 0.5 * self._spread**2) * inv_w * inv_w
        dsig = singular - 0.5 * sig * sig - 2.0 * self._omega2
        return np.array([sig, dsig, -self._spread * inv_w])

    def end_lambdas(self, y: np.ndarray) -> t.Tuple[float, float]:
        with np.errstate(over="ignore"):
            gap = self._spread * float(np.exp(-y[0]))
        return 0.5 * (y[1] - gap), 0.5 * (y[1] + gap)

    def lambdas(self, y: np.ndarray) -> np.ndarray:
        lam1, lamn = self.end_lambdas(y)
        half = 0.5 * y[2]
        s1 = self._log_a + half
        sn = self._log_b - half
        total = np.logaddexp(s1, sn)
        grouped = np.exp(s1 - total) * lam1 + np.exp(sn - total) * lamn
        return np.repeat(grouped, self._counts)

    def density(self, y: np.ndarray) -> float:
        with np.errstate(over="ignore"):
            return self._rho0 * float(np.exp(self._log_scaled_density(y) - 2.0 * y[0]))

    def boundary_products(self, y: np.ndarray) -> t.Tuple[float, float]:
        """(-v_1 u_n, u_1 v_n); their limits at t_B are p and q."""
        slope = float(np.exp(y[0])) * y[1]
        return 0.5 * (self._spread - slope), 0.5 * (self._spread + slope)

    def pole_distance(self, y: np.ndarray) -> float:
        """Upper bound on t_B - t from s ~ -m / (t_B - t) with m <= 2; inf while s >= 0."""
        return 2.0 / -y[1] if y[1] < 0 else math.inf

    def pole_order(self, t: float, y: np.ndarray) -> int:
        """m from s^2 / s', which tends to -m at a pole of order m in s."""
        dsig = self.rhs(t, y)[1]
        if not (dsig < 0 and y[1] < 0):
            return 1
        return 2 if -y[1] ** 2 / dsig > 1.5 else 1

    def max_step(self, y: np.ndarray) -> float:
        if y[1] < 0:
            return POLE_STEP_SHARE / -y[1]
        return math.inf

    def state(self, t: float, y: np.ndarray) -> LambdaState:
        return LambdaState(t=t, lam=self.lambdas(y), rho=self.density(y))


class MatrixSystem(CoordinateSystem):
    """Matrix form seeded by similarity from diag(lambda0)."""

    coords = Coordinates.MATRIX

    def __init__(
        self,
        params: REPParams,
        init: SpectralInitialData,
        similarity: t.Optional[np.ndarray] = None,
    ) -> None:
        self.params = params
        self.init = init
        size = params.n
        S = np.eye(size) if similarity is None else np.asarray(similarity, dtype=float)
        if S.shape != (size, size):
            raise DimensionMismatch(size * size, S.size)
        self.M0 = S @ np.diag(init.array) @ np.linalg.inv(S)
        self._eye = np.eye(size)
        self._kn = params.k_over_n
        self._cb = params.c_b

    @property
    def n(self) -> int:
        return self.params.n

    def initial_vector(self) -> np.ndarray:
        return np.append(self.M0.ravel(), self.init.rho0)

    def matrix(self, y: np.ndarray) -> np.ndarray:
        return y[:-1].reshape(self.n, self.n)

    def rhs(self, t: float, y: np.ndarray) -> np.ndarray:
        M, rho = self.matrix(y), y[-1]
        if not rho > 0:
            raise NonPositiveDensity(float(rho))
        dM = -M @ M + self._kn * (rho - self._cb) * self._eye
        return np.append(dM.ravel(), -rho * np.trace(M))

    def lambdas(self, y: np.ndarray) -> np.ndarray:
        return np.sort(np.linalg.eigvals(self.matrix(y)).real)

    def density(self, y: np.ndarray) -> float:
        return float(y[-1])

    def state(self, t: float, y: np.ndarray) -> MatrixState:
        return MatrixState(t=t, M=self.matrix(y), rho=self.density(y))


def u_system(params: REPParams, init: SpectralInitialData, *, reduced: bool = True) -> USpaceSystem:
    """The default u-space integration path: reduced when the spectrum has two ends."""
    if reduced and init.spread > 0:
        return ReducedUSystem(params, init)
    if reduced:
        _logger.debug("degenerate spectrum, falling back to the grouped u-system")
    return USystem(params, init)

