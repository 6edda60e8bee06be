from __future__ import annotations

import enum
import math
import typing as t
from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicHermiteSpline

from rep_lab.dynamics.base import Coordinates, CoordinateSystem


class TerminalKind(str, enum.Enum):
    REACHED_TMAX = "ReachedTmax"
    BLOWUP_EVENT = "BlowupEvent"
    STEP_SIZE_UNDERFLOW = "StepSizeUnderflow"
    DENSITY_OVERFLOW = "DensityOverflow"


@dataclass(frozen=True)
class Terminal:
    kind: TerminalKind
    t_event: t.Optional[float] = None
    bracket: t.Optional[t.Tuple[float, float]] = None
    event: t.Optional[str] = None
    # t_event is an escape or cap time rather than the root of u_1
    tangential: bool = False
    projected: bool = False

    @property
    def is_blowup(self) -> bool:
        return self.kind is TerminalKind.BLOWUP_EVENT

    def to_dict(self) -> t.Dict[str, t.Any]:
        return {
            "kind": self.kind.value,
            "t_event": self.t_event,
            "bracket": list(self.bracket) if self.bracket else None,
            "event": self.event,
            "tangential": self.tangential,
            "projected": self.projected,
        }


@dataclass(frozen=True)
class Diagnostics:
    steps: int
    rejected: int
    rhs_evaluations: int
    residual: np.ndarray = field(repr=False)
    method: str = "dopri5"

    @property
    def residual_max(self) -> float:
        finite = self.residual[np.isfinite(self.residual)]
        return float(finite.max()) if finite.size else math.nan


class DenseOutput(ABC):
    @abstractmethod
    def __call__(self, t: t.Union[float, np.ndarray]) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError

    @abstractmethod
    def integral(self, t: t.Union[float, np.ndarray]) -> np.ndarray:  # pragma: no cover - interface
        raise NotImplementedError


class PolynomialDenseOutput(DenseOutput):
    """Per-step quartic interpolant y(t_j + x h_j) = y_j + h_j * Q_j @ (x, x^2, x^3, x^4)."""

    def __init__(self, ts: np.ndarray, ys: np.ndarray, Q: np.ndarray) -> None:
        self._ts = ts
        self._ys = ys
        self._Q = Q
        self._h = np.diff(ts)
        if ts.size > 1:
            full = self._h[:, None] * (ys[:-1] + self._h[:, None] * (Q @ np.array([1 / 2, 1 / 3, 1 / 4, 1 / 5])))
            self._cumulative = np.vstack([np.zeros((1, ys.shape[1])), np.cumsum(full, axis=0)])
        else:
            self._cumulative = np.zeros_like(ys)

    def _locate(self, t: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:
        idx = np.clip(np.searchsorted(self._ts, t, side="right") - 1, 0, self._ts.size - 2)
        x = (t - self._ts[idx]) / self._h[idx]
        return idx, x

    def __call__(self, t: t.Union[float, np.ndarray]) -> np.ndarray:
        tt = np.asarray(t, dtype=float)
        if self._ts.size == 1:
            return np.broadcast_to(self._ys[0], tt.shape + self._ys.shape[1:]).copy()
        idx, x = self._locate(np.atleast_1d(tt))
        powers = np.stack([x, x**2, x**3, x**4], axis=-1)
        out = self._ys[idx] + self._h[idx, None] * np.einsum("mdk,mk->md", self._Q[idx], powers)
        return out[0] if tt.ndim == 0 else out

    def integral(self, t: t.Union[float, np.ndarray]) -> np.ndarray:
        tt = np.asarray(t, dtype=float)
        if self._ts.size == 1:
            return np.zeros(tt.shape + self._ys.shape[1:])
        idx, x = self._locate(np.atleast_1d(tt))
        h = self._h[idx, None]
        powers = np.stack([x**2 / 2, x**3 / 3, x**4 / 4, x**5 / 5], axis=-1)
        partial = h * (x[:, None] * self._ys[idx] + h * np.einsum("mdk,mk->md", self._Q[idx], powers))
        out = self._cumulative[idx] + partial
        return out[0] if tt.ndim == 0 else out


class HermiteDenseOutput(DenseOutput):
    """Cubic Hermite on (y, y') at the step ends."""

    def __init__(self, ts: np.ndarray, ys: np.ndarray, fs: np.ndarray) -> None:
        self._ts = ts
        self._ys = ys
        if ts.size > 1:
            self._spline = CubicHermiteSpline(ts, ys, fs, axis=0)
            self._antiderivative = self._spline.antiderivative()
        else:
            self._spline = None

    def __call__(self, t: t.Union[float, np.ndarray]) -> np.ndarray:
        if self._spline is None:
            tt = np.asarray(t, dtype=float)
            return np.broadcast_to(self._ys[0], tt.shape + self._ys.shape[1:]).copy()
        return self._spline(t)

    def integral(self, t: t.Union[float, np.ndarray]) -> np.ndarray:
        if self._spline is None:
            tt = np.asarray(t, dtype=float)
            return np.zeros(tt.shape + self._ys.shape[1:])
        return self._antiderivative(t)


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Trajectory:
    system: CoordinateSystem
    ts: np.ndarray
    ys: np.ndarray
    dense: DenseOutput = field(repr=False)
    terminal: Terminal
    diagnostics: Diagnostics

    def __post_init__(self) -> None:
        object.__setattr__(self, "ts", _readonly(self.ts))
        object.__setattr__(self, "ys", _readonly(self.ys))

    @property
    def coords(self) -> Coordinates:
        return self.system.coords

    @property
    def t_start(self) -> float:
        return float(self.ts[0])

    @property
    def t_end(self) -> float:
        return float(self.ts[-1])

    @property
    def y_end(self) -> np.ndarray:
        return self.ys[-1]

    def __call__(self, t: t.Union[float, np.ndarray]) -> np.ndarray:
        return self.dense(t)

    def __len__(self) -> int:
        return int(self.ts.size)

    def covers(self, t: float) -> bool:
        return self.t_start <= t <= self.t_end

    def integral(self, t: t.Union[float, np.ndarray]) -> np.ndarray:
        """Running integral of the state vector from the first sample to ``t``."""
        return self.dense.integral(t)

    def lambdas_at(self, t: float) -> np.ndarray:
        return self.system.lambdas(self.dense(t))

    def density_at(self, t: float) -> float:
        return self.system.density(self.dense(t))

    def sample_lambdas(self) -> np.ndarray:
        return np.array([self.system.lambdas(y) for y in self.ys])

    def sample_densities(self) -> np.ndarray:
        return np.array([self.system.density(y) for y in self.ys])

    def states(self) -> t.Iterator[t.Any]:
        state = getattr(self.system, "state")
        for ti, yi in zip(self.ts, self.ys):
            yield state(float(ti), yi)
