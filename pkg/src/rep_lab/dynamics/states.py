from __future__ import annotations

import typing as t
from dataclasses import dataclass

import numpy as np


def _frozen(values: t.Any) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class LambdaState:
    t: float
    lam: np.ndarray
    rho: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "lam", _frozen(self.lam))
        object.__setattr__(self, "rho", float(self.rho))


@dataclass(frozen=True)
class UState:
    t: float
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", _frozen(self.u))
        object.__setattr__(self, "v", _frozen(self.v))


@dataclass(frozen=True)
class MatrixState:
    t: float
    M: np.ndarray
    rho: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "M", _frozen(self.M))
        object.__setattr__(self, "rho", float(self.rho))


class LambdaRates(t.NamedTuple):
    dlam: np.ndarray
    drho: float


class URates(t.NamedTuple):
    du: np.ndarray
    dv: np.ndarray


class MatrixRates(t.NamedTuple):
    dM: np.ndarray
    drho: float


class Reduction(t.NamedTuple):
    """Coefficients with u_j = a[j] * u_1 + b[j] * u_n."""

    a: np.ndarray
    b: np.ndarray
