"""Right-hand sides and coordinate systems for the spectral dynamics."""

from .base import Coordinates, CoordinateSystem
from .rhs import abel_residual, lambda_rhs, matrix_rhs, reduce_to_two, rho_from_u, u_rhs
from .states import LambdaRates, LambdaState, MatrixRates, MatrixState, Reduction, URates, UState
from .systems import (
    LambdaSystem,
    LogPairSystem,
    MatrixSystem,
    ReducedUSystem,
    USpaceSystem,
    USystem,
    group_levels,
    lambda_from_u,
    u_system,
)

__all__ = [
    # States
    "LambdaState",
    "UState",
    "MatrixState",
    "LambdaRates",
    "URates",
    "MatrixRates",
    "Reduction",
    # Right-hand sides
    "lambda_rhs",
    "u_rhs",
    "rho_from_u",
    "abel_residual",
    "reduce_to_two",
    "matrix_rhs",
    # Coordinate systems
    "Coordinates",
    "CoordinateSystem",
    "LambdaSystem",
    "USpaceSystem",
    "USystem",
    "ReducedUSystem",
    "LogPairSystem",
    "MatrixSystem",
    "u_system",
    "group_levels",
    "lambda_from_u",
]
