"""Fixtures for unit tests."""

from __future__ import annotations

import pytest

from rep_lab.core.models import REPParams, SpectralInitialData
from rep_lab.integrate.control import StepControl


@pytest.fixture
def params4() -> REPParams:
    return REPParams(n=4, k=4.0, c_b=1.0)


@pytest.fixture
def bounded_init() -> SpectralInitialData:
    """J = 3 > n/2: globally bounded."""
    return SpectralInitialData.from_values(1.0, [0.5, 0.5, 0.5, 1.0])


@pytest.fixture
def simple_min_params() -> REPParams:
    return REPParams(n=3, k=1.0, c_b=1.0)


@pytest.fixture
def simple_min_init() -> SpectralInitialData:
    """J = 1 with a strongly negative lambda_1, so u_1 crosses zero transversally."""
    return SpectralInitialData.from_values(1.0, [-3.0, 0.0, 1.0])


@pytest.fixture
def control() -> StepControl:
    return StepControl()
