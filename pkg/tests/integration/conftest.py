"""Fixtures for integration tests."""

import pytest

from rep_lab.core.models import REPParams, SpectralInitialData


@pytest.fixture
def simple_min():
    """Case I data whose u_1 crosses zero transversally."""
    return REPParams(n=3, k=1.0, c_b=1.0), SpectralInitialData.from_values(1.0, [-3.0, 0.0, 1.0])
