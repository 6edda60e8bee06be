"""Unit tests for the domain value objects."""

import math

import pytest

from rep_lab.core.errors import (
    ConfigurationError,
    DimensionMismatch,
    NonFiniteInput,
    NonPositiveParameter,
)
from rep_lab.core.models import CaseLabel, Classification, REPParams, RuleTag, SpectralInitialData, Verdict


class TestREPParams:
    """Test REPParams validation and derived values."""

    def test_omega_is_derived(self):
        """omega = sqrt(k c_b / n)."""
        params = REPParams(n=4, k=4.0, c_b=1.0)
        assert params.omega == 1.0
        assert params.k_over_n == 1.0

    def test_integer_like_n_is_normalized(self):
        params = REPParams(n=3.0, k=1, c_b=2)
        assert isinstance(params.n, int)
        assert isinstance(params.k, float)
        assert params.omega == pytest.approx(math.sqrt(2.0 / 3.0))

    @pytest.mark.parametrize(
        "n,k,c_b",
        [(1, 1.0, 1.0), (2.5, 1.0, 1.0), (True, 1.0, 1.0), (3, 0.0, 1.0), (3, 1.0, -1.0)],
    )
    def test_invalid_parameters_rejected(self, n, k, c_b):
        with pytest.raises(NonPositiveParameter):
            REPParams(n=n, k=k, c_b=c_b)

    def test_non_finite_rejected(self):
        with pytest.raises(NonFiniteInput):
            REPParams(n=3, k=math.inf, c_b=1.0)

    def test_errors_are_configuration_errors(self):
        """Every validation failure is reported as a configuration problem."""
        with pytest.raises(ConfigurationError):
            REPParams(n=3, k=math.nan, c_b=1.0)


class TestSpectralInitialData:
    """Test SpectralInitialData construction."""

    def test_from_values_sorts_and_counts(self):
        init = SpectralInitialData.from_values(2.0, [1.0, -1.0, -1.0, 3.0])
        assert init.lambda0 == (-1.0, -1.0, 1.0, 3.0)
        assert init.J == 2
        assert init.n == 4
        assert init.spread == 4.0

    def test_multiplicity_uses_exact_equality(self):
        init = SpectralInitialData.from_values(1.0, [-1.0, -1.0 + 1e-15, 2.0])
        assert init.J == 1

    def test_unsorted_direct_construction_rejected(self):
        with pytest.raises(ConfigurationError, match="sorted"):
            SpectralInitialData(rho0=1.0, lambda0=(1.0, -1.0), J=1)

    def test_wrong_J_rejected(self):
        with pytest.raises(ConfigurationError, match="J=1"):
            SpectralInitialData(rho0=1.0, lambda0=(-1.0, 0.0, 1.0), J=2)

    def test_non_positive_density_rejected(self):
        with pytest.raises(NonPositiveParameter):
            SpectralInitialData.from_values(0.0, [-1.0, 1.0])

    def test_non_finite_lambda_rejected(self):
        with pytest.raises(NonFiniteInput):
            SpectralInitialData.from_values(1.0, [-1.0, math.nan])

    def test_single_eigenvalue_rejected(self):
        with pytest.raises(DimensionMismatch):
            SpectralInitialData.from_values(1.0, [0.5])

    def test_array_view(self):
        init = SpectralInitialData.from_values(1.0, [2.0, 1.0])
        assert init.array.tolist() == [1.0, 2.0]


class TestClassification:
    """Test Classification helpers."""

    def test_blowup_possible_flag(self):
        assert Classification(Verdict.BLOWUP_POSSIBLE, RuleTag.SIMPLE_MINIMUM, CaseLabel.I).blowup_possible
        assert not Classification(Verdict.GLOBAL_BOUNDED, RuleTag.DEGENERATE).blowup_possible

    def test_to_dict_uses_wire_values(self):
        result = Classification(Verdict.BLOWUP_POSSIBLE, RuleTag.GAP_ON_DENSITY, CaseLabel.IIC, A0=4.0)
        assert result.to_dict() == {
            "verdict": "BlowupPossible",
            "reason": "J=2,n=4,A0=k*rho0",
            "caseLabel": "IIc",
            "A0": 4.0,
        }

    def test_pole_order_per_case(self):
        assert CaseLabel.IIC.pole_order == 2
        assert all(label.pole_order == 1 for label in CaseLabel if label is not CaseLabel.IIC)
