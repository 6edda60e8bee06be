"""Blow-up pipeline runs on data with known answers."""

import math

import pytest

from rep_lab.analysis.pipeline import run_blowup
from rep_lab.analysis.verify import hard_failures
from rep_lab.core.errors import NotABlowupTrajectory
from rep_lab.core.models import CaseLabel, REPParams, SpectralInitialData
from rep_lab.integrate.control import StepControl

pytestmark = pytest.mark.integration


def test_closed_form_family(family):
    """The critical surface gives a tangential u_1 zero and second-order poles."""
    analysis = run_blowup(family.params, family.init, StepControl(), 10.0)
    report = analysis.report

    assert analysis.detection.tangential
    assert report.tB == pytest.approx(0.5 * math.pi, abs=1e-8)
    assert report.case_observed is CaseLabel.IIC
    assert report.xi1.exponent == 2.0
    assert report.xi1.coefficient == pytest.approx(-family.pole_coefficient, rel=1e-2)
    assert report.xin.coefficient == pytest.approx(family.pole_coefficient, rel=1e-2)
    assert report.rho_rate.exponent == 4.0
    assert report.p == pytest.approx(family.p, abs=1e-3)
    assert report.residuals["pq_order"] <= 1e-6
    assert report.residuals["sign_pattern"] == 0
    assert hard_failures(report.residuals) == []
    # the measured C feeds the density prediction
    assert analysis.predictions.rho_coefficient == pytest.approx(family.density_coefficient, rel=2e-2)


def test_simple_minimum(simple_min):
    """J = 1: lambda_1 ~ -1/(t_B - t) and the density grows like 1/(t_B - t)."""
    params, init = simple_min
    analysis = run_blowup(params, init, StepControl(), 5.0)
    report = analysis.report

    assert not report.tangential
    assert report.case_observed is CaseLabel.I
    assert report.xi1.exponent == 1.0
    assert report.xi1.coefficient == pytest.approx(-1.0, rel=1e-2)
    assert report.gamma == pytest.approx(-1.0, abs=0.05)
    # u_1 v_n on a ladder ending 2.4e-6 short of t_B; Richardson leaves a few 1e-6
    assert report.q == pytest.approx(0.0, abs=1e-5)
    assert report.residuals["sign_pattern"] == 0
    assert report.tB > report.lower_bound
    assert analysis.classification.case_label is CaseLabel.I


@pytest.mark.slow
def test_gap_above_density():
    """n = 4, J = 2 with A0 > k rho0: first-order poles and density ~ 1/(t_B - t)^2."""
    params = REPParams(n=4, k=4.0, c_b=1.0)
    init = SpectralInitialData.from_values(0.5, [-1.0, -1.0, 1.0, 1.0])
    analysis = run_blowup(params, init, StepControl(), 50.0)
    report = analysis.report

    assert analysis.classification.case_label is CaseLabel.IIB
    assert report.tB > report.lower_bound
    assert report.case_observed is CaseLabel.IIB
    assert report.xi1.exponent == 1.0
    assert report.xi1.coefficient == pytest.approx(-0.5 * (1.0 + math.sqrt(2.0)), rel=1e-3)
    assert report.xin.coefficient == pytest.approx(0.5 * (math.sqrt(2.0) - 1.0), rel=1e-3)
    assert hard_failures(report.residuals) == []


def test_globally_bounded_data():
    params = REPParams(n=4, k=4.0, c_b=1.0)
    init = SpectralInitialData.from_values(1.0, [0.5, 0.5, 0.5, 1.0])
    with pytest.raises(NotABlowupTrajectory):
        run_blowup(params, init, StepControl(), 5.0)


def test_triple_minimum_below_density():
    """n = 7, J = 3: w = u_1 u_n has a simple zero while u_1 is tangential."""
    params = REPParams(n=7, k=1.0, c_b=1.0)
    init = SpectralInitialData.from_values(1.0, [-3.0, -3.0, -3.0, 0.0, 0.5, 1.0, 2.0])
    analysis = run_blowup(params, init, StepControl(), 50.0)
    report = analysis.report

    assert analysis.classification.case_label is CaseLabel.III
    assert report.tangential
    assert report.case_observed is CaseLabel.III
    assert report.xi1.exponent == 1.0
    assert report.xi1.coefficient == pytest.approx(-2.0, rel=1e-2)
    assert report.xin.coefficient == pytest.approx(1.0, rel=1e-2)
    assert report.rho_rate.exponent == 2.0
    assert report.residuals["sign_pattern"] == 0
    assert hard_failures(report.residuals) == []


@pytest.mark.slow
def test_double_minimum_in_five_dimensions():
    """n = 5, J = 2: first-order poles for the pair, density below 1/(t_B - t)^2."""
    params = REPParams(n=5, k=1.0, c_b=1.0)
    init = SpectralInitialData.from_values(0.1, [-3.0, -3.0, 0.0, 1.0, 1.0])
    analysis = run_blowup(params, init, StepControl(), 50.0)
    report = analysis.report

    assert analysis.classification.case_label is CaseLabel.IIA
    assert report.tB >= report.lower_bound - 1e-9
    assert report.xi1.exponent == 1.0
    assert report.xi1.coefficient == pytest.approx(-1.0, rel=5e-2)
    assert report.residuals["rho_rate_error"] == 0.0
    assert hard_failures(report.residuals) == []
