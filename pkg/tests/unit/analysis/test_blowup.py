"""Unit tests for blow-up time extraction and boundary data."""

import math

import pytest

from rep_lab.analysis.blowup import (
    POLE_REACH,
    detect_blowup,
    estimate_pq,
    find_blowup_time,
    lambda_space_events,
    pair_events,
    project_pole,
    rate_trajectory,
    u1_slope,
    u_space_events,
)
from rep_lab.analysis.rates import LadderSpec
from rep_lab.core.errors import NotABlowupTrajectory
from rep_lab.dynamics.systems import LambdaSystem, LogPairSystem, u_system
from rep_lab.integrate.control import StepControl
from rep_lab.integrate.dopri import integrate


@pytest.fixture
def escape_run(family):
    system = LambdaSystem(family.params, family.init)
    control = StepControl()
    return integrate(system, control, 10.0, lambda_space_events(system, control))


@pytest.fixture
def pair_run(family):
    system = LogPairSystem(family.params, family.init)
    control = StepControl()
    return integrate(system, control, 10.0, pair_events(system, control))


class TestProjectPole:
    """Test t_B from the pole of (ln u_1 u_n)' on the closed-form family."""

    def test_closed_form_family(self, pair_run):
        assert pair_run.terminal.is_blowup
        assert pair_run.terminal.event == "pole_reach"
        projection = project_pole(pair_run)
        assert projection.order == 2
        assert projection.tB == pytest.approx(0.5 * math.pi, abs=1e-8)
        assert projection.bracket[0] <= projection.tB <= projection.bracket[1]
        assert projection.bracket[0] >= pair_run.t_end

    def test_run_stops_close_to_the_pole(self, pair_run):
        assert 0.0 < 0.5 * math.pi - pair_run.t_end <= 2.0 * POLE_REACH * 0.5 * math.pi

    def test_needs_log_pair_run(self, escape_run):
        with pytest.raises(TypeError):
            project_pole(escape_run)


class TestFindBlowupTime:
    def test_transversal_root(self, simple_min_params, simple_min_init):
        control = StepControl()
        system = u_system(simple_min_params, simple_min_init)
        traj = integrate(system, control, 5.0, u_space_events(system, control))
        tB, (lo, hi) = find_blowup_time(traj)
        assert lo <= tB <= hi + 1e-12
        assert tB - lo < 1e-9
        assert u1_slope(traj) < 0

    def test_log_pair_run(self, pair_run):
        tB, bracket = find_blowup_time(pair_run)
        assert tB == pytest.approx(0.5 * math.pi, abs=1e-8)
        assert bracket[0] <= tB <= bracket[1]

    def test_lambda_space_escape_is_not_a_t_B_source(self, escape_run):
        """A lambda-space escape drifts off the critical surface; it only flags the blow-up."""
        assert escape_run.terminal.is_blowup
        with pytest.raises(TypeError):
            find_blowup_time(escape_run)

    def test_requires_blowup_terminal(self, family):
        traj = integrate(LambdaSystem(family.params, family.init), StepControl(), 0.5)
        with pytest.raises(NotABlowupTrajectory):
            find_blowup_time(traj)

    def test_u1_slope_needs_u_space(self, escape_run):
        with pytest.raises(TypeError):
            u1_slope(escape_run)


class TestDetectBlowup:
    """Test the combined u-space/lambda-space detection."""

    def test_tangential_family(self, family):
        detection = detect_blowup(family.params, family.init, StepControl(), 10.0)
        assert detection.detected
        assert detection.tangential
        assert detection.u_traj.terminal.tangential
        assert detection.pair_traj is not None
        assert detection.t_blowup == pytest.approx(0.5 * math.pi, abs=1e-8)

    def test_transversal_case_one(self, simple_min_params, simple_min_init):
        detection = detect_blowup(simple_min_params, simple_min_init, StepControl(), 5.0)
        assert detection.detected
        assert not detection.tangential
        assert detection.pair_traj is None
        assert detection.lam_traj.terminal.is_blowup
        # both coordinate systems agree on where the pole is
        assert detection.lam_traj.terminal.t_event == pytest.approx(detection.t_blowup, abs=1e-6)

    def test_bounded_data(self, params4, bounded_init):
        detection = detect_blowup(params4, bounded_init, StepControl(), 5.0)
        assert not detection.detected
        assert detection.bracket is None


class TestBoundaryData:
    """Test p, q and the rate trajectory."""

    def test_pq_on_family(self, family, pair_run):
        """On the critical surface p = q = spread / 2."""
        pq = estimate_pq(pair_run, family.init, 0.5 * math.pi)
        assert pq.p == pytest.approx(family.p, abs=1e-6)
        assert pq.q == pytest.approx(family.p, abs=1e-6)
        assert pq.p + pq.q == pytest.approx(family.init.spread, abs=1e-12)

    def test_pq_transversal(self, simple_min_params, simple_min_init):
        control = StepControl()
        detection = detect_blowup(simple_min_params, simple_min_init, control, 5.0)
        pq = estimate_pq(detection.u_traj, simple_min_init, detection.t_blowup)
        # u_1 v_n on a ladder ending 2.4e-6 short of t_B; Richardson leaves a few 1e-6
        assert pq.q == pytest.approx(0.0, abs=1e-5)
        assert pq.p == pytest.approx(simple_min_init.spread, rel=1e-5)

    def test_rate_trajectory_reuses_escape_run(self, simple_min_params, simple_min_init):
        """A simple pole escapes close enough to t_B for the escape run to cover the ladder."""
        control = StepControl()
        detection = detect_blowup(simple_min_params, simple_min_init, control, 5.0)
        traj = rate_trajectory(
            simple_min_params, simple_min_init, control, detection.t_blowup, LadderSpec(), reuse=detection.lam_traj
        )
        assert traj is detection.lam_traj

    def test_tangential_reuses_pair_run(self, family, pair_run):
        tB = 0.5 * math.pi
        traj = rate_trajectory(family.params, family.init, StepControl(), tB, LadderSpec(), pair_run, tangential=True)
        assert traj is pair_run

    def test_tangential_never_reuses_lambda_space(self, family, escape_run):
        spec = LadderSpec()
        tB = 0.5 * math.pi
        traj = rate_trajectory(family.params, family.init, StepControl(), tB, spec, escape_run, tangential=True)
        assert traj is not escape_run
        assert isinstance(traj.system, LogPairSystem)
        assert traj.t_end == pytest.approx(tB - 0.5 * spec.floor(tB))
