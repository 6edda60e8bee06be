"""Unit tests for the adaptive integrator, its dense output and the RK4 reference."""

import math

import numpy as np
import pytest

from rep_lab.core.errors import NonPositiveParameter
from rep_lab.dynamics.base import Coordinates, CoordinateSystem
from rep_lab.dynamics.systems import LambdaSystem
from rep_lab.integrate.control import StepControl
from rep_lab.integrate.dopri import integrate
from rep_lab.integrate.events import density_overflow, lambda_escape
from rep_lab.integrate.rk4 import reference_integrate
from rep_lab.integrate.trajectory import TerminalKind


class ScalarSystem(CoordinateSystem):
    """y' = f(y) for a scalar y that doubles as the single eigenvalue and the density."""

    coords = Coordinates.LAMBDA

    def __init__(self, f, y0):
        self._f = f
        self._y0 = y0

    @property
    def n(self):
        return 1

    def initial_vector(self):
        return np.array([self._y0])

    def rhs(self, t, y):
        return self._f(y)

    def lambdas(self, y):
        return np.array([y[0]])

    def density(self, y):
        return float(y[0])


def decay():
    return ScalarSystem(lambda y: -y, 1.0)


class TestStepControl:
    """Test StepControl validation."""

    def test_defaults(self):
        control = StepControl()
        assert control.rtol == 1e-10
        assert control.atol == 1e-12
        assert control.alpha == pytest.approx(0.17)

    @pytest.mark.parametrize("field", ["rtol", "atol", "h_init", "h_min", "lambda_escape", "u_zero_eps"])
    def test_non_positive_rejected(self, field):
        with pytest.raises(NonPositiveParameter):
            StepControl(**{field: 0.0})

    def test_h_min_above_h_max_rejected(self):
        with pytest.raises(NonPositiveParameter):
            StepControl(h_min=1e-3, h_max=1e-4)

    def test_unknown_dense_output_rejected(self):
        with pytest.raises(NonPositiveParameter):
            StepControl(dense_output="linear")

    def test_bracket_width_scales_with_time(self):
        control = StepControl()
        assert control.bracket_width(0.5) == 1e-12
        assert control.bracket_width(100.0) == pytest.approx(1e-10)


class TestIntegrate:
    """Test the 5(4) integrator on problems with known solutions."""

    def test_exponential_decay(self):
        traj = integrate(decay(), StepControl(), 1.0)
        assert traj.terminal.kind is TerminalKind.REACHED_TMAX
        assert traj.t_end == 1.0
        assert traj.y_end[0] == pytest.approx(math.exp(-1.0), rel=1e-9)
        assert np.all(np.diff(traj.ts) > 0)
        assert traj.diagnostics.steps == len(traj) - 1
        assert traj.diagnostics.rhs_evaluations >= 6 * traj.diagnostics.steps

    def test_samples_are_read_only(self):
        traj = integrate(decay(), StepControl(), 0.5)
        with pytest.raises(ValueError):
            traj.ts[0] = 1.0

    @pytest.mark.parametrize("dense_output,tol", [("native", 1e-9), ("hermite", 1e-7)])
    def test_dense_output_between_steps(self, dense_output, tol):
        traj = integrate(decay(), StepControl(dense_output=dense_output), 2.0)
        mids = 0.5 * (traj.ts[:-1] + traj.ts[1:])
        values = traj(mids)[:, 0]
        assert np.allclose(values, np.exp(-mids), rtol=tol, atol=0.0)

    def test_running_integral(self):
        traj = integrate(decay(), StepControl(), 1.0)
        assert traj.integral(1.0)[0] == pytest.approx(1.0 - math.exp(-1.0), rel=1e-8)
        assert traj.integral(0.0)[0] == pytest.approx(0.0, abs=1e-15)

    def test_escape_event_on_riccati_pole(self):
        """y' = -y^2 from -1 escapes just before t = 1."""
        system = ScalarSystem(lambda y: -y * y, -1.0)
        control = StepControl()
        traj = integrate(system, control, 5.0, [lambda_escape(system, 1e8)])
        terminal = traj.terminal
        assert terminal.kind is TerminalKind.BLOWUP_EVENT
        assert terminal.event == "lambda_escape"
        assert terminal.tangential
        lo, hi = terminal.bracket
        assert hi - lo <= control.bracket_width(hi)
        assert terminal.t_event == pytest.approx(1.0 - 1e-8, abs=1e-7)

    def test_density_overflow(self):
        system = ScalarSystem(lambda y: y, 1.0)
        traj = integrate(system, StepControl(), 10.0, [density_overflow(system, 10.0)])
        assert traj.terminal.kind is TerminalKind.DENSITY_OVERFLOW
        assert traj.terminal.t_event == pytest.approx(math.log(10.0), abs=1e-8)
        assert not traj.terminal.is_blowup

    def test_step_budget(self):
        traj = integrate(decay(), StepControl(max_steps=3), 100.0)
        assert traj.terminal.kind is TerminalKind.STEP_SIZE_UNDERFLOW
        assert traj.diagnostics.steps == 3

    @pytest.mark.parametrize("t_max", [0.0, -1.0, math.nan, math.inf])
    def test_rejects_bad_t_max(self, t_max):
        with pytest.raises(NonPositiveParameter):
            integrate(decay(), StepControl(), t_max)

    def test_custom_start(self):
        traj = integrate(decay(), StepControl(), 2.0, t0=1.0, y0=np.array([2.0]))
        assert traj.t_start == 1.0
        assert traj.y_end[0] == pytest.approx(2.0 * math.exp(-1.0), rel=1e-9)
        assert traj.covers(1.5)
        assert not traj.covers(0.5)

    def test_terminal_to_dict(self):
        traj = integrate(decay(), StepControl(), 0.1)
        assert traj.terminal.to_dict() == {
            "kind": "ReachedTmax",
            "t_event": None,
            "bracket": None,
            "event": None,
            "tangential": False,
            "projected": False,
        }


class TestReferenceRK4:
    """Test the fixed-step reference integrator."""

    def test_lands_on_t_max(self):
        traj = reference_integrate(decay(), 0.3, 1.0)
        assert traj.t_end == 1.0
        assert traj.diagnostics.method == "rk4"

    def test_fourth_order_convergence(self):
        errors = []
        for h in (0.1, 0.05):
            traj = reference_integrate(decay(), h, 1.0)
            errors.append(abs(traj.y_end[0] - math.exp(-1.0)))
        assert 12.0 < errors[0] / errors[1] < 20.0

    def test_agrees_with_adaptive(self, family):
        system = LambdaSystem(family.params, family.init)
        adaptive = integrate(system, StepControl(), 1.0)
        reference = reference_integrate(system, 1e-3, 1.0)
        assert np.allclose(reference.y_end, adaptive.y_end, rtol=1e-7)

    def test_rejects_non_positive_step(self):
        with pytest.raises(NonPositiveParameter):
            reference_integrate(decay(), 0.0, 1.0)
