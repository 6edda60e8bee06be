"""Unit tests for the ``rep`` command line."""

import json

import pytest
from click.testing import CliRunner

from rep_lab import __version__
from rep_lab.cli.main import EXIT_CONFIG, EXIT_NO_EVENT, EXIT_NUMERIC, EXIT_OK, EXIT_THEORY, cli, exit_code_for
from rep_lab.core.errors import (
    ConfigurationError,
    NonPositiveU,
    NotABlowupTrajectory,
    StepSizeUnderflow,
    TheoryViolation,
    UnresolvedCase,
)

FAMILY = {"params": {"n": 4, "k": 4.0, "c_b": 1.0}, "init": {"rho0": 1.0, "lambda0": [-1.0, -1.0, 1.0, 1.0]}}
BOUNDED = {"params": {"n": 4, "k": 4.0, "c_b": 1.0}, "init": {"rho0": 1.0, "lambda0": [0.5, 0.5, 0.5, 1.0]}}


@pytest.fixture
def runner():
    return CliRunner()


class TestExitCodes:
    @pytest.mark.parametrize(
        "exc,code",
        [
            (ConfigurationError("bad"), EXIT_CONFIG),
            (NonPositiveU(0, -1.0), EXIT_NUMERIC),
            (StepSizeUnderflow(1.0, 1e-17), EXIT_NUMERIC),
            (UnresolvedCase("A0 < k*rho0"), EXIT_NUMERIC),
            (TheoryViolation("pq_order", 0.1), EXIT_THEORY),
            (NotABlowupTrajectory("ReachedTmax"), EXIT_NO_EVENT),
        ],
    )
    def test_mapping(self, exc, code):
        assert exit_code_for(exc) == code


class TestGroup:
    def test_version(self, runner):
        result = runner.invoke(cli, ["--version"])
        assert result.exit_code == EXIT_OK
        assert __version__ in result.output

    def test_commands(self, runner):
        result = runner.invoke(cli, ["--help"])
        for name in ("simulate", "blowup", "classify", "sweep", "rates", "verify-example"):
            assert name in result.output


class TestClassifyCommand:
    """Test the classify subcommand."""

    def test_prints_classification(self, runner, write_config, tmp_path):
        config = write_config({"mode": "classify", **FAMILY})
        result = runner.invoke(cli, ["classify", "--config", str(config)])
        assert result.exit_code == EXIT_OK
        doc = json.loads(result.output)
        assert doc == {"verdict": "BlowupPossible", "reason": "J=2,n=4,A0=k*rho0", "caseLabel": "IIc", "A0": 4.0}
        assert not (tmp_path / "out").exists()

    def test_writes_file_with_out(self, runner, write_config, tmp_path):
        config = write_config({"mode": "classify", **BOUNDED})
        out = tmp_path / "run"
        result = runner.invoke(cli, ["classify", "--config", str(config), "--out", str(out)])
        assert result.exit_code == EXIT_OK
        doc = json.loads((out / "classification.json").read_text(encoding="utf-8"))
        assert doc["result"]["verdict"] == "GlobalBounded"
        assert doc["params"] == FAMILY["params"]

    def test_mode_mismatch(self, runner, write_config):
        config = write_config({"mode": "blowup", **FAMILY})
        result = runner.invoke(cli, ["classify", "--config", str(config)])
        assert result.exit_code == EXIT_CONFIG
        assert "error:" in result.output

    def test_missing_init(self, runner, write_config):
        config = write_config({"mode": "classify", "params": FAMILY["params"]})
        result = runner.invoke(cli, ["classify", "--config", str(config)])
        assert result.exit_code == EXIT_CONFIG

    def test_dimension_mismatch(self, runner, write_config):
        config = write_config({"params": {"n": 3, "k": 1.0, "c_b": 1.0}, "init": FAMILY["init"]})
        result = runner.invoke(cli, ["classify", "--config", str(config)])
        assert result.exit_code == EXIT_CONFIG

    def test_config_must_exist(self, runner, tmp_path):
        result = runner.invoke(cli, ["classify", "--config", str(tmp_path / "absent.json")])
        assert result.exit_code != EXIT_OK


class TestSimulateCommand:
    """Test the simulate subcommand on bounded data."""

    def test_writes_trajectory_and_summary(self, runner, write_config, tmp_path):
        config = write_config({"mode": "simulate", **BOUNDED, "control": {"t_max": 2.0}})
        out = tmp_path / "sim"
        result = runner.invoke(cli, ["simulate", "--config", str(config), "--out", str(out)])
        assert result.exit_code == EXIT_OK

        lines = (out / "trajectory.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0] == "t,lambda_1,lambda_2,lambda_3,lambda_4,rho,u_1,u_2,u_3,u_4,abel_residual_max"
        assert lines[1].startswith("0,")
        assert float(lines[-1].split(",")[0]) == pytest.approx(2.0)

        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["result"]["tB"] is None
        assert summary["result"]["terminal"]["kind"] == "ReachedTmax"
        assert summary["result"]["abelResidualMax"] < 1e-7
        assert summary["control"]["t_max"] == 2.0

    def test_json_only(self, runner, write_config, tmp_path):
        config = write_config(
            {"mode": "simulate", **BOUNDED, "control": {"t_max": 1.0}, "outputs": {"formats": ["json"]}}
        )
        out = tmp_path / "sim"
        result = runner.invoke(cli, ["simulate", "--config", str(config), "--out", str(out)])
        assert result.exit_code == EXIT_OK
        assert (out / "summary.json").exists()
        assert not (out / "trajectory.csv").exists()


class TestBlowupCommand:
    def test_no_blowup_before_t_max(self, runner, write_config, tmp_path):
        config = write_config({"mode": "blowup", **BOUNDED, "control": {"t_max": 1.0}})
        result = runner.invoke(cli, ["blowup", "--config", str(config), "--out", str(tmp_path / "b")])
        assert result.exit_code == EXIT_NO_EVENT
        assert "no blow-up" in result.output

    def test_negative_t_max_is_a_config_error(self, runner, write_config, tmp_path):
        config = write_config({"mode": "blowup", **FAMILY, "control": {"t_max": -1.0}})
        result = runner.invoke(cli, ["blowup", "--config", str(config), "--out", str(tmp_path / "b")])
        assert result.exit_code == EXIT_CONFIG
