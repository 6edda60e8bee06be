"""Unit tests for grid sweeps."""

from dataclasses import replace

import pytest

from rep_lab.cli.config import parse_config
from rep_lab.cli.sweep import COLUMNS, evaluate_point, expand_grid, grid_axis, lambda_indices, run_sweep, sweep_table
from rep_lab.core.errors import ConfigurationError


def sweep_config(grid, *, n=4, lambda0=(-1.0, -1.0, 1.0, 1.0), **sweep):
    return parse_config(
        {
            "mode": "sweep",
            "params": {"n": n, "k": 4.0, "c_b": 1.0},
            "init": {"rho0": 1.0, "lambda0": list(lambda0)},
            "control": {"t_max": 0.5},
            "sweep": {"grid": grid, **sweep},
        }
    )


BOUNDED_GRID = {"lambda0[1,2,3]": [-1.0, 0.0, 0.5]}


class TestGridAxis:
    def test_list(self):
        assert grid_axis([1, 2.5]) == [1.0, 2.5]

    def test_linspace(self):
        assert grid_axis({"start": 0.0, "stop": 1.0, "num": 5}) == [0.0, 0.25, 0.5, 0.75, 1.0]


class TestLambdaIndices:
    def test_single_and_multiple(self):
        assert lambda_indices("lambda0[2]", 4) == [1]
        assert lambda_indices("lambda0[1, 3]", 4) == [0, 2]

    @pytest.mark.parametrize("key", ["lambda0[5]", "lambda0[0]", "mu[1]", "lambda0"])
    def test_rejected(self, key):
        with pytest.raises(ConfigurationError):
            lambda_indices(key, 4)


class TestExpandGrid:
    """Test the cartesian product of the grid axes."""

    def test_order_and_overrides(self):
        points = expand_grid(sweep_config({"k": [1.0, 2.0], "lambda0[1,2]": [-2.0, -1.5]}))
        assert [p.index for p in points] == [0, 1, 2, 3]
        assert [(p.k, p.lambda0[0]) for p in points] == [(1.0, -2.0), (1.0, -1.5), (2.0, -2.0), (2.0, -1.5)]
        assert points[1].lambda0 == (-1.5, -1.5, 1.0, 1.0)
        assert points[0].c_b == 1.0
        assert points[0].t_max == 0.5

    def test_scalar_rho0(self):
        points = expand_grid(sweep_config({"rho0": [0.5, 2.0]}))
        assert [p.rho0 for p in points] == [0.5, 2.0]

    def test_unknown_key(self):
        with pytest.raises(ConfigurationError):
            expand_grid(sweep_config({"omega": [1.0]}))

    def test_needs_sweep_section(self):
        config = parse_config(
            {"params": {"n": 4, "k": 4.0, "c_b": 1.0}, "init": {"rho0": 1.0, "lambda0": [0.0, 0.0, 1.0, 1.0]}}
        )
        with pytest.raises(ConfigurationError):
            expand_grid(config)


class TestEvaluatePoint:
    """Test single grid rows."""

    def test_bounded_row_skips_integration(self):
        (point,) = expand_grid(sweep_config({"lambda0[1,2,3]": [0.5]}, lambda0=(0.0, 0.0, 0.0, 1.0)))
        row = evaluate_point(point)
        assert row.status == "ok"
        assert row.fields["verdict"] == "GlobalBounded"
        assert row.fields["J"] == 3
        assert "tB" not in row.fields

    def test_constraint_needs_four_dimensions(self):
        config = sweep_config({"k": [1.0]}, n=5, lambda0=(-1.0, -1.0, 0.0, 1.0, 2.0), constraint="A0=k*rho0")
        row = evaluate_point(expand_grid(config)[0])
        assert row.status == "config-error"
        assert "n=4" in row.message

    def test_invalid_point_is_a_config_error(self):
        row = evaluate_point(expand_grid(sweep_config({"rho0": [-1.0]}))[0])
        assert row.status == "config-error"

    def test_no_blowup_before_t_max(self):
        row = evaluate_point(expand_grid(sweep_config({"k": [4.0]}))[0])
        assert row.fields["verdict"] == "BlowupPossible"
        assert row.status == "no-blowup"

    def test_bad_t_max_stays_in_its_row(self):
        """A point the integrator refuses is reported, not raised."""
        point = replace(expand_grid(sweep_config({"k": [4.0]}))[0], t_max=-1.0)
        row = evaluate_point(point)
        assert row.status == "config-error"
        assert "t_max" in row.message


class TestRunSweep:
    @pytest.mark.asyncio
    async def test_rows_come_back_in_grid_order(self):
        config = sweep_config(BOUNDED_GRID, workers=2)
        rows = await run_sweep(config)
        assert [row.index for row in rows] == [0, 1, 2]
        assert [row.values["lambda0[1,2,3]"] for row in rows] == [-1.0, 0.0, 0.5]
        assert all(row.fields["verdict"] == "GlobalBounded" for row in rows)

    def test_table(self):
        config = sweep_config(BOUNDED_GRID)
        rows = [evaluate_point(p) for p in expand_grid(config)]
        header, table = sweep_table(config, rows)
        assert header == ["index", "lambda0[1,2,3]", *COLUMNS[1:]]
        assert table[2][:6] == [2, 0.5, 4, 3, 1.0, "GlobalBounded"]
        assert all(len(line) == len(header) for line in table)
