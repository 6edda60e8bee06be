"""Command line surface: config loading, output writers, sweeps and plots."""

from .config import RunConfig, load_config, parse_config
from .main import cli, exit_code_for
from .output import dumps, format_float, write_csv, write_json
from .sweep import SweepPoint, SweepRow, evaluate_point, expand_grid, run_sweep, sweep_table

__all__ = [
    # Config
    "RunConfig",
    "load_config",
    "parse_config",
    # Entry point
    "cli",
    "exit_code_for",
    # Output
    "dumps",
    "format_float",
    "write_csv",
    "write_json",
    # Sweeps
    "SweepPoint",
    "SweepRow",
    "evaluate_point",
    "expand_grid",
    "run_sweep",
    "sweep_table",
]
