"""``rep`` command line: simulate, blowup, classify, sweep, verify-example, rates.

Exit codes: 0 success, 2 configuration, 3 numerical failure, 4 theory or
tolerance violation, 5 no blow-up before t_max.
"""

from __future__ import annotations

import functools
import logging
import math
import sys
import typing as t
from pathlib import Path

import anyio
import click
import numpy as np

from rep_lab import __version__
from rep_lab.analysis.blowup import detect_blowup
from rep_lab.analysis.pipeline import BlowupAnalysis, default_t_max, run_blowup
from rep_lab.analysis.verify import hard_failures
from rep_lab.cli.config import ExampleSection, RunConfig, load_config, parse_config
from rep_lab.cli.output import dumps, write_csv, write_json
from rep_lab.cli.sweep import run_sweep, sweep_table
from rep_lab.core.classify import classify
from rep_lab.core.errors import (
    ConfigurationError,
    NotABlowupTrajectory,
    NumericalError,
    RepError,
    TheoryViolation,
)
from rep_lab.core.models import REPParams
from rep_lab.integrate.trajectory import Trajectory
from rep_lab.oracle.example import ExampleFamily, example_eval, example_tB

_logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_THEORY = 4
EXIT_NO_EVENT = 5

# verify-example tolerances
POINTWISE_TOL = 1e-6
TB_TOL = 1e-6
RATE_TOL = 1e-2
PQ_TOL = 1e-3
# the pointwise comparison stops this far short of t_B
POINTWISE_MARGIN = 1e-3


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, ConfigurationError):
        return EXIT_CONFIG
    if isinstance(exc, TheoryViolation):
        return EXIT_THEORY
    if isinstance(exc, NotABlowupTrajectory):
        return EXIT_NO_EVENT
    return EXIT_NUMERIC


def _guard(fn: t.Callable[..., None]) -> t.Callable[..., None]:
    """Turn library errors into a one-line message on stderr and the matching exit code."""

    @functools.wraps(fn)
    def wrapper(*args: t.Any, **kwargs: t.Any) -> None:
        try:
            fn(*args, **kwargs)
        except RepError as exc:
            code = exit_code_for(exc)
            click.echo(f"error: {exc}", err=True)
            _logger.debug("exiting with %d", code, exc_info=True)
            raise click.exceptions.Exit(code) from exc

    return wrapper


def _run_options(fn: t.Callable[..., None]) -> t.Callable[..., None]:
    fn = click.option("--svg/--no-svg", default=None, help="Also write SVG plots (overrides outputs.svg).")(fn)
    fn = click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Output directory.")(fn)
    fn = click.option(
        "--config",
        "config_path",
        type=click.Path(exists=True, dir_okay=False),
        required=True,
        help="JSON run configuration.",
    )(fn)
    return fn


class Run(t.NamedTuple):
    config: RunConfig
    out: Path
    svg: bool


def _prepare(mode: str, config: RunConfig, out_dir: t.Optional[str], svg: t.Optional[bool]) -> Run:
    if config.mode is not None and config.mode != mode:
        raise ConfigurationError(f"config is for mode {config.mode!r}, not {mode!r}")
    out = Path(out_dir) if out_dir else Path(config.outputs.dir)
    return Run(config, out, config.outputs.svg if svg is None else svg)


def _header(config: RunConfig) -> t.Dict[str, t.Any]:
    return {
        "params": config.params.model_dump() if config.params else None,
        "init": config.init.model_dump() if config.init else None,
        "control": config.control.model_dump(),
    }


def _t_max(config: RunConfig, params: REPParams) -> float:
    return config.control.t_max if config.control.t_max is not None else default_t_max(params)


def _configure_logging(level: str) -> None:
    logging.basicConfig(
        level=getattr(logging, level.upper()),
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@click.group()
@click.version_option(__version__, prog_name="rep")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    show_default=True,
)
@click.option("-v", "--verbose", is_flag=True, help="Shortcut for --log-level DEBUG.")
def cli(log_level: str, verbose: bool) -> None:
    """Numerical laboratory for blow-up in the restricted Euler-Poisson spectral dynamics."""
    _configure_logging("DEBUG" if verbose else log_level)


def _trajectory_rows(traj: Trajectory, stride: int) -> t.Iterator[t.List[float]]:
    """CSV rows; the step that carries u_1 past zero has no lambda or rho and gets NaN there."""
    system = traj.system
    residuals = traj.diagnostics.residual
    n = system.n
    for i in range(0, len(traj), stride):
        y = traj.ys[i]
        u = system.u(y)
        if np.all(u > 0):
            lam, rho = list(system.lambdas(y)), system.density(y)
        else:
            lam, rho = [math.nan] * n, math.nan
        yield [float(traj.ts[i]), *lam, rho, *u, float(residuals[i])]


@cli.command()
@_run_options
@_guard
def simulate(config_path: str, out_dir: t.Optional[str], svg: t.Optional[bool]) -> None:
    """Integrate in u-space and write the sampled trajectory."""
    run = _prepare("simulate", load_config(config_path), out_dir, svg)
    params, init = run.config.require_problem()
    control = run.config.control.build()
    detection = detect_blowup(params, init, control, _t_max(run.config, params), reduced=run.config.control.reduced)
    traj = detection.u_traj
    n = params.n
    header = ["t", *[f"lambda_{i + 1}" for i in range(n)], "rho", *[f"u_{i + 1}" for i in range(n)]]
    header.append("abel_residual_max")
    rows = list(_trajectory_rows(traj, run.config.outputs.sample_stride))
    table = np.array(rows, dtype=float)
    summary = {
        **_header(run.config),
        "result": {
            "terminal": traj.terminal.to_dict(),
            "tB": detection.t_blowup,
            "tBBracket": list(detection.bracket) if detection.bracket else None,
            "tangential": detection.tangential,
            "steps": traj.diagnostics.steps,
            "rejected": traj.diagnostics.rejected,
            "rhsEvaluations": traj.diagnostics.rhs_evaluations,
            "abelResidualMax": traj.diagnostics.residual_max,
            "lambdaMax": float(np.nanmax(np.abs(table[:, 1 : n + 1]))),
            "rhoMax": float(np.nanmax(table[:, n + 1])),
        },
    }
    if "csv" in run.config.outputs.formats:
        write_csv(run.out / "trajectory.csv", header, rows)
    if "json" in run.config.outputs.formats:
        write_json(run.out / "summary.json", summary)
    if run.svg:
        from rep_lab.cli.plots import plot_density, plot_lambdas

        plot_lambdas(detection.lam_traj, run.out / "lambda.svg", detection.t_blowup)
        plot_density(detection.lam_traj, run.out / "rho.svg", detection.t_blowup)
    click.echo(dumps(summary["result"]), nl=False)


def _blowup_document(config: RunConfig, analysis: BlowupAnalysis) -> t.Dict[str, t.Any]:
    extra = analysis.to_dict()
    result = {**analysis.report.to_dict()}
    result["classification"] = extra["classification"]
    result["predicted"] = extra["predicted"]
    result["terminal"] = extra["terminal"]
    return {**_header(config), "result": result}


def _write_blowup_plots(out: Path, analysis: BlowupAnalysis) -> None:
    from rep_lab.cli.plots import plot_density, plot_ladder, plot_lambdas

    traj = analysis.rate_traj
    plot_lambdas(traj, out / "lambda.svg", analysis.report.tB)
    plot_density(traj, out / "rho.svg", analysis.report.tB)
    plot_ladder(analysis.rungs, out / "ladder.svg")


@cli.command()
@_run_options
@_guard
def blowup(config_path: str, out_dir: t.Optional[str], svg: t.Optional[bool]) -> None:
    """Detect blow-up, measure rates and check them against the theory."""
    run = _prepare("blowup", load_config(config_path), out_dir, svg)
    params, init = run.config.require_problem()
    control = run.config.control.build()
    analysis = run_blowup(params, init, control, _t_max(run.config, params), strict=False)
    document = _blowup_document(run.config, analysis)
    write_json(run.out / "report.json", document)
    if run.svg:
        _write_blowup_plots(run.out, analysis)
    click.echo(dumps(document["result"]), nl=False)
    failed = hard_failures(analysis.report.residuals)
    if failed:
        raise TheoryViolation(failed[0], analysis.report.residuals[failed[0]])


@cli.command("classify")
@_run_options
@_guard
def classify_cmd(config_path: str, out_dir: t.Optional[str], svg: t.Optional[bool]) -> None:
    """Classify the initial data without integrating."""
    run = _prepare("classify", load_config(config_path), out_dir, svg)
    params, init = run.config.require_problem()
    result = classify(params, init)
    document = {"params": _header(run.config)["params"], "init": _header(run.config)["init"], "result": result}
    if "json" in run.config.outputs.formats and out_dir:
        write_json(run.out / "classification.json", document)
    click.echo(dumps(document["result"]), nl=False)


@cli.command()
@_run_options
@_guard
def sweep(config_path: str, out_dir: t.Optional[str], svg: t.Optional[bool]) -> None:
    """Run every grid point and write one CSV row per point, in grid order."""
    run = _prepare("sweep", load_config(config_path), out_dir, svg)
    rows = anyio.run(run_sweep, run.config)
    header, table = sweep_table(run.config, rows)
    path = write_csv(run.out / "sweep.csv", header, table)
    failures = sum(1 for row in rows if row.status not in ("ok", "no-blowup"))
    if failures:
        _logger.warning("%d of %d sweep rows failed", failures, len(rows))
    click.echo(str(path))


@cli.command()
@_run_options
@_guard
def rates(config_path: str, out_dir: t.Optional[str], svg: t.Optional[bool]) -> None:
    """Write the rate ladder and the predicted-versus-measured table."""
    run = _prepare("rates", load_config(config_path), out_dir, svg)
    params, init = run.config.require_problem()
    control = run.config.control.build()
    analysis = run_blowup(params, init, control, _t_max(run.config, params), strict=False)
    rungs, report = analysis.rungs, analysis.report
    rho_exponent = report.rho_rate.exponent if report.rho_rate else 2.0
    header = ["d", "t", *[f"d_lambda_{i + 1}" for i in range(params.n)], "d_e_rho", "rho_exponent"]
    table = [
        [d, tm, *(d * lam), d**rho_exponent * rho, rho_exponent]
        for d, tm, lam, rho in zip(rungs.d, rungs.t, rungs.lambdas, rungs.rho)
    ]
    write_csv(run.out / "ladder.csv", header, table)
    comparison = {
        **_header(run.config),
        "result": {
            "tB": report.tB,
            "caseObserved": report.case_observed.value if report.case_observed else None,
            "measured": {
                "xi1": report.xi1.to_dict() if report.xi1 else None,
                "xin": report.xin.to_dict() if report.xin else None,
                "rho_rate": report.rho_rate.to_dict() if report.rho_rate else None,
                "gamma": report.gamma,
                "R0": report.R0,
            },
            "predicted": analysis.predictions.to_dict() if analysis.predictions else None,
        },
    }
    write_json(run.out / "rates.json", comparison)
    if run.svg:
        from rep_lab.cli.plots import plot_ladder

        plot_ladder(rungs, run.out / "ladder.svg")
    click.echo(dumps(comparison["result"]), nl=False)


def example_checks(family: ExampleFamily, analysis: BlowupAnalysis) -> t.Dict[str, t.Tuple[float, float]]:
    """Error and tolerance for every comparison of the pipeline against the closed form."""
    tB_exact = example_tB(family)
    traj = analysis.rate_traj
    stop = min(tB_exact - POINTWISE_MARGIN, traj.t_end)
    times = np.concatenate([traj.ts[traj.ts <= stop], np.linspace(0.0, stop, 257)])
    worst = {"lambda1": 0.0, "lambda4": 0.0, "rho": 0.0}
    for tv in times:
        exact = example_eval(family, float(tv))
        lam = traj.lambdas_at(float(tv))
        rho = traj.density_at(float(tv))
        pairs = (("lambda1", lam[0], exact.lambda1), ("lambda4", lam[-1], exact.lambda4), ("rho", rho, exact.rho))
        for name, got, want in pairs:
            worst[name] = max(worst[name], abs(got - want) / max(abs(want), 1e-300))

    report = analysis.report
    C = family.pole_coefficient

    def rel(fit: t.Any, want: float) -> float:
        return math.inf if fit is None else abs(fit.coefficient - want) / abs(want)

    return {
        "pointwise_lambda1": (worst["lambda1"], POINTWISE_TOL),
        "pointwise_lambda4": (worst["lambda4"], POINTWISE_TOL),
        "pointwise_rho": (worst["rho"], POINTWISE_TOL),
        "tB": (abs(report.tB - tB_exact), TB_TOL),
        "rate_lambda1": (rel(report.xi1, -C), RATE_TOL),
        "rate_lambda4": (rel(report.xin, C), RATE_TOL),
        "rate_rho": (rel(report.rho_rate, family.density_coefficient), RATE_TOL),
        "p": (abs(report.p - family.p), PQ_TOL),
        "q": (abs(report.q - family.p), PQ_TOL),
    }


@cli.command("verify-example")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON run configuration.")
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Output directory.")
@click.option("--svg/--no-svg", default=None, help="Also write SVG plots.")
@_guard
def verify_example(config_path: t.Optional[str], out_dir: t.Optional[str], svg: t.Optional[bool]) -> None:
    """Run the pipeline on the closed-form family and compare."""
    config = load_config(config_path) if config_path else parse_config({"mode": "verify-example"})
    run = _prepare("verify-example", config, out_dir, svg)
    family = (run.config.example or ExampleSection()).build()
    control = run.config.control.build()
    t_max = run.config.control.t_max if run.config.control.t_max is not None else 2.0 * example_tB(family)
    try:
        analysis = run_blowup(family.params, family.init, control, t_max, strict=False)
        checks = example_checks(family, analysis)
    except (NumericalError, NotABlowupTrajectory) as exc:
        # the pipeline failing on a family with a known answer is a tolerance breach too
        click.echo(f"pipeline failed: {exc}", err=True)
        raise TheoryViolation("pipeline", math.inf) from exc

    lines = [f"{'check':<20} {'error':>12} {'tolerance':>10}  status"]
    for name, (error, tol) in checks.items():
        lines.append(f"{name:<20} {error:>12.3e} {tol:>10.1e}  {'pass' if error <= tol else 'FAIL'}")
    click.echo("\n".join(lines))
    document = {
        "example": {"k": family.k, "c_b": family.c_b, "lambda10": family.lambda10, "lambda40": family.lambda40},
        "control": run.config.control.model_dump(),
        "result": {name: {"error": e, "tolerance": tol, "pass": e <= tol} for name, (e, tol) in checks.items()},
    }
    if out_dir or config_path:
        write_json(run.out / "verify_example.json", document)
    if run.svg:
        _write_blowup_plots(run.out, analysis)
    failed = [name for name, (e, tol) in checks.items() if not e <= tol]
    if failed:
        raise TheoryViolation(failed[0], checks[failed[0]][0])


def main() -> None:  # pragma: no cover - console entry
    cli()


if __name__ == "__main__":  # pragma: no cover
    main()
