from __future__ import annotations

import logging
import typing as t
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from rep_lab.analysis.rates import Ladder  # noqa: E402
from rep_lab.integrate.trajectory import Trajectory  # noqa: E402

_logger = logging.getLogger(__name__)

# fixed ids and no timestamp, so identical runs give identical files
matplotlib.rcParams["svg.hashsalt"] = "rep-lab"
_SVG_METADATA = {"Date": None}


def _save(fig: t.Any, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", bbox_inches="tight", metadata=_SVG_METADATA)
    plt.close(fig)
    _logger.debug("wrote %s", path)
    return path


def plot_lambdas(traj: Trajectory, path: Path, tB: t.Optional[float] = None) -> Path:
    """lambda_i(t) with a symmetric-log axis so the blow-up tail stays readable."""
    lambdas = traj.sample_lambdas()
    fig, ax = plt.subplots(figsize=(7, 4))
    for i in range(lambdas.shape[1]):
        ax.plot(traj.ts, lambdas[:, i], lw=1.2, label=f"lambda_{i + 1}")
    ax.set_yscale("symlog", linthresh=1.0)
    if tB is not None:
        ax.axvline(tB, color="k", ls="--", lw=0.8, label="t_B")
    ax.set_xlabel("t")
    ax.set_ylabel("lambda_i")
    ax.legend(loc="best", fontsize="small")
    return _save(fig, path)


def plot_density(traj: Trajectory, path: Path, tB: t.Optional[float] = None) -> Path:
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.semilogy(traj.ts, traj.sample_densities(), lw=1.2)
    if tB is not None:
        ax.axvline(tB, color="k", ls="--", lw=0.8)
    ax.set_xlabel("t")
    ax.set_ylabel("rho")
    return _save(fig, path)


def plot_ladder(rungs: Ladder, path: Path) -> Path:
    """log-log view of |lambda_1|, |lambda_n| and rho against t_B - t."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(rungs.d, np.abs(rungs.lambdas[:, 0]), "o-", label="|lambda_1|")
    ax.loglog(rungs.d, np.abs(rungs.lambdas[:, -1]), "s-", label="|lambda_n|")
    ax.loglog(rungs.d, rungs.rho, "^-", label="rho")
    ax.invert_xaxis()
    ax.set_xlabel("t_B - t")
    ax.legend(loc="best", fontsize="small")
    return _save(fig, path)
