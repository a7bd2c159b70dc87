"""Matplotlib figure rendering for curves and flow trajectories.

Used by the CLI report path to drop PNG figures next to the CSV output.
Imports matplotlib lazily with the Agg backend so headless runs work.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

from .flow import EnergyReport
from .geometry import DiscreteCurve

PathLike = Union[str, Path]


def _pyplot():
    import matplotlib
    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt
    return plt


def render_curve(path: PathLike, curve: DiscreteCurve, title: Optional[str] = None) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    ax.plot(curve.nodes[:, 0], curve.nodes[:, 1], "-", lw=1.2)
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_snapshots(path: PathLike,
                     snapshots: Sequence[Tuple[float, DiscreteCurve]],
                     title: Optional[str] = None,
                     max_curves: int = 8) -> None:
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    if len(snapshots) > max_curves:
        stride = max(1, (len(snapshots) - 1) // (max_curves - 1))
        shown = list(snapshots[::stride])
        if shown[-1][0] != snapshots[-1][0]:
            shown.append(snapshots[-1])
    else:
        shown = list(snapshots)
    cmap = plt.get_cmap("viridis")
    for k, (t, curve) in enumerate(shown):
        color = cmap(k / max(1, len(shown) - 1))
        ax.plot(curve.nodes[:, 0], curve.nodes[:, 1], "-", lw=1.0,
                color=color, label=f"t={t:.3g}")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7, loc="best")
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_trajectory(path: PathLike, trajectory: Sequence[EnergyReport],
                      title: Optional[str] = None) -> None:
    plt = _pyplot()
    t = [rep.t for rep in trajectory]
    fig, axes = plt.subplots(2, 2, figsize=(8.0, 6.0), sharex=True)
    panels = [
        ("elastic", "elastic energy"),
        ("length", "hyperbolic length"),
        ("min_height", "min height"),
        ("grad_norm", "gradient norm"),
    ]
    for ax, (field, label) in zip(axes.flat, panels):
        ax.plot(t, [getattr(rep, field) for rep in trajectory], "-", lw=1.0)
        ax.set_ylabel(label)
        ax.grid(True, alpha=0.3)
        if field == "grad_norm":
            ax.set_yscale("log")
    for ax in axes[-1]:
        ax.set_xlabel("t")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
