"""Figure rendering for the CLI report paths.

Figures are written next to the delimited outputs.  Only 2-d instances get
trajectory and value plots; the sweep plot is dimension-free.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle

from .instance import InstanceSpec
from .mesh import MeshSet
from .play import Trajectory
from .solver import ValueTables


def save_sweep_figure(rows: list[dict], path) -> None:
    """Desired vs. actual error, with the x=y reference line."""
    desired = [r["desired_error"] for r in rows]
    actual = [r["actual_error"] for r in rows]
    fig, ax = plt.subplots(figsize=(5.2, 3.2))
    lim = max(desired) * 1.05
    ax.plot([0, lim], [0, lim], color="black", linewidth=1.0, label="x=y line")
    ax.plot(desired, actual, "o-", color="tab:blue", markersize=6, label="observed")
    ax.set_xlabel("desired error")
    ax.set_ylabel("actual error")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _draw_boxes(ax, spec: InstanceSpec, nodes) -> None:
    cmap = plt.get_cmap("tab10")
    dom = spec.domain
    ax.add_patch(
        Rectangle(dom.lo, *(dom.hi - dom.lo), fill=False, edgecolor="black", linewidth=1.2)
    )
    for t, i in enumerate(nodes):
        b = spec.body(t, i)
        if b is None:
            continue
        ax.add_patch(
            Rectangle(
                b.lo,
                *(b.hi - b.lo),
                fill=False,
                edgecolor=cmap(t % 10),
                linewidth=1.0,
                label=f"t={t}, node {i}",
            )
        )


def save_trajectory_figure(spec: InstanceSpec, traj: Trajectory, path) -> bool:
    """Plot the visited boxes and the player path; 2-d instances only."""
    if spec.dimension != 2:
        return False
    fig, ax = plt.subplots(figsize=(4.6, 4.6))
    _draw_boxes(ax, spec, traj.nodes)
    pts = traj.points
    ax.plot(pts[:, 0], pts[:, 1], "o-", color="tab:blue", markersize=5)
    for t, p in enumerate(pts):
        ax.annotate(f"{t}", p, textcoords="offset points", xytext=(4, 4), fontsize=8)
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(fontsize=7, loc="upper right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return True


def save_value_slice_figure(
    spec: InstanceSpec, meshes: MeshSet, tables: ValueTables, t: int, node: int, path
) -> bool:
    """Scatter of the player value over predecessor vertices; 2-d only."""
    if spec.dimension != 2:
        return False
    entries = [(pid, val) for (tt, pid, nn), val in tables.v.items() if tt == t and nn == node]
    if not entries:
        return False
    ids = [e[0] for e in entries]
    vals = [e[1] for e in entries]
    pts = meshes.vertices[t - 1][ids]
    fig, ax = plt.subplots(figsize=(4.8, 4.2))
    sc = ax.scatter(pts[:, 0], pts[:, 1], c=vals, s=8, cmap="viridis")
    fig.colorbar(sc, ax=ax, label=f"value at t={t}, node {node}")
    ax.set_aspect("equal")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return True
