"""Brute-force references used only to validate the main pipeline.

``naive_minimax`` re-derives every table entry by expanding the full game
tree with no memoization and without reusing the opponent table, so any
agreement with the backward-induction solver is earned, not shared.  It
does share the geometry primitives and the raw vertex arrays, and it
follows the same tie-breaking and floating-point discipline (ascending
candidate order, elementwise cost arithmetic), which is what lets tests
demand exact equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InstanceError, OracleGuardError
from .geometry import Box
from .instance import InstanceSpec
from .mesh import MeshSet, grid_points


@dataclass(frozen=True)
class NaiveResult:
    u0: float
    values: dict
    best: dict


def naive_minimax(
    spec: InstanceSpec, meshes: MeshSet, *, leaf_limit: int = 10_000_000
) -> NaiveResult:
    """Recursive max-min expansion of the discrete game tree.

    Returns the root value and a map of every visited state's value, keyed
    ``("v", t, prev_vertex, node)``, ``("u", t, prev_vertex, node)``,
    ``("v0", node)`` and ``"u0"``, with argmin/argmax actions in ``best``
    under the same keys.  Raises :class:`OracleGuardError` once more than
    ``leaf_limit`` terminal evaluations have happened.
    """
    T = spec.horizon
    rho = spec.rho
    verts = meshes.vertices
    values: dict = {}
    best: dict = {}
    leaves = 0

    def inside(t: int, node: int) -> np.ndarray:
        b = spec.body(t, node)
        pts = verts[t]
        return np.flatnonzero(((pts >= b.lo) & (pts <= b.hi)).all(axis=1))

    def player_value(t: int, pvid: int, i_t: int) -> float:
        nonlocal leaves
        x = verts[t - 1][pvid]
        best_val = None
        best_vid = -1
        for vid in inside(t, i_t):
            y = verts[t][vid]
            if not (np.abs(y - x) <= rho).all():
                continue
            c = float(np.sqrt(((y - x) ** 2).sum()))
            if t == T:
                leaves += 1
                if leaves > leaf_limit:
                    raise OracleGuardError(
                        f"game tree exceeds {leaf_limit} terminal evaluations"
                    )
                val = c
            else:
                val = c + opponent_value(t + 1, int(vid), i_t)
            if best_val is None or val < best_val:
                best_val, best_vid = val, int(vid)
        if best_val is None:
            raise InstanceError(
                f"no feasible vertex at t={t} from vertex {pvid} into node {i_t}"
            )
        values[("v", t, pvid, i_t)] = best_val
        best[("v", t, pvid, i_t)] = best_vid
        return best_val

    def opponent_value(t: int, pvid: int, i_prev: int) -> float:
        best_val = None
        best_j = -1
        for j in spec.graph.neighbors(i_prev):
            if spec.body(t, j) is None:
                continue
            val = player_value(t, pvid, j)
            if best_val is None or val > best_val:
                best_val, best_j = val, j
        if best_val is None:
            raise InstanceError(f"node {i_prev} has no admissible move at t={t}")
        values[("u", t, pvid, i_prev)] = best_val
        best[("u", t, pvid, i_prev)] = best_j
        return best_val

    u0 = None
    for i0 in spec.nodes_with_body(0):
        best_val = None
        best_vid = -1
        for vid in inside(0, i0):
            val = opponent_value(1, int(vid), i0)
            if best_val is None or val < best_val:
                best_val, best_vid = val, int(vid)
        if best_val is None:
            raise InstanceError(f"start body of node {i0} holds no mesh vertex")
        values[("v0", i0)] = best_val
        best[("v0", i0)] = best_vid
        if u0 is None or best_val > u0:
            u0 = best_val
            best["u0"] = i0
    if u0 is None:
        raise InstanceError("no start node has a body")
    values["u0"] = u0
    return NaiveResult(u0=u0, values=values, best=best)


def sample_hausdorff(a: Box, b: Box, pitch: float) -> float:
    """Grid estimate of the Hausdorff distance between two boxes.

    Both boxes are sampled on uniform grids of axis spacing at most
    ``pitch`` (corners included); each directed term is the largest
    distance from a sample of one box to the nearest sample of the other.
    Since the sample grid is a Cartesian product, that nearest sample is
    found per axis by rounding, which equals the brute-force minimum.  The
    result is within ``2 * pitch * sqrt(d)`` of the true distance.
    """
    if not pitch > 0:
        raise ValueError("pitch must be positive")

    def directed(src: Box, dst: Box) -> float:
        samples = grid_points(src, pitch)
        nearest = np.empty_like(samples)
        for k in range(dst.dimension):
            coords = _axis_samples(float(dst.lo[k]), float(dst.hi[k]), pitch)
            if coords.size == 1:
                nearest[:, k] = coords[0]
            else:
                step = (coords[-1] - coords[0]) / (coords.size - 1)
                idx = np.rint((samples[:, k] - coords[0]) / step).astype(np.int64)
                nearest[:, k] = coords[np.clip(idx, 0, coords.size - 1)]
        return float(np.sqrt(((samples - nearest) ** 2).sum(axis=1)).max())

    return max(directed(a, b), directed(b, a))


def _axis_samples(lo: float, hi: float, pitch: float) -> np.ndarray:
    width = hi - lo
    if width <= 0.0:
        return np.array([lo])
    return np.linspace(lo, hi, int(math.ceil(width / pitch)) + 1)


def coverage_probe(
    meshes: MeshSet, t: int, region: Box, delta: float, samples: int, seed: int
) -> float:
    """Worst nearest-vertex distance over random probes of ``region``.

    ``delta`` is the coverage target the caller intends to compare against;
    it is echoed in no way here, the return value is just the worst probe.
    """
    from scipy.spatial import cKDTree

    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    probes = rng.uniform(region.lo, region.hi, size=(samples, region.dimension))
    dist, _ = cKDTree(meshes.vertices[t]).query(probes)
    return float(np.max(dist))
