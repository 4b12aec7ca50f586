"""Backward-induction computation of the mesh-restricted game values.

Two tables are produced per timestep.  The player table ``v[(t, p, i)]``
holds the best cost-to-go when the previous position is vertex ``p`` of the
timestep t-1 mesh and the opponent has just selected node ``i``; the
opponent table ``u[(t, p, i)]`` holds the worst case over the neighbors of
the node ``i`` the opponent sat on.  The two interleave:

    v[t] = min over feasible next vertices of (step cost + u[t+1]),
    u[t] = max over graph neighbors of v[t],

with the terminal player value a plain nearest-feasible-vertex cost and the
root value ``u0`` the max over start nodes of the start-node values ``v0``.

Every floating-point step here is mirrored exactly by the brute-force
reference in :mod:`boxchase.oracle`: candidates are enumerated in ascending
vertex-id order, feasibility is the elementwise test |y - x| <= rho per
axis, step costs use the same elementwise square/sum/sqrt, and ties resolve
to the lowest vertex id, then the lowest node id.  That shared discipline
is what makes solver-vs-reference comparisons exact rather than
approximate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InternalInconsistencyError
from .instance import InstanceSpec
from .mesh import MeshSet, range_query


@dataclass
class ValueTables:
    """Solved value tables plus the argmin/argmax companions.

    Keys are ``(t, prev_vertex_id, node)`` where the vertex id indexes the
    timestep t-1 mesh.  For ``v`` the node is the one just selected by the
    opponent; for ``u`` it is the node the opponent is moving from.  States
    that are not admissible are absent, not zero.
    """

    v: dict = field(default_factory=dict)
    u: dict = field(default_factory=dict)
    v0: dict = field(default_factory=dict)
    u0: float = 0.0
    best_vertex: dict = field(default_factory=dict)   # argmin companion of v
    best_vertex0: dict = field(default_factory=dict)  # argmin companion of v0
    best_node: dict = field(default_factory=dict)     # argmax companion of u
    best_node0: int = -1
    spec: InstanceSpec | None = None
    meshes: MeshSet | None = None


def body_vertex_ids(spec: InstanceSpec, meshes: MeshSet) -> dict:
    """Mesh-vertex ids inside each present body, keyed ``(t, node)``."""
    out = {}
    for t in range(spec.horizon + 1):
        for i in spec.nodes_with_body(t):
            out[(t, i)] = range_query(meshes, t, spec.body(t, i))
    return out


def backward_induction(spec: InstanceSpec, meshes: MeshSet) -> ValueTables:
    T = spec.horizon
    rho = spec.rho
    graph = spec.graph
    in_body = body_vertex_ids(spec, meshes)

    tables = ValueTables(spec=spec, meshes=meshes)
    # Continuation values for the stage currently being computed: per node,
    # a dense array over the next timestep's vertex ids (NaN where absent).
    u_next: dict[int, np.ndarray] = {}

    for t in range(T, 0, -1):
        for i_t in spec.nodes_with_body(t):
            if t < T and i_t not in u_next:
                # No admissible continuation anywhere; drop the whole node.
                continue
            cand = in_body[(t, i_t)]
            if cand.size == 0:
                raise InternalInconsistencyError(
                    f"body of node {i_t} at t={t} holds no mesh vertex"
                )
            Y = meshes.vertices[t][cand]
            if t < T:
                ucont = u_next[i_t][cand]
                if np.isnan(ucont).any():
                    raise InternalInconsistencyError(
                        f"missing continuation values inside node {i_t} at t={t}"
                    )
            preds: set[int] = set()
            for i_prev in spec.nodes_with_body(t - 1):
                if i_t in graph.neighbors(i_prev):
                    preds.update(int(p) for p in in_body[(t - 1, i_prev)])
            for pid in sorted(preds):
                x = meshes.vertices[t - 1][pid]
                keep = (np.abs(Y - x) <= rho).all(axis=1)
                if not keep.any():
                    raise InternalInconsistencyError(
                        f"empty optimization domain at t={t}, vertex {pid}, node {i_t}"
                    )
                idx = np.flatnonzero(keep)
                vals = np.sqrt(((Y[idx] - x) ** 2).sum(axis=1))
                if t < T:
                    vals = vals + ucont[idx]
                k = int(np.argmin(vals))  # first minimum = lowest vertex id
                tables.v[(t, pid, i_t)] = float(vals[k])
                tables.best_vertex[(t, pid, i_t)] = int(cand[idx[k]])

        u_prev: dict[int, np.ndarray] = {}
        for i_prev in spec.nodes_with_body(t - 1):
            nbrs = graph.neighbors(i_prev)
            dense = np.full(meshes.count(t - 1), np.nan)
            stored = False
            for pid in (int(p) for p in in_body[(t - 1, i_prev)]):
                best_val = None
                best_j = -1
                for j in nbrs:  # ascending; strict > keeps the lowest node on ties
                    val = tables.v.get((t, pid, j))
                    if val is None:
                        continue
                    if best_val is None or val > best_val:
                        best_val, best_j = val, j
                if best_val is None:
                    continue
                tables.u[(t, pid, i_prev)] = best_val
                tables.best_node[(t, pid, i_prev)] = best_j
                dense[pid] = best_val
                stored = True
            if stored:
                u_prev[i_prev] = dense
        u_next = u_prev

    for i0 in spec.nodes_with_body(0):
        if i0 not in u_next:
            continue
        pids = in_body[(0, i0)]
        if pids.size == 0:
            raise InternalInconsistencyError(f"start body of node {i0} holds no mesh vertex")
        uvals = u_next[i0][pids]
        if np.isnan(uvals).any():
            raise InternalInconsistencyError(
                f"missing start continuation values inside node {i0}"
            )
        k = int(np.argmin(uvals))
        tables.v0[i0] = float(uvals[k])
        tables.best_vertex0[i0] = int(pids[k])

    if not tables.v0:
        raise InternalInconsistencyError("no start node admits a value")
    u0 = None
    for i0 in sorted(tables.v0):
        if u0 is None or tables.v0[i0] > u0:
            u0 = tables.v0[i0]
            tables.best_node0 = i0
    tables.u0 = u0
    return tables


def game_value(tables: ValueTables) -> float:
    """The mesh game value: the root opponent value ``u0``."""
    return tables.u0
