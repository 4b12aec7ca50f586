"""Policy extraction, game simulation, deviation experiments, and the
greedy baseline.

Strategies are callables.  A player strategy maps ``(t, prev_vertex_id,
node)`` to a vertex id of the timestep-``t`` mesh (``prev_vertex_id`` is
``None`` at t=0).  An opponent strategy maps ``(t, prev_vertex_id,
prev_node)`` to the next node; at t=0 both state arguments are ``None``.
Player strategies must output mesh vertices; the replay check in
:func:`simulate` rejects anything off-mesh or out of reach.

Realized totals are accumulated back-to-front, mirroring the order in which
backward induction sums stage costs, so equilibrium play reproduces the
solved game value exactly, bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SimulationError
from .instance import InstanceSpec
from .mesh import MeshSet, range_query
from .solver import ValueTables


@dataclass
class PolicyTables:
    """Argmin/argmax policies read off the value tables."""

    player: dict      # (t, prev_vertex_id, node_t) -> vertex id, t >= 1
    player0: dict     # start node -> vertex id
    opponent: dict    # (t, prev_vertex_id, node_{t-1}) -> node_t, t >= 1
    opponent0: int
    tables: ValueTables


@dataclass
class Trajectory:
    """A realized play: node choices, player points, and per-step costs."""

    nodes: tuple[int, ...]
    point_ids: tuple[int, ...]
    points: np.ndarray
    step_costs: tuple[float, ...]
    total_cost: float


def extract_policies(tables: ValueTables) -> PolicyTables:
    return PolicyTables(
        player=dict(tables.best_vertex),
        player0=dict(tables.best_vertex0),
        opponent=dict(tables.best_node),
        opponent0=tables.best_node0,
        tables=tables,
    )


class OptimalPlayer:
    """Plays the stored argmin policy."""

    def __init__(self, policy: PolicyTables):
        self._policy = policy

    def __call__(self, t, prev_vid, node):
        if t == 0:
            return self._policy.player0[node]
        return self._policy.player[(t, prev_vid, node)]


class OptimalOpponent:
    """Plays the stored argmax policy."""

    def __init__(self, policy: PolicyTables):
        self._policy = policy

    def __call__(self, t, prev_vid, prev_node):
        if t == 0:
            return self._policy.opponent0
        return self._policy.opponent[(t, prev_vid, prev_node)]


def feasible_vertex_ids(spec: InstanceSpec, meshes: MeshSet, t, prev_vid, node) -> np.ndarray:
    """Mesh vertices the player may move to, ascending by id.

    Uses the same feasibility predicate as the solver: inside the selected
    body and, for t >= 1, within ``rho`` of the previous point per axis.
    """
    cand = range_query(meshes, t, spec.body(t, node))
    if t == 0 or cand.size == 0:
        return cand
    x = meshes.vertices[t - 1][prev_vid]
    keep = (np.abs(meshes.vertices[t][cand] - x) <= spec.rho).all(axis=1)
    return cand[keep]


def ranked_player_actions(tables: ValueTables, t, prev_vid, node) -> list[int]:
    """Feasible vertices ordered best-first by the solved score, ties by id."""
    spec, meshes = tables.spec, tables.meshes
    cand = feasible_vertex_ids(spec, meshes, t, prev_vid, node)
    if t == 0:
        scores = np.array([tables.u[(1, int(c), node)] for c in cand])
    else:
        x = meshes.vertices[t - 1][prev_vid]
        scores = np.sqrt(((meshes.vertices[t][cand] - x) ** 2).sum(axis=1))
        if t < spec.horizon:
            scores = scores + np.array([tables.u[(t + 1, int(c), node)] for c in cand])
    order = np.argsort(scores, kind="stable")
    return [int(cand[k]) for k in order]


def ranked_opponent_actions(tables: ValueTables, t, prev_vid, prev_node) -> list[int]:
    """Admissible nodes ordered best-first (highest value), ties by node id."""
    spec = tables.spec
    if t == 0:
        nodes = sorted(tables.v0)
        scores = np.array([tables.v0[i] for i in nodes])
    else:
        nodes = [
            j
            for j in spec.graph.neighbors(prev_node)
            if (t, prev_vid, j) in tables.v
        ]
        scores = np.array([tables.v[(t, prev_vid, j)] for j in nodes])
    order = np.argsort(-scores, kind="stable")
    return [nodes[k] for k in order]


class DeviatePlayer:
    """Optimal policy except at one timestep, where the rank-th best feasible
    vertex is chosen (rank clamped to the number of feasible actions)."""

    def __init__(self, policy: PolicyTables, at_t: int, rank: int):
        if rank < 2:
            raise ValueError("deviation rank must be at least 2")
        self._policy = policy
        self.at_t = at_t
        self.rank = rank
        self.note = None

    def __call__(self, t, prev_vid, node):
        if t != self.at_t:
            return OptimalPlayer(self._policy)(t, prev_vid, node)
        ranked = ranked_player_actions(self._policy.tables, t, prev_vid, node)
        if len(ranked) == 1:
            self.note = f"no feasible alternative at t={t}; policy unchanged"
            return ranked[0]
        return ranked[min(self.rank, len(ranked)) - 1]


class DeviateOpponent:
    """Optimal policy except at one timestep, where the rank-th best node is
    chosen (rank clamped)."""

    def __init__(self, policy: PolicyTables, at_t: int, rank: int):
        if rank < 2:
            raise ValueError("deviation rank must be at least 2")
        self._policy = policy
        self.at_t = at_t
        self.rank = rank
        self.note = None

    def __call__(self, t, prev_vid, prev_node):
        if t != self.at_t:
            return OptimalOpponent(self._policy)(t, prev_vid, prev_node)
        ranked = ranked_opponent_actions(self._policy.tables, t, prev_vid, prev_node)
        if len(ranked) == 1:
            self.note = f"no feasible alternative at t={t}; policy unchanged"
            return ranked[0]
        return ranked[min(self.rank, len(ranked)) - 1]


def deviate_player(policy: PolicyTables, at_t: int, rank: int) -> DeviatePlayer:
    return DeviatePlayer(policy, at_t, rank)


def deviate_opponent(policy: PolicyTables, at_t: int, rank: int) -> DeviateOpponent:
    return DeviateOpponent(policy, at_t, rank)


class GreedyPlayer:
    """Mesh-restricted greedy projection baseline.

    Moves to the feasible vertex nearest the previous point (nearest the
    body center at t=0), ties to the lowest id.  Myopic by design; it is a
    legal player strategy, so it can never beat the solved value against
    the optimal opponent.
    """

    def __init__(self, spec: InstanceSpec, meshes: MeshSet):
        self._spec = spec
        self._meshes = meshes

    def __call__(self, t, prev_vid, node):
        spec, meshes = self._spec, self._meshes
        cand = feasible_vertex_ids(spec, meshes, t, prev_vid, node)
        if cand.size == 0:
            raise SimulationError(f"no feasible vertex at t={t} into node {node}")
        anchor = spec.body(t, node).center if t == 0 else meshes.vertices[t - 1][prev_vid]
        dist = np.sqrt(((meshes.vertices[t][cand] - anchor) ** 2).sum(axis=1))
        return int(cand[int(np.argmin(dist))])


class RandomPlayer:
    """Uniformly random feasible vertex each step; reproducible per seed."""

    def __init__(self, spec: InstanceSpec, meshes: MeshSet, seed: int):
        self._spec = spec
        self._meshes = meshes
        self._rng = np.random.default_rng(seed)

    def __call__(self, t, prev_vid, node):
        cand = feasible_vertex_ids(self._spec, self._meshes, t, prev_vid, node)
        if cand.size == 0:
            raise SimulationError(f"no feasible vertex at t={t} into node {node}")
        return int(cand[self._rng.integers(cand.size)])


class RandomOpponent:
    """Uniformly random admissible node each step; reproducible per seed."""

    def __init__(self, spec: InstanceSpec, seed: int):
        self._spec = spec
        self._rng = np.random.default_rng(seed)

    def __call__(self, t, prev_vid, prev_node):
        spec = self._spec
        if t == 0:
            options = list(spec.nodes_with_body(0))
        else:
            options = [
                j for j in spec.graph.neighbors(prev_node) if spec.body(t, j) is not None
            ]
        if not options:
            raise SimulationError(f"opponent has no admissible node at t={t}")
        return options[self._rng.integers(len(options))]


def simulate(
    spec: InstanceSpec,
    meshes: MeshSet,
    player_strategy,
    opponent_strategy,
    *,
    check: bool = True,
) -> Trajectory:
    """Play out one game under the given strategies.

    The sequence per timestep is: opponent selects a node, then the player
    selects a vertex of the selected body.  With ``check`` on (default),
    every action is replayed against the game rules and an infeasible
    action raises :class:`SimulationError` naming the state.
    """
    rho = spec.rho
    i0 = opponent_strategy(0, None, None)
    if check and spec.body(0, i0) is None:
        raise SimulationError(f"opponent start node {i0} has no body")
    vid = player_strategy(0, None, i0)
    vid = int(vid)
    if check and not spec.body(0, i0).contains(meshes.point(0, vid)):
        raise SimulationError(f"player start vertex {vid} lies outside node {i0}'s body")

    nodes = [int(i0)]
    ids = [vid]
    points = [meshes.point(0, vid)]
    costs: list[float] = []
    for t in range(1, spec.horizon + 1):
        i_t = int(opponent_strategy(t, ids[-1], nodes[-1]))
        if check:
            if i_t not in spec.graph.neighbors(nodes[-1]):
                raise SimulationError(
                    f"opponent move {nodes[-1]} -> {i_t} at t={t} is not an edge"
                )
            if spec.body(t, i_t) is None:
                raise SimulationError(f"opponent node {i_t} has no body at t={t}")
        vid_t = int(player_strategy(t, ids[-1], i_t))
        y = meshes.point(t, vid_t)
        if check:
            if not spec.body(t, i_t).contains(y):
                raise SimulationError(
                    f"player vertex {vid_t} at t={t} lies outside node {i_t}'s body"
                )
            if not (np.abs(y - points[-1]) <= rho).all():
                raise SimulationError(
                    f"player vertex {vid_t} at t={t} is outside the reach set"
                )
        costs.append(float(np.sqrt(((y - points[-1]) ** 2).sum())))
        nodes.append(i_t)
        ids.append(vid_t)
        points.append(y)

    # Back-to-front accumulation matches the solver's cost + continuation
    # adds, making equilibrium totals equal the solved value exactly.
    total = 0.0
    for c in reversed(costs):
        total = c + total
    return Trajectory(
        nodes=tuple(nodes),
        point_ids=tuple(ids),
        points=np.array(points),
        step_costs=tuple(costs),
        total_cost=total,
    )
