"""Game descriptions: the graph, the per-timestep target boxes, and the
feasibility certifier that guarantees the game never dead-ends.

An instance is the tuple (domain, graph, bodies, reach radius, horizon).
The opponent walks the graph; visiting node ``i`` at timestep ``t`` assigns
the box ``bodies[t][i]`` that the player must enter.  A node may have no box
at a timestep (entry ``None``), in which case it simply cannot be visited
then; validation rejects instances where an admissible opponent walk could
ever land on such a node.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import InstanceError
from .geometry import Box

_TOP_KEYS = {"dimension", "domain", "horizon", "rho", "nodes", "edges", "bodies"}
_BOX_KEYS = {"lo", "hi"}


@dataclass(frozen=True)
class GraphSpec:
    """Directed graph on nodes ``0 .. node_count-1``; self-loops allowed."""

    node_count: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.node_count < 1:
            raise InstanceError("graph needs at least one node")
        edges = tuple((int(i), int(j)) for i, j in self.edges)
        seen = set()
        for i, j in edges:
            if not (0 <= i < self.node_count and 0 <= j < self.node_count):
                raise InstanceError(f"edge ({i}, {j}) references an unknown node")
            if (i, j) in seen:
                raise InstanceError(f"duplicate edge ({i}, {j})")
            seen.add((i, j))
        object.__setattr__(self, "edges", edges)

    @cached_property
    def _adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {i: [] for i in range(self.node_count)}
        for i, j in self.edges:
            adj[i].append(j)
        return {i: tuple(sorted(js)) for i, js in adj.items()}

    def neighbors(self, i: int) -> tuple[int, ...]:
        if not 0 <= i < self.node_count:
            raise InstanceError(f"invalid node id {i}")
        return self._adjacency[i]


def neighbors(g: GraphSpec, i: int) -> tuple[int, ...]:
    """All nodes ``j`` with ``(i, j)`` an edge, ascending."""
    return g.neighbors(i)


@dataclass(frozen=True)
class InstanceSpec:
    """A complete chasing-game description."""

    dimension: int
    domain: Box
    horizon: int
    rho: float
    graph: GraphSpec
    bodies: tuple[tuple[Box | None, ...], ...]

    def __post_init__(self):
        if self.dimension < 1:
            raise InstanceError("dimension must be at least 1")
        if self.domain.dimension != self.dimension:
            raise InstanceError("domain dimension does not match the instance")
        if self.horizon < 1:
            raise InstanceError("horizon must be at least 1")
        if not self.rho > 0:
            raise InstanceError("reach radius must be positive")
        rows = tuple(tuple(row) for row in self.bodies)
        if len(rows) != self.horizon + 1:
            raise InstanceError(
                f"bodies table has {len(rows)} rows, expected horizon+1 = {self.horizon + 1}"
            )
        for t, row in enumerate(rows):
            if len(row) != self.graph.node_count:
                raise InstanceError(
                    f"bodies row {t} has {len(row)} entries, expected {self.graph.node_count}"
                )
            for i, b in enumerate(row):
                if b is None:
                    continue
                if b.dimension != self.dimension:
                    raise InstanceError(f"body (t={t}, node={i}) has wrong dimension")
                if not self.domain.contains_box(b):
                    raise InstanceError(f"body (t={t}, node={i}) is not contained in the domain")
        object.__setattr__(self, "bodies", rows)
        self._validate_reachable_structure()

    def _validate_reachable_structure(self) -> None:
        # Every node an admissible opponent walk can visit must carry a box,
        # and must have an outgoing edge whenever the walk can continue.
        active = {i for i in range(self.graph.node_count) if self.bodies[0][i] is not None}
        if not active:
            raise InstanceError("no node has a body at t=0; the opponent cannot start")
        for t in range(self.horizon):
            nxt: set[int] = set()
            for i in sorted(active):
                outs = self.graph.neighbors(i)
                if not outs:
                    raise InstanceError(
                        f"node {i} is reachable at t={t} but has no outgoing edge"
                    )
                nxt.update(outs)
            for j in sorted(nxt):
                if self.bodies[t + 1][j] is None:
                    raise InstanceError(
                        f"node {j} is reachable at t={t + 1} but has no body there"
                    )
            active = nxt

    def body(self, t: int, i: int) -> Box | None:
        return self.bodies[t][i]

    def nodes_with_body(self, t: int) -> tuple[int, ...]:
        return tuple(i for i, b in enumerate(self.bodies[t]) if b is not None)


@dataclass(frozen=True)
class FeasibilityViolation:
    t: int
    from_node: int
    to_node: int
    axis: int
    endpoint: str  # "lo" or "hi"
    overlap: float
    witness: tuple[float, ...]

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "from_node": self.from_node,
            "to_node": self.to_node,
            "axis": self.axis,
            "endpoint": self.endpoint,
            "overlap": self.overlap,
            "witness": list(self.witness),
        }


@dataclass(frozen=True)
class FeasibilityReport:
    ok: bool
    violations: tuple[FeasibilityViolation, ...]


def _axis_overlap(x: float, rho: float, lo: float, hi: float) -> float:
    # Width of [x-rho, x+rho] intersected with [lo, hi] on one axis.
    return min(hi, x + rho) - max(lo, x - rho)


def check_feasibility(spec: InstanceSpec) -> FeasibilityReport:
    """Certify that from every point of a body the reach set meets every
    neighbor body at the next timestep with nonempty interior.

    The per-axis overlap width is concave piecewise-linear in the source
    coordinate, so its minimum over a source interval is attained at an
    endpoint; evaluating both endpoints per axis is exact.  Strict
    positivity is required: touching boxes have empty interior and fail.
    """
    violations: list[FeasibilityViolation] = []
    for t in range(spec.horizon):
        for i in spec.nodes_with_body(t):
            src = spec.body(t, i)
            for j in spec.graph.neighbors(i):
                dst = spec.body(t + 1, j)
                if dst is None:
                    continue
                hit = _first_axis_violation(src, dst, spec.rho)
                if hit is not None:
                    axis, endpoint, overlap = hit
                    witness = _worst_corner(src, dst, spec.rho)
                    violations.append(
                        FeasibilityViolation(
                            t=t,
                            from_node=i,
                            to_node=j,
                            axis=axis,
                            endpoint=endpoint,
                            overlap=overlap,
                            witness=tuple(witness),
                        )
                    )
    return FeasibilityReport(ok=not violations, violations=tuple(violations))


def _first_axis_violation(src: Box, dst: Box, rho: float):
    for k in range(src.dimension):
        for endpoint, x in (("lo", src.lo[k]), ("hi", src.hi[k])):
            w = _axis_overlap(float(x), rho, float(dst.lo[k]), float(dst.hi[k]))
            if not w > 0.0:
                return k, endpoint, w
    return None


def _worst_corner(src: Box, dst: Box, rho: float) -> np.ndarray:
    # Per axis, the source endpoint with the smaller overlap width; ties go lo.
    out = np.empty(src.dimension)
    for k in range(src.dimension):
        w_lo = _axis_overlap(float(src.lo[k]), rho, float(dst.lo[k]), float(dst.hi[k]))
        w_hi = _axis_overlap(float(src.hi[k]), rho, float(dst.lo[k]), float(dst.hi[k]))
        out[k] = src.hi[k] if w_hi < w_lo else src.lo[k]
    return out


def _parse_box(data, where: str) -> Box:
    if not isinstance(data, dict):
        raise InstanceError(f"{where}: expected an object with 'lo' and 'hi'")
    unknown = set(data) - _BOX_KEYS
    if unknown:
        raise InstanceError(f"{where}: unknown keys {sorted(unknown)}")
    if set(data) != _BOX_KEYS:
        raise InstanceError(f"{where}: both 'lo' and 'hi' are required")
    try:
        return Box(data["lo"], data["hi"])
    except ValueError as exc:
        raise InstanceError(f"{where}: {exc}") from exc


def parse_instance(data: dict) -> InstanceSpec:
    """Build an :class:`InstanceSpec` from a decoded JSON object.

    Parsing is strict: unknown keys are rejected and the bodies table must
    match the declared node count and horizon exactly.
    """
    if not isinstance(data, dict):
        raise InstanceError("instance file must contain a JSON object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise InstanceError(f"unknown keys {sorted(unknown)}")
    missing = _TOP_KEYS - set(data)
    if missing:
        raise InstanceError(f"missing keys {sorted(missing)}")

    dimension = data["dimension"]
    if not isinstance(dimension, int) or isinstance(dimension, bool):
        raise InstanceError("'dimension' must be an integer")
    horizon = data["horizon"]
    if not isinstance(horizon, int) or isinstance(horizon, bool):
        raise InstanceError("'horizon' must be an integer")
    node_count = data["nodes"]
    if not isinstance(node_count, int) or isinstance(node_count, bool):
        raise InstanceError("'nodes' must be an integer")
    rho = data["rho"]
    if not isinstance(rho, (int, float)) or isinstance(rho, bool):
        raise InstanceError("'rho' must be a number")

    edges_raw = data["edges"]
    if not isinstance(edges_raw, list):
        raise InstanceError("'edges' must be a list of [i, j] pairs")
    edges = []
    for e in edges_raw:
        if not (isinstance(e, list) and len(e) == 2):
            raise InstanceError(f"bad edge entry {e!r}")
        edges.append((e[0], e[1]))

    bodies_raw = data["bodies"]
    if not isinstance(bodies_raw, list) or len(bodies_raw) != horizon + 1:
        raise InstanceError(f"'bodies' must be a list of horizon+1 = {horizon + 1} rows")
    bodies = []
    for t, row in enumerate(bodies_raw):
        if not isinstance(row, list) or len(row) != node_count:
            raise InstanceError(f"bodies row {t} must list exactly {node_count} entries")
        parsed_row = []
        for i, entry in enumerate(row):
            if entry is None:
                parsed_row.append(None)
            else:
                parsed_row.append(_parse_box(entry, f"bodies[{t}][{i}]"))
        bodies.append(tuple(parsed_row))

    return InstanceSpec(
        dimension=dimension,
        domain=_parse_box(data["domain"], "domain"),
        horizon=horizon,
        rho=float(rho),
        graph=GraphSpec(node_count=node_count, edges=tuple(edges)),
        bodies=tuple(bodies),
    )


def load_instance(path) -> InstanceSpec:
    """Read and validate an instance file (JSON)."""
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed JSON in {path}: {exc}") from exc
    return parse_instance(data)


def instance_to_dict(spec: InstanceSpec) -> dict:
    """Inverse of :func:`parse_instance`, for writing instance files."""

    def box_dict(b: Box | None):
        if b is None:
            return None
        return {"lo": b.lo.tolist(), "hi": b.hi.tolist()}

    return {
        "dimension": spec.dimension,
        "domain": box_dict(spec.domain),
        "horizon": spec.horizon,
        "rho": spec.rho,
        "nodes": spec.graph.node_count,
        "edges": [list(e) for e in spec.graph.edges],
        "bodies": [[box_dict(b) for b in row] for row in spec.bodies],
    }
