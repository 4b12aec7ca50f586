"""Per-timestep vertex sets with certified coverage.

Three coverage requirements drive the construction, for resolutions
``delta[t]``:

  (domain)        every point of the domain has a mesh vertex within
                  ``delta[t]`` in 2-norm, at every timestep;
  (start bodies)  every point of a t=0 body has an in-body vertex within
                  ``delta[0]``;
  (intersections) for every mesh vertex at t-1 inside a body and every
                  neighbor body at t, every point of the corresponding
                  reach-and-body intersection has an in-intersection vertex
                  within ``delta[t]``.

A uniform axis grid with per-axis spacing ``h = delta * sqrt(2/d)`` puts
every point within ``h * sqrt(d) / 2 = delta / sqrt(2)`` of a vertex, which
meets the 2-norm requirement with margin.  The same pitch is used for the
anchored sub-grids laid over bodies and intersections; those grids include
the target box corners, so the worst per-axis gap never exceeds the pitch.

Construction runs forward in time because the intersection grids at ``t``
are anchored on the finished vertex set at ``t-1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .bounds import DeltaSchedule
from .errors import InternalInconsistencyError
from .geometry import Box, box_intersect, reach_box
from .instance import InstanceSpec

_DEDUP_DECIMALS = 12


def _axis_coords(lo: float, hi: float, pitch: float) -> np.ndarray:
    width = hi - lo
    if width <= 0.0:
        return np.array([lo])
    n = int(math.ceil(width / pitch)) + 1
    return np.linspace(lo, hi, n)


def grid_points(box: Box, pitch: float) -> np.ndarray:
    """Vertices of a uniform grid over ``box`` with per-axis spacing at most
    ``pitch``; both corners of every axis are included."""
    axes = [_axis_coords(float(lo), float(hi), pitch) for lo, hi in zip(box.lo, box.hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def coverage_pitch(delta: float, dimension: int) -> float:
    """Axis spacing that keeps every point within ``delta`` of a grid vertex."""
    return delta * math.sqrt(2.0 / dimension)


class _Dedup:
    """Insertion-ordered vertex collector; drops re-inserted coordinates.

    Keys are coordinates rounded to 1e-12, used for identity only; the
    stored vertex keeps its first-seen exact value (dedup, not snapping).
    """

    def __init__(self, dimension: int):
        self._seen: dict[tuple, int] = {}
        self._points: list[np.ndarray] = []
        self._dimension = dimension

    def add_many(self, points: np.ndarray) -> None:
        keys = np.round(points, _DEDUP_DECIMALS)
        for p, key_row in zip(points, keys):
            key = tuple(key_row.tolist())
            if key not in self._seen:
                self._seen[key] = len(self._points)
                self._points.append(p)

    def array(self) -> np.ndarray:
        if not self._points:
            return np.empty((0, self._dimension))
        return np.array(self._points)


@dataclass(frozen=True)
class MeshSet:
    """Immutable vertex sets per timestep plus a uniform-cell spatial index."""

    schedule: DeltaSchedule
    vertices: tuple[np.ndarray, ...]
    cell_sizes: tuple[float, ...]
    cells: tuple[dict, ...]

    @classmethod
    def from_vertex_arrays(cls, schedule: DeltaSchedule, arrays) -> "MeshSet":
        arrays = tuple(np.asarray(a, dtype=float) for a in arrays)
        dimension = arrays[0].shape[1]
        sizes = tuple(
            coverage_pitch(schedule.delta[t], dimension) for t in range(len(arrays))
        )
        cells = tuple(_build_cells(a, s) for a, s in zip(arrays, sizes))
        for a in arrays:
            a.setflags(write=False)
        return cls(schedule=schedule, vertices=arrays, cell_sizes=sizes, cells=cells)

    def count(self, t: int) -> int:
        return self.vertices[t].shape[0]

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(v.shape[0] for v in self.vertices)

    @property
    def total_count(self) -> int:
        return sum(self.counts)

    def point(self, t: int, vid: int) -> np.ndarray:
        return self.vertices[t][vid]


def _build_cells(points: np.ndarray, cell_size: float) -> dict:
    cells: dict[tuple, list[int]] = {}
    if points.size == 0:
        return cells
    keys = np.floor(points / cell_size).astype(np.int64)
    for vid, key_row in enumerate(keys):
        cells.setdefault(tuple(key_row.tolist()), []).append(vid)
    return {k: np.array(v, dtype=np.int64) for k, v in cells.items()}


def build_meshes(spec: InstanceSpec, schedule: DeltaSchedule) -> MeshSet:
    """Construct the per-timestep vertex sets satisfying all three coverage
    requirements.  Raises :class:`InternalInconsistencyError` if an
    intersection that feasibility certified as nonempty comes out empty."""
    if schedule.horizon != spec.horizon:
        raise ValueError("schedule horizon does not match the instance")
    d = spec.dimension
    pitches = [coverage_pitch(delta, d) for delta in schedule.delta]

    arrays: list[np.ndarray] = []
    for t in range(spec.horizon + 1):
        dedup = _Dedup(d)
        dedup.add_many(grid_points(spec.domain, pitches[t]))
        if t == 0:
            for i in spec.nodes_with_body(0):
                dedup.add_many(grid_points(spec.body(0, i), pitches[0]))
        else:
            prev = arrays[t - 1]
            for i_prev in spec.nodes_with_body(t - 1):
                body_prev = spec.body(t - 1, i_prev)
                inside = np.flatnonzero(
                    ((prev >= body_prev.lo) & (prev <= body_prev.hi)).all(axis=1)
                )
                for i_t in spec.graph.neighbors(i_prev):
                    body_t = spec.body(t, i_t)
                    if body_t is None:
                        continue
                    seen_boxes: set[tuple] = set()
                    for vid in inside:
                        hood = reach_box(prev[vid], spec.rho, spec.domain)
                        cut = box_intersect(hood, body_t)
                        if cut is None:
                            raise InternalInconsistencyError(
                                f"empty reach/body intersection at t={t}, "
                                f"vertex {int(vid)}, node {i_t} despite feasibility"
                            )
                        key = (
                            tuple(np.round(cut.lo, _DEDUP_DECIMALS).tolist()),
                            tuple(np.round(cut.hi, _DEDUP_DECIMALS).tolist()),
                        )
                        if key in seen_boxes:
                            continue
                        seen_boxes.add(key)
                        dedup.add_many(grid_points(cut, pitches[t]))
        arrays.append(dedup.array())

    return MeshSet.from_vertex_arrays(schedule, arrays)


def range_query(meshes: MeshSet, t: int, box: Box) -> np.ndarray:
    """Ids of all timestep-``t`` vertices inside the closed box, ascending.

    Uses the cell index when the box spans few cells, otherwise falls back
    to a full scan; both paths apply the same exact membership test.
    """
    if not 0 <= t < len(meshes.vertices):
        raise ValueError(f"invalid timestep {t}")
    points = meshes.vertices[t]
    if points.size == 0:
        return np.empty(0, dtype=np.int64)

    cs = meshes.cell_sizes[t]
    c_lo = np.floor(box.lo / cs).astype(np.int64)
    c_hi = np.floor(box.hi / cs).astype(np.int64)
    n_cells = int(np.prod(c_hi - c_lo + 1))

    if n_cells > 2 * points.shape[0] + 16:
        candidates = np.arange(points.shape[0], dtype=np.int64)
    else:
        cells = meshes.cells[t]
        chunks = []
        for key in itertools.product(*(range(a, b + 1) for a, b in zip(c_lo, c_hi))):
            hit = cells.get(key)
            if hit is not None:
                chunks.append(hit)
        if not chunks:
            return np.empty(0, dtype=np.int64)
        candidates = np.concatenate(chunks)

    pts = points[candidates]
    keep = ((pts >= box.lo) & (pts <= box.hi)).all(axis=1)
    return np.sort(candidates[keep])


@dataclass(frozen=True)
class MeshReport:
    """Probe results for the three coverage criteria.

    ``worst`` maps criterion name to the largest observed nearest-vertex
    distance; ``slack`` maps it to the smallest margin ``delta - worst``
    (negative means the criterion failed at some probe).
    """

    ok: bool
    worst: dict
    slack: dict
    failures: tuple[str, ...]
    details: dict

    def as_dict(self) -> dict:
        return {
            "ok": self.ok,
            "worst": self.worst,
            "slack": self.slack,
            "failures": list(self.failures),
            "details": self.details,
        }


def _probe_points(box: Box, pitch: float, cap: int, rng: np.random.Generator) -> np.ndarray:
    pts = grid_points(box, pitch)
    if pts.shape[0] > cap:
        keep = rng.choice(pts.shape[0], size=cap, replace=False)
        pts = np.concatenate([pts[np.sort(keep)], box.corners()])
    return pts


def _nearest_in_set(probes: np.ndarray, verts: np.ndarray) -> np.ndarray:
    # Max sizes here are small (probes capped), plain broadcasting is fine.
    diff = probes[:, None, :] - verts[None, :, :]
    return np.sqrt((diff**2).sum(axis=2)).min(axis=1)


def verify_meshes(
    spec: InstanceSpec,
    schedule: DeltaSchedule,
    meshes: MeshSet,
    *,
    domain_samples: int = 10_000,
    probe_cap: int = 256,
    seed: int = 0,
) -> MeshReport:
    """Independent probe of the three coverage criteria by dense sampling.

    Probes at pitch ``delta/4`` (capped per region, seeded subsample), so a
    report is evidence, not proof; the construction itself carries the
    guarantee.  Failures name the timestep, the predecessor vertex, and the
    node of the uncovered intersection.
    """
    from scipy.spatial import cKDTree

    rng = np.random.default_rng(seed)
    T = spec.horizon
    failures: list[str] = []
    details: dict = {"domain": [], "bodies": [], "intersections": []}

    # Criterion: whole-domain coverage at every timestep.
    worst_domain = 0.0
    slack_domain = math.inf
    for t in range(T + 1):
        tree = cKDTree(meshes.vertices[t])
        probes = rng.uniform(spec.domain.lo, spec.domain.hi, size=(domain_samples, spec.dimension))
        dist, _ = tree.query(probes)
        w = float(dist.max())
        details["domain"].append({"t": t, "worst": w, "delta": schedule.delta[t]})
        worst_domain = max(worst_domain, w)
        slack_domain = min(slack_domain, schedule.delta[t] - w)
        if w > schedule.delta[t]:
            failures.append(f"domain coverage failed at t={t}: {w} > {schedule.delta[t]}")

    # Criterion: in-body coverage of every start body.
    worst_body = 0.0
    slack_body = math.inf
    for i in spec.nodes_with_body(0):
        body = spec.body(0, i)
        in_body = range_query(meshes, 0, body)
        probes = _probe_points(body, schedule.delta[0] / 4.0, probe_cap, rng)
        if in_body.size == 0:
            failures.append(f"start body of node {i} holds no mesh vertex")
            continue
        w = float(_nearest_in_set(probes, meshes.vertices[0][in_body]).max())
        details["bodies"].append({"node": i, "worst": w, "delta": schedule.delta[0]})
        worst_body = max(worst_body, w)
        slack_body = min(slack_body, schedule.delta[0] - w)
        if w > schedule.delta[0]:
            failures.append(f"start-body coverage failed at node {i}: {w} > {schedule.delta[0]}")

    # Criterion: in-intersection coverage for every predecessor vertex and
    # neighbor body.  Identical intersection boxes are probed once.
    worst_cut = 0.0
    slack_cut = math.inf
    for t in range(1, T + 1):
        delta_t = schedule.delta[t]
        for i_prev in spec.nodes_with_body(t - 1):
            inside = range_query(meshes, t - 1, spec.body(t - 1, i_prev))
            for i_t in spec.graph.neighbors(i_prev):
                body_t = spec.body(t, i_t)
                if body_t is None:
                    continue
                seen: dict[tuple, int] = {}
                pair_worst = 0.0
                for vid in inside:
                    hood = reach_box(meshes.vertices[t - 1][vid], spec.rho, spec.domain)
                    cut = box_intersect(hood, body_t)
                    if cut is None:
                        failures.append(
                            f"intersection empty at t={t}, vertex {int(vid)}, node {i_t}"
                        )
                        continue
                    key = (
                        tuple(np.round(cut.lo, _DEDUP_DECIMALS).tolist()),
                        tuple(np.round(cut.hi, _DEDUP_DECIMALS).tolist()),
                    )
                    if key in seen:
                        continue
                    seen[key] = int(vid)
                    in_cut = range_query(meshes, t, cut)
                    if in_cut.size == 0:
                        failures.append(
                            f"intersection holds no vertex at t={t}, "
                            f"vertex {int(vid)}, node {i_t}"
                        )
                        continue
                    probes = _probe_points(cut, delta_t / 4.0, probe_cap, rng)
                    w = float(_nearest_in_set(probes, meshes.vertices[t][in_cut]).max())
                    pair_worst = max(pair_worst, w)
                    if w > delta_t:
                        failures.append(
                            f"intersection coverage failed at t={t}, "
                            f"vertex {int(vid)}, node {i_t}: {w} > {delta_t}"
                        )
                details["intersections"].append(
                    {"t": t, "from_node": i_prev, "to_node": i_t, "worst": pair_worst,
                     "delta": delta_t}
                )
                worst_cut = max(worst_cut, pair_worst)
                slack_cut = min(slack_cut, delta_t - pair_worst)

    worst = {"domain": worst_domain, "bodies": worst_body, "intersections": worst_cut}
    slack = {
        "domain": slack_domain,
        "bodies": slack_body if slack_body is not math.inf else None,
        "intersections": slack_cut if slack_cut is not math.inf else None,
    }
    return MeshReport(
        ok=not failures, worst=worst, slack=slack, failures=tuple(failures), details=details
    )
