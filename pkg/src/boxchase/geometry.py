"""Axis-aligned box primitives for the chasing game.

Points are plain float64 numpy arrays.  A :class:`Box` is the closed
Cartesian product of per-axis intervals; zero-width intervals are allowed,
so a box may be degenerate but never empty.  All endpoint comparisons are
exact, tolerances belong to callers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError


def as_point(coords) -> np.ndarray:
    """Coerce a coordinate sequence to a finite 1-d float array."""
    p = np.asarray(coords, dtype=float)
    if p.ndim != 1:
        raise ValueError(f"expected a flat coordinate vector, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise ValueError("point coordinates must be finite")
    return p


def _require_same_dimension(da: int, db: int) -> None:
    if da != db:
        raise DimensionMismatchError(f"dimension mismatch: {da} vs {db}")


@dataclass(frozen=True, eq=False)
class Box:
    """Closed box ``[lo[k], hi[k]]`` on every axis ``k``."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = as_point(self.lo)
        hi = as_point(self.hi)
        _require_same_dimension(lo.size, hi.size)
        if np.any(lo > hi):
            raise ValueError(f"box endpoints out of order: lo={lo}, hi={hi}")
        lo.setflags(write=False)
        hi.setflags(write=False)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dimension(self) -> int:
        return self.lo.size

    @property
    def widths(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    def contains(self, p) -> bool:
        p = np.asarray(p, dtype=float)
        _require_same_dimension(p.size, self.dimension)
        return bool(np.all(p >= self.lo) and np.all(p <= self.hi))

    def contains_box(self, other: "Box") -> bool:
        _require_same_dimension(other.dimension, self.dimension)
        return bool(np.all(other.lo >= self.lo) and np.all(other.hi <= self.hi))

    def corners(self) -> np.ndarray:
        """All 2^d corner points, in lexicographic (lo, hi) order per axis."""
        return np.array(list(itertools.product(*zip(self.lo, self.hi))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Box):
            return NotImplemented
        return np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi)


def box_intersect(a: Box, b: Box) -> Box | None:
    """Exact intersection of two boxes, or ``None`` when they are disjoint.

    Touching boxes intersect in a degenerate (zero-width) box, which is a
    valid closed set here.
    """
    _require_same_dimension(a.dimension, b.dimension)
    lo = np.maximum(a.lo, b.lo)
    hi = np.minimum(a.hi, b.hi)
    if np.any(lo > hi):
        return None
    return Box(lo, hi)


def nearest_point(p, b: Box) -> tuple[np.ndarray, float]:
    """Closest point of ``b`` to ``p`` (per-axis clamp) and its 2-norm distance."""
    p = as_point(p)
    _require_same_dimension(p.size, b.dimension)
    q = np.clip(p, b.lo, b.hi)
    return q, float(np.sqrt(((p - q) ** 2).sum()))


def cost(x, y) -> float:
    """Movement cost between two points: the Euclidean distance."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    _require_same_dimension(x.size, y.size)
    return float(np.sqrt(((x - y) ** 2).sum()))


def hausdorff_boxes(a: Box, b: Box) -> float:
    """Exact Hausdorff distance between two boxes under the 2-norm.

    The distance from a point to a convex set is a convex function, so its
    supremum over a box is attained at one of the 2^d corners.  Evaluating
    the clamp distance at every corner of each box is therefore exact.
    """
    _require_same_dimension(a.dimension, b.dimension)
    worst = 0.0
    for src, dst in ((a, b), (b, a)):
        for corner in src.corners():
            q = np.clip(corner, dst.lo, dst.hi)
            d = float(np.sqrt(((corner - q) ** 2).sum()))
            if d > worst:
                worst = d
    return worst


def reach_box(x, rho: float, domain: Box) -> Box:
    """One-step reachable set: the sup-norm ball of radius ``rho`` around
    ``x``, clipped to the domain.  Always contains ``x``."""
    x = as_point(x)
    _require_same_dimension(x.size, domain.dimension)
    if rho < 0:
        raise ValueError("reach radius must be nonnegative")
    if not domain.contains(x):
        raise ValueError(f"reach center {x} lies outside the domain")
    return Box(np.maximum(x - rho, domain.lo), np.minimum(x + rho, domain.hi))
