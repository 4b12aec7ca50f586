"""Lipschitz constants, mesh-resolution schedules, and the certified error
budget that links the two.

For the box class solved here (box bodies, sup-norm reach, 2-norm cost) the
cost constant and the intersection-correspondence constant are both 1.  The
value function at timestep ``t`` then inherits the constant

    L_v(t) = L_c * sum_{k=1}^{T-t+1} (1 + L_Theta)^k,

which decreases toward the horizon, so earlier timesteps need finer meshes.
Given per-timestep resolutions ``delta[0..T]``, the game value computed on
the meshes exceeds the true value by at most

    E(delta) = L_v(1)*delta[0]
             + sum_{tau=1}^{T-1} (L_c + L_v(tau+1)) * delta[tau]
             + L_c * delta[T],

and the schedule construction below splits a target budget ``epsilon`` into
T+1 equal shares of that sum, so the round trip is an identity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import Box, box_intersect, hausdorff_boxes, reach_box
from .instance import InstanceSpec


def lipschitz_for_box_class(l_theta_override: float | None = None) -> tuple[float, float]:
    """Constants (L_c, L_Theta) for the box class; both equal 1.

    ``l_theta_override`` lets callers declare a tighter correspondence
    constant (0 when the reach set always covers the whole body), which
    coarsens the schedule.
    """
    l_theta = 1.0 if l_theta_override is None else float(l_theta_override)
    if l_theta < 0:
        raise ValueError("correspondence constant must be nonnegative")
    return 1.0, l_theta


def lipschitz_v(t: int, l_c: float, l_theta: float, horizon: int) -> float:
    """Value-function Lipschitz constant at timestep ``t`` (1 <= t <= T)."""
    if not 1 <= t <= horizon:
        raise ValueError(f"timestep {t} out of range 1..{horizon}")
    n = horizon - t + 1
    if l_theta == 0.0:
        return l_c * n
    r = 1.0 + l_theta
    return l_c * r * (r**n - 1.0) / (r - 1.0)


@dataclass(frozen=True)
class LipschitzInfo:
    """The constants backing a schedule: L_c, L_Theta, and L_v at t=1..T."""

    l_c: float
    l_theta: float
    l_v: tuple[float, ...]

    @classmethod
    def for_box_class(cls, horizon: int, l_theta_override: float | None = None) -> "LipschitzInfo":
        l_c, l_theta = lipschitz_for_box_class(l_theta_override)
        return cls.compute(l_c, l_theta, horizon)

    @classmethod
    def compute(cls, l_c: float, l_theta: float, horizon: int) -> "LipschitzInfo":
        l_v = tuple(lipschitz_v(t, l_c, l_theta, horizon) for t in range(1, horizon + 1))
        return cls(l_c=l_c, l_theta=l_theta, l_v=l_v)

    def l_v_at(self, t: int) -> float:
        if not 1 <= t <= len(self.l_v):
            raise ValueError(f"timestep {t} out of range 1..{len(self.l_v)}")
        return self.l_v[t - 1]


@dataclass(frozen=True)
class DeltaSchedule:
    """Per-timestep mesh resolutions plus the constants that produced them."""

    epsilon: float
    delta: tuple[float, ...]  # indexed t = 0..T
    lipschitz: LipschitzInfo

    @property
    def horizon(self) -> int:
        return len(self.delta) - 1


def delta_schedule(epsilon: float, l_c: float, l_theta: float, horizon: int) -> DeltaSchedule:
    """Split the error budget ``epsilon`` into T+1 equal stage shares."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if not l_c > 0:
        raise ValueError("cost constant must be positive")
    info = LipschitzInfo.compute(l_c, l_theta, horizon)
    share = horizon + 1
    delta = [epsilon / (share * info.l_v_at(1))]
    for t in range(1, horizon):
        delta.append(epsilon / (share * (l_c + info.l_v_at(t + 1))))
    delta.append(epsilon / (share * l_c))
    return DeltaSchedule(epsilon=epsilon, delta=tuple(delta), lipschitz=info)


def error_bound(delta, l_c: float, l_theta: float, horizon: int) -> float:
    """Certified gap between the mesh game value and the true game value."""
    delta = [float(d) for d in delta]
    if len(delta) != horizon + 1:
        raise ValueError(f"expected {horizon + 1} resolutions, got {len(delta)}")
    if any(d < 0 for d in delta):
        raise ValueError("resolutions must be nonnegative")
    info = LipschitzInfo.compute(l_c, l_theta, horizon)
    total = info.l_v_at(1) * delta[0]
    for tau in range(1, horizon):
        total += (l_c + info.l_v_at(tau + 1)) * delta[tau]
    total += l_c * delta[horizon]
    return total


def stage_tails(delta, l_c: float, l_theta: float, horizon: int) -> tuple[float, ...]:
    """Per-stage tail budgets: entry t-1 bounds how far stage-t mesh values
    may exceed true values (t = 1..T).  The final entry is L_c * delta[T]."""
    delta = [float(d) for d in delta]
    if len(delta) != horizon + 1:
        raise ValueError(f"expected {horizon + 1} resolutions, got {len(delta)}")
    info = LipschitzInfo.compute(l_c, l_theta, horizon)
    tails = [0.0] * horizon
    tails[horizon - 1] = l_c * delta[horizon]
    for t in range(horizon - 1, 0, -1):
        tails[t - 1] = tails[t] + (l_c + info.l_v_at(t + 1)) * delta[t]
    return tuple(tails)


def estimate_l_theta(spec: InstanceSpec, samples: int, seed: int) -> float:
    """Empirical correspondence constant: worst observed ratio of Hausdorff
    motion of reach-and-body intersections to the motion of the base point.

    Advisory only; the certified budget always uses the declared constants.
    """
    rng = np.random.default_rng(seed)
    triples = []
    for t in range(1, spec.horizon + 1):
        for i in spec.nodes_with_body(t - 1):
            for j in spec.graph.neighbors(i):
                if spec.body(t, j) is not None:
                    triples.append((t, i, j))
    if not triples:
        raise ValueError("instance offers no body/edge pairs to sample")
    worst = 0.0
    valid = 0
    for _ in range(samples):
        t, i, j = triples[rng.integers(len(triples))]
        src = spec.body(t - 1, i)
        dst = spec.body(t, j)
        x = rng.uniform(src.lo, src.hi)
        x_alt = rng.uniform(src.lo, src.hi)
        gap = float(np.sqrt(((x - x_alt) ** 2).sum()))
        if gap == 0.0:
            continue
        theta = box_intersect(reach_box(x, spec.rho, spec.domain), dst)
        theta_alt = box_intersect(reach_box(x_alt, spec.rho, spec.domain), dst)
        if theta is None or theta_alt is None:
            continue
        valid += 1
        ratio = hausdorff_boxes(theta, theta_alt) / gap
        if ratio > worst:
            worst = ratio
    if valid == 0:
        raise ValueError("no valid sample pairs; intersections were always empty")
    return worst


def estimate_l_c(domain: Box, samples: int, seed: int) -> float:
    """Empirical cost constant: worst ratio of cost difference to the summed
    endpoint motion, over random point quadruples in the domain."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        x, x_alt, y, y_alt = (rng.uniform(domain.lo, domain.hi) for _ in range(4))
        denom = float(np.sqrt(((x - x_alt) ** 2).sum())) + float(
            np.sqrt(((y - y_alt) ** 2).sum())
        )
        if denom == 0.0:
            continue
        num = abs(
            float(np.sqrt(((x - y) ** 2).sum())) - float(np.sqrt(((x_alt - y_alt) ** 2).sum()))
        )
        ratio = num / denom
        if ratio > worst:
            worst = ratio
    return worst
