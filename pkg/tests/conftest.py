"""Shared game instances and solved pipelines for the test suite.

Everything here is deterministic, and session-scoped fixtures cache the
expensive solves so the acceptance module and the unit modules share work.
"""

import pytest

from boxchase import Box, GraphSpec, InstanceSpec, backward_induction, build_meshes
from boxchase.bounds import delta_schedule


def solve(spec, epsilon, l_theta=1.0):
    schedule = delta_schedule(epsilon, 1.0, l_theta, spec.horizon)
    meshes = build_meshes(spec, schedule)
    tables = backward_induction(spec, meshes)
    return schedule, meshes, tables


@pytest.fixture(scope="session")
def pipeline():
    return solve


@pytest.fixture(scope="session")
def nested_spec():
    """Nested boxes around a common core; the true game value is 0.

    The 1.07 domain width keeps the per-timestep grids from sharing interior
    points, so the discretized values stay strictly positive and the error
    sweep is informative rather than identically zero.
    """
    return InstanceSpec(
        dimension=2,
        domain=Box([0.0, 0.0], [1.07, 1.07]),
        horizon=2,
        rho=0.5,
        graph=GraphSpec(1, ((0, 0),)),
        bodies=tuple(
            (Box([0.43 - 0.11 * t] * 2, [0.57 + 0.11 * t] * 2),) for t in range(3)
        ),
    )


@pytest.fixture(scope="session")
def three_node_spec():
    """Three bodies on three sides of the arena; hopping forces travel.

    The reach radius 0.9 keeps every hop feasible while the body separation
    (0.8 between facing walls) makes the greedy projection measurably worse
    than the solved policy.
    """
    wall_left = Box([0.0, 0.4], [0.2, 0.6])
    wall_right = Box([0.8, 0.4], [1.0, 0.6])
    wall_bottom = Box([0.4, 0.0], [0.6, 0.2])
    return InstanceSpec(
        dimension=2,
        domain=Box([0.0, 0.0], [1.0, 1.0]),
        horizon=2,
        rho=0.9,
        graph=GraphSpec(3, ((0, 1), (0, 2), (1, 0), (1, 2), (2, 0), (2, 1))),
        bodies=tuple((wall_left, wall_right, wall_bottom) for _ in range(3)),
    )


@pytest.fixture(scope="session")
def forced_spec():
    """One forced step of length about 0.98 across a thin corridor."""
    return InstanceSpec(
        dimension=2,
        domain=Box([0.0, 0.0], [1.02, 0.02]),
        horizon=1,
        rho=2.0,
        graph=GraphSpec(1, ((0, 0),)),
        bodies=(
            (Box([0.0, 0.0], [0.02, 0.02]),),
            (Box([1.0, 0.0], [1.02, 0.02]),),
        ),
    )


@pytest.fixture(scope="session")
def stay_zero_spec():
    """Identical bodies every step; staying put is optimal and costs zero."""
    body = Box([0.3, 0.3], [0.7, 0.7])
    return InstanceSpec(
        dimension=2,
        domain=Box([0.0, 0.0], [1.0, 1.0]),
        horizon=1,
        rho=1.0,
        graph=GraphSpec(1, ((0, 0),)),
        bodies=((body,), (body,)),
    )


@pytest.fixture(scope="session")
def oracle_trio():
    """Three instances small enough for full game-tree expansion.

    Each pairs a spec with the error budget that keeps the total mesh
    under 80 vertices.
    """
    forced_hop = InstanceSpec(
        dimension=2,
        domain=Box([0.0, 0.0], [1.0, 1.0]),
        horizon=1,
        rho=2.0,
        graph=GraphSpec(1, ((0, 0),)),
        bodies=((Box([0.0, 0.0], [0.4, 1.0]),), (Box([0.6, 0.0], [1.0, 1.0]),)),
    )
    three_coarse = InstanceSpec(
        dimension=2,
        domain=Box([0.0, 0.0], [1.0, 1.0]),
        horizon=2,
        rho=2.0,
        graph=GraphSpec(3, ((0, 1), (1, 2), (2, 0), (0, 2), (2, 1), (1, 0))),
        bodies=tuple(
            (Box([0, 0], [0.5, 1]), Box([0.5, 0], [1, 1]), Box([0, 0], [1, 0.5]))
            for _ in range(3)
        ),
    )
    two_long = InstanceSpec(
        dimension=2,
        domain=Box([0.0, 0.0], [1.0, 1.0]),
        horizon=3,
        rho=2.0,
        graph=GraphSpec(2, ((0, 1), (1, 0), (0, 0), (1, 1))),
        bodies=tuple((Box([0, 0], [0.3, 1]), Box([0.7, 0], [1, 1])) for _ in range(4)),
    )
    return [
        ("forced-hop", forced_hop, 2.0),
        ("three-coarse", three_coarse, 6.0),
        ("two-long", two_long, 28.0),
    ]


@pytest.fixture(scope="session")
def three_node_solved(three_node_spec):
    return solve(three_node_spec, 0.3)


@pytest.fixture(scope="session")
def nested_solved(nested_spec):
    return solve(nested_spec, 0.2)


@pytest.fixture(scope="session")
def forced_solved(forced_spec):
    return solve(forced_spec, 0.01)
