"""Max-min solver, simulator, and verification harness for adversarial
box-chasing games on graphs.

An opponent walks a graph whose nodes carry axis-aligned boxes; a player
must enter each selected box while paying Euclidean movement costs, moving
at most ``rho`` per axis per step.  The package computes the max-min game
value on certified meshes, with the mesh resolutions chosen so the value
error stays inside a user-supplied budget.
"""

from .bounds import (
    DeltaSchedule,
    LipschitzInfo,
    delta_schedule,
    error_bound,
    estimate_l_c,
    estimate_l_theta,
    lipschitz_for_box_class,
    lipschitz_v,
    stage_tails,
)
from .errors import (
    DimensionMismatchError,
    InstanceError,
    InternalInconsistencyError,
    OracleGuardError,
    SimulationError,
)
from .geometry import Box, box_intersect, cost, hausdorff_boxes, nearest_point, reach_box
from .instance import (
    FeasibilityReport,
    GraphSpec,
    InstanceSpec,
    check_feasibility,
    instance_to_dict,
    load_instance,
    neighbors,
    parse_instance,
)
from .mesh import MeshReport, MeshSet, build_meshes, range_query, verify_meshes
from .oracle import NaiveResult, coverage_probe, naive_minimax, sample_hausdorff
from .play import (
    GreedyPlayer,
    OptimalOpponent,
    OptimalPlayer,
    PolicyTables,
    RandomOpponent,
    RandomPlayer,
    Trajectory,
    deviate_opponent,
    deviate_player,
    extract_policies,
    simulate,
)
from .solver import ValueTables, backward_induction, game_value

__version__ = "0.1.0"

__all__ = [
    "Box",
    "DeltaSchedule",
    "DimensionMismatchError",
    "FeasibilityReport",
    "GraphSpec",
    "GreedyPlayer",
    "InstanceError",
    "InstanceSpec",
    "InternalInconsistencyError",
    "LipschitzInfo",
    "MeshReport",
    "MeshSet",
    "NaiveResult",
    "OptimalOpponent",
    "OptimalPlayer",
    "OracleGuardError",
    "PolicyTables",
    "RandomOpponent",
    "RandomPlayer",
    "SimulationError",
    "Trajectory",
    "ValueTables",
    "backward_induction",
    "box_intersect",
    "build_meshes",
    "check_feasibility",
    "cost",
    "coverage_probe",
    "delta_schedule",
    "deviate_opponent",
    "deviate_player",
    "error_bound",
    "estimate_l_c",
    "estimate_l_theta",
    "extract_policies",
    "game_value",
    "hausdorff_boxes",
    "instance_to_dict",
    "lipschitz_for_box_class",
    "lipschitz_v",
    "load_instance",
    "naive_minimax",
    "nearest_point",
    "neighbors",
    "parse_instance",
    "range_query",
    "reach_box",
    "sample_hausdorff",
    "simulate",
    "stage_tails",
    "verify_meshes",
]
