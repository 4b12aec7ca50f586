"""Batch front end.

Subcommands:

  check     feasibility certificate plus the Lipschitz report
  mesh      build and verify the meshes, print counts and coverage slack
  solve     full pipeline: constants, schedule, meshes, tables, game value
  simulate  play one game under selectable strategies
  sweep     solve across a list of error budgets against a known true value
  export    dump value slices and the equilibrium trajectory for plotting

Exit codes: 0 success, 1 validation failure (bad file, infeasible instance),
2 internal inconsistency.  All randomness is controlled by --seed.  When
--out points at a directory, report paths also render figures next to the
delimited output.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from .bounds import DeltaSchedule, delta_schedule, estimate_l_theta, lipschitz_for_box_class
from .errors import InstanceError, InternalInconsistencyError, OracleGuardError, SimulationError
from .instance import InstanceSpec, check_feasibility, load_instance
from .mesh import MeshSet, build_meshes, verify_meshes
from .oracle import naive_minimax
from .play import (
    GreedyPlayer,
    OptimalOpponent,
    OptimalPlayer,
    RandomOpponent,
    RandomPlayer,
    Trajectory,
    deviate_opponent,
    deviate_player,
    extract_policies,
    simulate,
)
from .solver import ValueTables, backward_induction

VALIDATION_FAILURE = 1
INTERNAL_INCONSISTENCY = 2


def _emit(payload: dict) -> None:
    print(json.dumps(payload, sort_keys=True))


def _load(path: str) -> InstanceSpec:
    spec = load_instance(path)
    report = check_feasibility(spec)
    if not report.ok:
        raise InstanceError(
            "instance is infeasible: "
            + json.dumps([v.as_dict() for v in report.violations], sort_keys=True)
        )
    return spec


def _pipeline(
    spec: InstanceSpec, epsilon: float, l_theta_override: float | None
) -> tuple[DeltaSchedule, MeshSet, ValueTables, int]:
    l_c, l_theta = lipschitz_for_box_class(l_theta_override)
    schedule = delta_schedule(epsilon, l_c, l_theta, spec.horizon)
    start = time.perf_counter()
    meshes = build_meshes(spec, schedule)
    tables = backward_induction(spec, meshes)
    wall_ms = int(round((time.perf_counter() - start) * 1000))
    return schedule, meshes, tables, wall_ms


def cmd_check(args) -> int:
    spec = load_instance(args.instance)
    report = check_feasibility(spec)
    l_c, l_theta = lipschitz_for_box_class(args.l_theta_override)
    payload = {
        "feasible": report.ok,
        "violations": [v.as_dict() for v in report.violations],
        "lipschitz": {"l_c": l_c, "l_theta": l_theta},
    }
    if report.ok:
        payload["lipschitz"]["l_theta_estimate"] = estimate_l_theta(
            spec, samples=2000, seed=args.seed
        )
    _emit(payload)
    return 0 if report.ok else VALIDATION_FAILURE


def cmd_mesh(args) -> int:
    spec = _load(args.instance)
    l_c, l_theta = lipschitz_for_box_class(args.l_theta_override)
    schedule = delta_schedule(args.epsilon, l_c, l_theta, spec.horizon)
    meshes = build_meshes(spec, schedule)
    report = verify_meshes(spec, schedule, meshes, seed=args.seed)
    _emit(
        {
            "epsilon": args.epsilon,
            "delta": list(schedule.delta),
            "counts": list(meshes.counts),
            "total": meshes.total_count,
            "verify": report.as_dict(),
        }
    )
    if not report.ok:
        raise InternalInconsistencyError("freshly built meshes failed verification")
    return 0


def _solve_payload(
    spec: InstanceSpec, epsilon: float, schedule, meshes, tables, wall_ms
) -> dict:
    return {
        "epsilon": epsilon,
        "delta": list(schedule.delta),
        "mesh_counts": list(meshes.counts),
        "mesh_total": meshes.total_count,
        "u0": tables.u0,
        "v0": {str(i): v for i, v in sorted(tables.v0.items())},
        "wall_ms": wall_ms,
    }


def cmd_solve(args) -> int:
    spec = _load(args.instance)
    schedule, meshes, tables, wall_ms = _pipeline(spec, args.epsilon, args.l_theta_override)
    payload = _solve_payload(spec, args.epsilon, schedule, meshes, tables, wall_ms)
    if args.oracle:
        reference = naive_minimax(spec, meshes)
        payload["oracle_u0"] = reference.u0
        payload["oracle_match"] = reference.u0 == tables.u0
    if args.dump_tables:
        _write_table_dump(tables, args.dump_tables)
        payload["tables_csv"] = str(args.dump_tables)
    _emit(payload)
    return 0


def _write_table_dump(tables: ValueTables, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "vertex_id", "node", "value", "best_action"])
        for i0 in sorted(tables.v0):
            writer.writerow([0, -1, i0, repr(tables.v0[i0]), tables.best_vertex0[i0]])
        for key in sorted(tables.v):
            t, pid, node = key
            writer.writerow([t, pid, node, repr(tables.v[key]), tables.best_vertex[key]])


def _parse_player(label: str, spec, meshes, policy):
    if label == "optimal":
        return OptimalPlayer(policy)
    if label == "greedy":
        return GreedyPlayer(spec, meshes)
    if label.startswith("deviate:"):
        _, t, k = label.split(":")
        return deviate_player(policy, int(t), int(k))
    if label.startswith("random:"):
        _, seed = label.split(":")
        return RandomPlayer(spec, meshes, int(seed))
    raise InstanceError(f"unknown player strategy {label!r}")


def _parse_opponent(label: str, spec, policy):
    if label == "optimal":
        return OptimalOpponent(policy)
    if label.startswith("deviate:"):
        _, t, k = label.split(":")
        return deviate_opponent(policy, int(t), int(k))
    if label.startswith("random:"):
        _, seed = label.split(":")
        return RandomOpponent(spec, int(seed))
    raise InstanceError(f"unknown opponent strategy {label!r}")


def _write_trajectory_csv(traj: Trajectory, path) -> None:
    d = traj.points.shape[1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "node"] + [f"x{k}" for k in range(d)] + ["step_cost"])
        for t, (node, point) in enumerate(zip(traj.nodes, traj.points)):
            cost = "" if t == 0 else repr(traj.step_costs[t - 1])
            writer.writerow([t, node] + [repr(float(c)) for c in point] + [cost])


def cmd_simulate(args) -> int:
    spec = _load(args.instance)
    schedule, meshes, tables, wall_ms = _pipeline(spec, args.epsilon, args.l_theta_override)
    policy = extract_policies(tables)
    player = _parse_player(args.player, spec, meshes, policy)
    opponent = _parse_opponent(args.opponent, spec, policy)
    traj = simulate(spec, meshes, player, opponent)
    summary = {
        "player": args.player,
        "opponent": args.opponent,
        "epsilon": args.epsilon,
        "u0": tables.u0,
        "total_cost": traj.total_cost,
        "matches_u0": traj.total_cost == tables.u0,
        "nodes": list(traj.nodes),
        "step_costs": list(traj.step_costs),
        "wall_ms": wall_ms,
    }
    for strat, label in ((player, "player"), (opponent, "opponent")):
        note = getattr(strat, "note", None)
        if note:
            summary[f"{label}_note"] = note
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        _write_trajectory_csv(traj, out / "trajectory.csv")
        (out / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=2))
        from . import plots

        if plots.save_trajectory_figure(spec, traj, out / "trajectory.png"):
            summary["figure"] = str(out / "trajectory.png")
    _emit(summary)
    return 0


def run_sweep(
    spec: InstanceSpec,
    epsilons: list[float],
    true_value: float,
    l_theta_override: float | None = None,
) -> list[dict]:
    """One full pipeline per budget, largest first."""
    rows = []
    for eps in sorted(epsilons, reverse=True):
        if not eps > 0:
            raise InstanceError(f"error budgets must be positive, got {eps}")
        schedule, meshes, tables, wall_ms = _pipeline(spec, eps, l_theta_override)
        rows.append(
            {
                "desired_error": eps,
                "actual_error": tables.u0 - true_value,
                "u0": tables.u0,
                "mesh_total": meshes.total_count,
                "wall_ms": wall_ms,
            }
        )
    return rows


def _write_sweep_csv(rows: list[dict], fh) -> None:
    writer = csv.writer(fh)
    writer.writerow(["desired_error", "actual_error", "u0", "mesh_total", "wall_ms"])
    for r in rows:
        writer.writerow(
            [
                repr(r["desired_error"]),
                repr(r["actual_error"]),
                repr(r["u0"]),
                r["mesh_total"],
                r["wall_ms"],
            ]
        )


def cmd_sweep(args) -> int:
    spec = _load(args.instance)
    epsilons = [float(e) for e in args.epsilons.split(",") if e]
    rows = run_sweep(spec, epsilons, args.true_value, args.l_theta_override)
    _write_sweep_csv(rows, sys.stdout)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "sweep.csv", "w", newline="") as fh:
            _write_sweep_csv(rows, fh)
        from . import plots

        plots.save_sweep_figure(rows, out / "sweep.png")
    return 0


def cmd_export(args) -> int:
    spec = _load(args.instance)
    schedule, meshes, tables, _ = _pipeline(spec, args.epsilon, args.l_theta_override)
    policy = extract_policies(tables)
    traj = simulate(spec, meshes, OptimalPlayer(policy), OptimalOpponent(policy))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    d = spec.dimension
    with open(out / "value_slice.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["t", "vertex_id", "node"] + [f"x{k}" for k in range(d)] + ["value", "best_action"]
        )
        for key in sorted(tables.v):
            t, pid, node = key
            point = meshes.vertices[t - 1][pid]
            writer.writerow(
                [t, pid, node]
                + [repr(float(c)) for c in point]
                + [repr(tables.v[key]), tables.best_vertex[key]]
            )
    _write_trajectory_csv(traj, out / "trajectory.csv")

    from . import plots

    figures = []
    if plots.save_trajectory_figure(spec, traj, out / "trajectory.png"):
        figures.append("trajectory.png")
    for t in range(1, spec.horizon + 1):
        for node in spec.nodes_with_body(t):
            name = f"value_t{t}_node{node}.png"
            if plots.save_value_slice_figure(spec, meshes, tables, t, node, out / name):
                figures.append(name)
    _emit({"out": str(out), "u0": tables.u0, "figures": figures})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="boxchase", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, epsilon=False):
        p.add_argument("--instance", required=True, help="instance file (JSON)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--l-theta-override", type=float, default=None)
        if epsilon:
            p.add_argument("--epsilon", type=float, required=True, help="error budget")

    p = sub.add_parser("check", help="feasibility and Lipschitz report")
    common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("mesh", help="build and verify meshes")
    common(p, epsilon=True)
    p.set_defaults(func=cmd_mesh)

    p = sub.add_parser("solve", help="solve the discretized game")
    common(p, epsilon=True)
    p.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)
    p.add_argument("--dump-tables", default=None, help="write the player table as CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("simulate", help="play one game")
    common(p, epsilon=True)
    p.add_argument("--player", default="optimal", help="optimal|greedy|deviate:t:k|random:seed")
    p.add_argument("--opponent", default="optimal", help="optimal|deviate:t:k|random:seed")
    p.add_argument("--out", default=None, help="directory for CSV, summary, and figures")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="desired vs actual error across budgets")
    common(p)
    p.add_argument("--epsilons", required=True, help="comma-separated error budgets")
    p.add_argument(
        "--true-value",
        type=float,
        required=True,
        help="known true game value (0 for nested instances)",
    )
    p.add_argument("--out", default=None, help="directory for CSV and the figure")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", help="value slices and equilibrium trajectory")
    common(p, epsilon=True)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InstanceError, SimulationError, OracleGuardError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return VALIDATION_FAILURE
    except InternalInconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return INTERNAL_INCONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
