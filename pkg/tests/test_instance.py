"""Tests for instance parsing, validation, and the feasibility certifier."""

import json

import numpy as np
import pytest

from boxchase import (
    Box,
    GraphSpec,
    InstanceError,
    InstanceSpec,
    box_intersect,
    check_feasibility,
    instance_to_dict,
    load_instance,
    neighbors,
    parse_instance,
    reach_box,
)


class TestGraph:
    def test_adjacency_lookup(self):
        g = GraphSpec(3, ((0, 1), (1, 2), (2, 0)))
        assert neighbors(g, 0) == (1,)

    def test_self_loop_kept(self):
        g = GraphSpec(2, ((0, 0), (0, 1)))
        assert neighbors(g, 0) == (0, 1)

    def test_empty_neighbor_set(self):
        g = GraphSpec(2, ((0, 1),))
        assert neighbors(g, 1) == ()

    def test_duplicate_edge_rejected(self):
        with pytest.raises(InstanceError):
            GraphSpec(2, ((0, 1), (0, 1)))

    def test_neighbors_consistent_with_edges(self):
        rng = np.random.default_rng(5)
        n = 6
        edges = {(int(i), int(j)) for i, j in rng.integers(0, n, size=(15, 2))}
        g = GraphSpec(n, tuple(sorted(edges)))
        for i in range(n):
            for j in range(n):
                assert (j in neighbors(g, i)) == ((i, j) in edges)


def simple_instance(**overrides):
    kwargs = dict(
        dimension=2,
        domain=Box([0, 0], [1, 1]),
        horizon=1,
        rho=0.5,
        graph=GraphSpec(1, ((0, 0),)),
        bodies=((Box([0.2, 0.2], [0.6, 0.6]),), (Box([0.3, 0.3], [0.7, 0.7]),)),
    )
    kwargs.update(overrides)
    return InstanceSpec(**kwargs)


class TestValidation:
    def test_valid(self):
        simple_instance()

    def test_body_outside_domain(self):
        with pytest.raises(InstanceError, match="not contained"):
            simple_instance(bodies=((Box([0.5, 0.5], [1.5, 1.5]),), (Box([0, 0], [1, 1]),)))

    def test_reachable_node_without_outgoing_edge(self):
        with pytest.raises(InstanceError, match="no outgoing edge"):
            simple_instance(graph=GraphSpec(1, ()))

    def test_reachable_node_without_body(self):
        with pytest.raises(InstanceError, match="no body"):
            simple_instance(
                graph=GraphSpec(2, ((0, 1),)),
                bodies=(
                    (Box([0.2, 0.2], [0.6, 0.6]), None),
                    (None, None),
                ),
            )

    def test_unused_node_may_lack_body(self):
        spec = simple_instance(
            graph=GraphSpec(2, ((0, 0), (1, 0))),
            bodies=(
                (Box([0.2, 0.2], [0.6, 0.6]), None),
                (Box([0.3, 0.3], [0.7, 0.7]), None),
            ),
        )
        assert spec.nodes_with_body(0) == (0,)


class TestFeasibility:
    def test_separated_bodies_violate(self):
        spec = simple_instance(
            rho=0.1,
            bodies=((Box([0, 0], [1, 1]),), (Box([0, 0], [0.05, 0.05]),)),
        )
        report = check_feasibility(spec)
        assert not report.ok
        v = report.violations[0]
        assert (v.t, v.from_node, v.to_node) == (0, 0, 0)
        # worst corner: reach from (1,1) misses the tiny body entirely
        assert v.witness == (1.0, 1.0)

    def test_zero_width_overlap_violates(self):
        spec = InstanceSpec(
            dimension=2,
            domain=Box([0, 0], [2, 1]),
            horizon=1,
            rho=0.1,
            graph=GraphSpec(2, ((0, 1), (1, 1))),
            bodies=(
                (Box([0, 0], [1, 1]), None),
                (None, Box([1.1, 0], [2, 1])),
            ),
        )
        report = check_feasibility(spec)
        assert not report.ok
        v = report.violations[0]
        assert v.axis == 0
        assert v.overlap <= 0.0

    def test_nested_family_passes_with_probe_oracle(self):
        spec = InstanceSpec(
            dimension=2,
            domain=Box([0, 0], [1, 1]),
            horizon=2,
            rho=0.5,
            graph=GraphSpec(1, ((0, 0),)),
            bodies=tuple(
                (Box([0.4 - 0.1 * t] * 2, [0.6 + 0.1 * t] * 2),) for t in range(3)
            ),
        )
        assert check_feasibility(spec).ok
        # independent probe: sampled source points always see a positive-width
        # intersection on every axis
        rng = np.random.default_rng(123)
        for t in range(spec.horizon):
            src = spec.body(t, 0)
            dst = spec.body(t + 1, 0)
            samples = rng.uniform(src.lo, src.hi, size=(10_000, 2))
            for x in samples:
                cut = box_intersect(reach_box(x, spec.rho, spec.domain), dst)
                assert cut is not None
                assert np.all(cut.widths > 0)


class TestJson:
    def payload(self):
        return {
            "dimension": 2,
            "domain": {"lo": [0, 0], "hi": [1, 1]},
            "horizon": 2,
            "rho": 0.5,
            "nodes": 3,
            "edges": [[0, 1], [1, 2], [2, 0]],
            "bodies": [
                [{"lo": [0.1, 0.1], "hi": [0.4, 0.4]}, {"lo": [0.5, 0.5], "hi": [0.9, 0.9]},
                 {"lo": [0.3, 0.3], "hi": [0.8, 0.8]}],
                [{"lo": [0.1, 0.1], "hi": [0.4, 0.4]}, {"lo": [0.5, 0.5], "hi": [0.9, 0.9]},
                 {"lo": [0.3, 0.3], "hi": [0.8, 0.8]}],
                [{"lo": [0.1, 0.1], "hi": [0.4, 0.4]}, {"lo": [0.5, 0.5], "hi": [0.9, 0.9]},
                 {"lo": [0.3, 0.3], "hi": [0.8, 0.8]}],
            ],
        }

    def test_roundtrip(self, tmp_path):
        path = tmp_path / "inst.json"
        path.write_text(json.dumps(self.payload()))
        spec = load_instance(path)
        assert spec.graph.node_count == 3
        assert instance_to_dict(parse_instance(instance_to_dict(spec))) == instance_to_dict(spec)

    def test_unknown_key_rejected(self):
        bad = self.payload()
        bad["extra"] = 1
        with pytest.raises(InstanceError, match="unknown keys"):
            parse_instance(bad)

    def test_unknown_box_key_rejected(self):
        bad = self.payload()
        bad["domain"]["mid"] = [0.5, 0.5]
        with pytest.raises(InstanceError, match="unknown keys"):
            parse_instance(bad)

    def test_row_count_must_match_horizon(self):
        bad = self.payload()
        bad["bodies"] = bad["bodies"][:2]
        with pytest.raises(InstanceError, match="horizon"):
            parse_instance(bad)

    def test_row_length_must_match_nodes(self):
        bad = self.payload()
        bad["bodies"][1] = bad["bodies"][1][:2]
        with pytest.raises(InstanceError, match="exactly 3"):
            parse_instance(bad)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(InstanceError, match="malformed"):
            load_instance(path)
