"""Coupling graph: distances, routing plans, the sign-flip rules, and the
master simulation property that pins their semantics."""
import networkx as nx
import numpy as np
import pytest

from quditc.gates import RotationGate, VirtualZGate, reorder_pulse, rotation_matrix, sequence_matrix
from quditc.graph import (
    CouplingGraph,
    apply_graph_rules,
    embedding_matrix,
    graph_from_dict,
    graph_to_dict,
    list_ancillas,
    load_graph,
    mark_ancilla,
    plan_routing,
    save_graph,
)
from quditc.linalg import max_norm


def nx_graph(g: CouplingGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.num_levels))
    h.add_edges_from(g.edges)
    return h


def random_connected_graph(num_levels: int, rng) -> frozenset:
    """Random tree plus a few extra edges."""
    edges = set()
    for node in range(1, num_levels):
        edges.add((int(rng.integers(0, node)), node))
    for _ in range(int(rng.integers(0, 3))):
        a, b = rng.choice(num_levels, size=2, replace=False)
        edges.add((min(int(a), int(b)), max(int(a), int(b))))
    return frozenset(edges)


class TestDistance:
    def test_adjacent_pair(self, path3):
        assert path3.distance(0, 1) == 1

    def test_ancilla_bridge(self, bridged_graph):
        # states |2> and |1> connect only through the ancilla level
        assert bridged_graph.distance("2", "1") == 2

    def test_matches_bfs_oracle(self):
        rng = np.random.default_rng(5)
        for trial in range(20):
            n = int(rng.integers(4, 9))
            edges = random_connected_graph(n, rng)
            g = CouplingGraph(n, edges, {str(k): k for k in range(n)})
            oracle = dict(nx.all_pairs_shortest_path_length(nx_graph(g)))
            for i in range(n):
                for j in range(n):
                    assert g.distance(i, j) == oracle[i][j]

    def test_unmapped_state_rejected(self, path3):
        with pytest.raises(ValueError):
            path3.distance(0, 5)


class TestPlanRouting:
    def test_already_adjacent(self, path3):
        plan = plan_routing(path3, 0, 1)
        assert plan.pulses == ()
        assert plan.resulting_graph == path3

    def test_pulse_count_is_distance_minus_one(self):
        rng = np.random.default_rng(9)
        for trial in range(20):
            n = int(rng.integers(4, 9))
            edges = random_connected_graph(n, rng)
            g = CouplingGraph(n, edges, {str(k): k for k in range(n)})
            i, j = (int(x) for x in rng.choice(n, size=2, replace=False))
            plan = plan_routing(g, i, j)
            assert len(plan.pulses) == g.distance(i, j) - 1
            gf = plan.resulting_graph
            assert gf.is_adjacent(gf.level_of(i), gf.level_of(j))

    def test_only_the_second_state_moves(self, bridged_graph):
        plan = plan_routing(bridged_graph, "2", "1")
        gf = plan.resulting_graph
        assert gf.level_of("2") == bridged_graph.level_of("2")
        assert gf.level_of("1") != bridged_graph.level_of("1")

    def test_edges_never_change(self, bridged_graph):
        plan = plan_routing(bridged_graph, "3", "0")
        assert plan.resulting_graph.edges == bridged_graph.edges

    def test_mapping_stays_injective(self, bridged_graph):
        plan = plan_routing(bridged_graph, "3", "0")
        levels = list(plan.resulting_graph.logical_map.values())
        assert len(set(levels)) == len(levels)

    def test_pulses_have_default_values(self, ring4):
        g = CouplingGraph(4, frozenset({(0, 1), (1, 2), (2, 3)}), {str(k): k for k in range(4)})
        plan = plan_routing(g, 0, 3)
        assert len(plan.pulses) == 2
        for pulse in plan.pulses:
            assert pulse.routing
            assert pulse.theta == pytest.approx(np.pi)
            assert pulse.phi == pytest.approx(-np.pi / 2)

    def test_lexicographic_tie_break(self):
        # two shortest paths from 3 to 0: 3-1-0 and 3-2-0; the pulse must
        # route through level 1
        g = CouplingGraph(
            4, frozenset({(0, 1), (0, 2), (1, 3), (2, 3)}), {str(k): k for k in range(4)}
        )
        plan = plan_routing(g, 0, 3)
        assert len(plan.pulses) == 1
        assert (plan.pulses[0].level_low, plan.pulses[0].level_high) == (1, 3)


def logical_rotation_matrix(role_low: int, role_high: int, theta, phi, dim) -> np.ndarray:
    return rotation_matrix(RotationGate(role_low, role_high, theta, phi), dim)


def intended_operation(raw_gates, graph: CouplingGraph) -> np.ndarray:
    """What a raw reordered sequence is meant to do on the logical states:
    pulses only move content; rotations act on whatever states currently
    sit at their levels; virtual Zs phase the state at their level."""
    order = graph.state_order()
    index_of = {s: k for k, s in enumerate(order)}
    dim = len(order)
    g = graph
    logical = np.eye(dim, dtype=complex)
    for gate in raw_gates:
        if isinstance(gate, VirtualZGate):
            state = g.state_at(gate.level)
            diag = np.ones(dim, dtype=complex)
            diag[index_of[state]] = np.exp(1j * gate.phi)
            logical = np.diag(diag) @ logical
        elif gate.routing:
            g = g.apply_pulse(gate.normalized())
        else:
            ra = index_of[g.state_at(gate.level_low)]
            rb = index_of[g.state_at(gate.level_high)]
            logical = logical_rotation_matrix(ra, rb, gate.theta, gate.phi, dim) @ logical
    return logical


def master_property_error(raw_gates, graph: CouplingGraph) -> float:
    """Simulate the rule-adjusted physical sequence and compare it with the
    intended logical operation composed with the mapping change, up to the
    tracked diagonal."""
    adjusted, g_final = apply_graph_rules(raw_gates, graph)
    order = graph.state_order()
    dim = len(order)
    phys = sequence_matrix(adjusted, graph.num_levels)
    e0 = embedding_matrix(graph, dim)
    ef = embedding_matrix(g_final, dim)
    z0 = np.diag(np.exp(1j * np.array([graph.node_phase[graph.level_of(s)] for s in order])))
    tracked = np.diag(np.exp(1j * np.array(g_final.node_phase)))
    lhs = phys @ e0 @ z0
    rhs = tracked @ ef @ intended_operation(raw_gates, graph)
    return max_norm(lhs - rhs)


def random_raw_sequence(graph: CouplingGraph, rng, length: int):
    """Rotations on random state pairs with routing pulses inserted where
    the pair is not adjacent, plus occasional virtual Zs."""
    order = graph.state_order()
    g = graph
    raw = []
    for _ in range(length):
        if rng.random() < 0.25:
            lvl = int(g.level_of(order[int(rng.integers(len(order)))]))
            raw.append(VirtualZGate(lvl, float(rng.uniform(-np.pi, np.pi))))
            continue
        i, j = (order[int(x)] for x in rng.choice(len(order), size=2, replace=False))
        plan = plan_routing(g, i, j)
        raw.extend(plan.pulses)
        g = plan.resulting_graph
        la, lb = g.level_of(i), g.level_of(j)
        theta = float(rng.uniform(0.2, np.pi - 0.2))
        phi = float(rng.uniform(-np.pi, np.pi))
        raw.append(RotationGate(la, lb, theta, phi))
    return raw


class TestApplyGraphRules:
    def test_trivial_sequence_unchanged(self, path3):
        gates = [RotationGate(0, 1, 0.7, 0.3), RotationGate(1, 2, 1.1, -0.4)]
        adjusted, g = apply_graph_rules(gates, path3)
        assert adjusted == gates
        assert g == path3

    def test_orientation_normalization(self, ring4):
        adjusted, _ = apply_graph_rules([RotationGate(3, 1, 0.9, 0.25)], ring4)
        assert adjusted == [RotationGate(1, 3, 0.9, -0.25)]

    def test_theta_flip_after_pulse_on_shared_level(self, path3):
        # a pulse whose higher level feeds a following gate flips its angle:
        # R(theta, phi') == R(-theta, phi' - pi)
        pulse = reorder_pulse(1, 2)
        gate = RotationGate(0, 2, 0.8, 0.1)
        adjusted, _ = apply_graph_rules([pulse, gate], path3)
        following = adjusted[1]
        mat_adj = rotation_matrix(following, 3)
        mat_flip = rotation_matrix(RotationGate(0, 2, -0.8, following.phi + np.pi), 3)
        assert np.allclose(mat_adj, mat_flip, atol=1e-12)

    def test_virtual_z_recorded_on_graph(self, path3):
        adjusted, g = apply_graph_rules([VirtualZGate(1, 0.6)], path3)
        assert adjusted == []
        assert g.node_phase[1] != 0.0

    def test_master_property_on_random_routed_sequences(self):
        rng = np.random.default_rng(21)
        for trial in range(60):
            n = int(rng.integers(4, 6))
            edges = random_connected_graph(n, rng)
            n_states = int(rng.integers(3, n + 1))
            levels = rng.choice(n, size=n_states, replace=False)
            mapping = {str(k): int(levels[k]) for k in range(n_states)}
            phases = tuple(float(x) for x in rng.uniform(-np.pi, np.pi, size=n))
            g = CouplingGraph(n, edges, mapping, node_phase=phases)
            raw = random_raw_sequence(g, rng, int(rng.integers(2, 6)))
            assert master_property_error(raw, g) < 1e-9

    def test_master_property_with_denormalized_gates(self, ring4):
        raw = [reorder_pulse(1, 2), RotationGate(3, 0, 1.2, 0.5)]
        assert master_property_error(raw, ring4) < 1e-12


class TestAncillas:
    def test_mark_then_list(self, path3):
        g = CouplingGraph(3, frozenset({(0, 1), (1, 2)}), {"0": 0, "1": 1, "a0": 2})
        assert list_ancillas(g) == set()
        g2 = mark_ancilla(g, "a0")
        assert list_ancillas(g2) == {"a0"}
        assert list_ancillas(mark_ancilla(g2, "a0")) == set()

    def test_unmapped_state_rejected(self, path3):
        with pytest.raises(ValueError):
            mark_ancilla(path3, "a7")

    def test_ancilla_used_as_routing_bridge(self, bridged_graph):
        plan = plan_routing(bridged_graph, "2", "1")
        pulse = plan.pulses[0]
        assert bridged_graph.level_of("a0") in (pulse.level_low, pulse.level_high)


class TestValidation:
    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            CouplingGraph(3, frozenset({(0, 0), (1, 2)}), {"0": 0, "1": 1})

    def test_non_injective_rejected(self):
        with pytest.raises(ValueError):
            CouplingGraph(3, frozenset({(0, 1)}), {"0": 0, "1": 0})

    def test_disconnected_mapped_levels_rejected(self):
        with pytest.raises(ValueError):
            CouplingGraph(4, frozenset({(0, 1), (2, 3)}), {"0": 0, "1": 3})

    def test_gapped_computational_states_rejected(self):
        with pytest.raises(ValueError):
            CouplingGraph(3, frozenset({(0, 1), (1, 2)}), {"0": 0, "2": 1})

    def test_routing_may_cross_unmapped_levels(self):
        # levels 0 and 2 mapped, middle level unmapped but usable
        g = CouplingGraph(3, frozenset({(0, 1), (1, 2)}), {"0": 0, "1": 2})
        assert g.distance(0, 1) == 2
        plan = plan_routing(g, 0, 1)
        assert len(plan.pulses) == 1
        assert plan.resulting_graph.level_of("1") == 1


class TestFileFormat:
    def test_round_trip(self, bridged_graph, tmp_path):
        path = tmp_path / "g.json"
        save_graph(bridged_graph, path)
        loaded = load_graph(path)
        assert loaded == bridged_graph

    def test_rejects_malformed(self):
        with pytest.raises(ValueError):
            graph_from_dict({"levels": 3, "edges": [[0, 1]]})

    def test_dict_shape(self, path3):
        doc = graph_to_dict(path3)
        assert doc["levels"] == 3
        assert doc["logical_map"] == {"0": 0, "1": 1, "2": 2}
        assert doc["ancillas"] == []
