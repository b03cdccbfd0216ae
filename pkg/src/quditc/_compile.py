"""Shared machinery for the two decomposition back-ends.

Both compilers annihilate the conjugate transpose of the target column by
column with two-level rotations, so that the emitted gates in application
order multiply to (diagonal) . U.  A final conjugation pass folds every
tracked phase (node deposits plus the terminal diagonal) into the gates'
phi parameters, leaving the reconstruction identity

    matrix(sequence) . E_initial . diag(e^{i theta}) == E_final . U

with E_* the embeddings of logical states onto physical levels.
"""
from __future__ import annotations

import math

import numpy as np

from .cost import CostParams, pulse_cost, rotation_cost
from .graph import CouplingGraph, plan_routing
from .phases import conjugated

# Entries below this are treated as already annihilated.
NEGLIGIBLE = 1e-12


def compile_states(graph: CouplingGraph, dim: int) -> list[str]:
    """Logical states addressed by a dim-dimensional unitary, in matrix
    index order.  dim must cover either the computational states or every
    mapped state (ancilla blocks included)."""
    order = graph.state_order()
    if dim == graph.num_computational or dim == graph.num_states:
        return order[:dim]
    raise ValueError(
        f"unitary dim {dim} matches neither the {graph.num_computational} "
        f"computational states nor all {graph.num_states} mapped states"
    )


def annihilation_angles(m: np.ndarray, r: int, r2: int, c: int) -> tuple[float, float]:
    """Rotation parameters that zero entry (r2, c) into entry (r, c)."""
    theta = 2.0 * math.atan2(abs(m[r2, c]), abs(m[r, c]))
    phi = -(math.pi / 2 + np.angle(m[r, c]) - np.angle(m[r2, c]))
    return theta, float(phi)


def apply_rotation_rows(m: np.ndarray, r: int, r2: int, theta: float, phi: float) -> None:
    """Left-multiply m by the two-level rotation on rows (r, r2), in place."""
    c = math.cos(theta / 2)
    s = math.sin(theta / 2)
    a = -1j * np.exp(-1j * phi) * s
    b = -1j * np.exp(1j * phi) * s
    row_r = c * m[r, :] + a * m[r2, :]
    row_r2 = b * m[r, :] + c * m[r2, :]
    m[r, :] = row_r
    m[r2, :] = row_r2


def emit_rotation(graph: CouplingGraph, params: CostParams, state_i, state_j,
                  theta: float, phi: float):
    """Route state_j adjacent to state_i, then emit the phase-adjusted
    rotation.  Returns (gates, new_graph, rotation_cost, routing_cost)."""
    plan = plan_routing(graph, state_i, state_j)
    g = plan.resulting_graph
    la, lb = g.level_of(state_i), g.level_of(state_j)
    rot = g.adjusted_rotation(la, lb, theta, phi)
    gates = list(plan.pulses) + [rot]
    routing = len(plan.pulses) * pulse_cost(params)
    return gates, g, rotation_cost(theta, 1, params), routing


def assemble(initial_graph: CouplingGraph, final_graph: CouplingGraph, gates,
             remaining: np.ndarray, dim: int):
    """Fold node phases and the terminal diagonal into the gate train.

    Returns (sequence, residual_phases, cleaned final graph) satisfying the
    reconstruction identity exactly.
    """
    states = initial_graph.state_order()[:dim]
    delta = np.angle(np.diag(remaining))
    dphase = np.array(final_graph.node_phase, dtype=np.float64)
    for k, state in enumerate(states):
        dphase[final_graph.level_of(state)] += delta[k]
    sequence = tuple(conjugated(g, -dphase) for g in gates)
    theta = np.empty(dim, dtype=np.float64)
    for k, state in enumerate(states):
        lv = initial_graph.level_of(state)
        theta[k] = initial_graph.node_phase[lv] - dphase[lv]
    theta = np.angle(np.exp(1j * theta))
    clean = CouplingGraph(
        final_graph.num_levels,
        final_graph.edges,
        dict(final_graph.logical_map),
        final_graph.ancillas,
        (0.0,) * final_graph.num_levels,
    )
    return sequence, theta, clean


def count_gates(sequence) -> tuple[int, int]:
    """(logical rotations, routing pulses) in a physical sequence."""
    rotations = sum(1 for g in sequence if not getattr(g, "routing", False))
    pulses = len(sequence) - rotations
    return rotations, pulses
