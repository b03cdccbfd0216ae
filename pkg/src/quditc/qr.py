"""Fixed-sequence baseline decomposition.

Works like a Givens QR elimination with a sequence that is fixed a
priori: columns left to right, sub-diagonal entries bottom to top, each
eliminated with a rotation on the adjacent index pair (r-1, r).  Where
the coupling graph lacks the needed edge, reordering pulses are inserted
and inverted again right after the rotation, so the logical placement is
restored after every step.
"""
from __future__ import annotations

import numpy as np

from ._compile import (
    NEGLIGIBLE,
    annihilation_angles,
    apply_rotation_rows,
    assemble,
    compile_states,
    count_gates,
    emit_rotation,
)
from .cost import CostParams, pulse_cost
from .graph import CouplingGraph
from .linalg import as_matrix, is_diagonal, is_unitary

from dataclasses import dataclass


@dataclass(frozen=True, eq=False)
class QrResult:
    sequence: tuple
    residual_phases: np.ndarray
    total_cost: float
    initial_graph: CouplingGraph
    final_graph: CouplingGraph

    @property
    def rotation_count(self) -> int:
        return count_gates(self.sequence)[0]

    @property
    def pulse_count(self) -> int:
        return count_gates(self.sequence)[1]


def qr_decompose(u, graph: CouplingGraph, params: CostParams = CostParams()) -> QrResult:
    u = as_matrix(u)
    if not is_unitary(u, 1e-9):
        raise ValueError("input matrix is not unitary (tol 1e-9)")
    dim = u.shape[0]
    states = compile_states(graph, dim)

    m = u.conj().T.copy()
    g = graph
    gates = []
    total = 0.0
    undo_cost = pulse_cost(params)

    for c in range(dim):
        for r2 in range(dim - 1, c, -1):
            if abs(m[r2, c]) < NEGLIGIBLE:
                continue
            r = r2 - 1
            theta, phi = annihilation_angles(m, r, r2, c)
            step_gates, g, rot_cost, routing = emit_rotation(
                g, params, states[r], states[r2], theta, phi
            )
            n_pulses = len(step_gates) - 1
            gates.extend(step_gates)
            total += rot_cost + routing
            apply_rotation_rows(m, r, r2, theta, phi)
            # Undo the routing so the fixed sequence always sees the
            # original placement.
            for pulse in reversed(step_gates[:n_pulses]):
                inv = pulse.inverse()
                gates.append(inv)
                g = g.apply_pulse(inv)
                total += undo_cost

    if not is_diagonal(m, 1e-8):
        raise ValueError("elimination did not terminate in a diagonal")
    sequence, theta_res, g_final = assemble(graph, g, gates, m, dim)
    return QrResult(sequence, theta_res, total, graph, g_final)


def qr_cost_bound(u, graph: CouplingGraph, params: CostParams = CostParams()) -> float:
    """Total cost of the fixed decomposition, used as the adaptive search's
    budget."""
    return qr_decompose(u, graph, params).total_cost
