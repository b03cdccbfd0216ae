"""Reconstruction checks for compilation results.

A result reconstructs its target when

    matrix(sequence) . E_initial . diag(e^{i theta}) == E_final . U

up to a global phase, where E_initial / E_final embed the logical states
onto their physical levels before and after the sequence.  With no
routing (or with all routing undone) and an identity placement this is
the plain  matrix(sequence) . diag(e^{i theta}) == U.
"""
from __future__ import annotations

import numpy as np

from .gates import sequence_matrix
from .graph import CouplingGraph, embedding_matrix
from .linalg import equal_up_to_global_phase, max_norm


def reconstruction_error(u: np.ndarray, sequence, residual_phases,
                         initial_graph: CouplingGraph,
                         final_graph: CouplingGraph) -> float:
    dim = u.shape[0]
    phys = sequence_matrix(sequence, initial_graph.num_levels)
    lhs = phys @ embedding_matrix(initial_graph, dim) @ np.diag(np.exp(1j * np.asarray(residual_phases)))
    rhs = embedding_matrix(final_graph, dim) @ u
    return max_norm(lhs - rhs)


def verify_result(u: np.ndarray, result, tol: float = 1e-8) -> bool:
    """Check a QrResult/CompilationResult against its target unitary."""
    dim = u.shape[0]
    phys = sequence_matrix(result.sequence, result.initial_graph.num_levels)
    lhs = phys @ embedding_matrix(result.initial_graph, dim) \
        @ np.diag(np.exp(1j * np.asarray(result.residual_phases)))
    rhs = embedding_matrix(result.final_graph, dim) @ u
    return equal_up_to_global_phase(lhs, rhs, tol)


def embedding_from_map(mapping: dict, num_levels: int, dim: int) -> np.ndarray:
    """Embedding matrix from a plain state->level dict (sequence files)."""
    from .graph import canonical_state_order

    order = canonical_state_order(mapping.keys())
    if dim > len(order):
        raise ValueError(f"dim {dim} exceeds mapped state count {len(order)}")
    emb = np.zeros((num_levels, dim), dtype=np.complex128)
    for k, state in enumerate(order[:dim]):
        emb[int(mapping[state]), k] = 1.0
    return emb


def verify_sequence_document(u: np.ndarray, doc: dict, tol: float = 1e-8) -> bool:
    """Check a sequence file document against a target unitary.

    The document's "dim" is the physical level count; optional
    "initial_map"/"final_map" give the state placements (identity is
    assumed when absent, which requires dim == the unitary's dimension).
    """
    from .gates import sequence_from_dict

    gates, num_levels, phases = sequence_from_dict(doc)
    dim = u.shape[0]
    if phases is None:
        phases = np.zeros(dim)
    if len(phases) != dim:
        raise ValueError(f"virtual_phases length {len(phases)} != unitary dim {dim}")
    ident = {str(k): k for k in range(dim)}
    init_map = doc.get("initial_map", ident)
    final_map = doc.get("final_map", init_map)
    e0 = embedding_from_map(init_map, num_levels, dim)
    ef = embedding_from_map(final_map, num_levels, dim)
    phys = sequence_matrix(gates, num_levels)
    lhs = phys @ e0 @ np.diag(np.exp(1j * np.asarray(phases)))
    return equal_up_to_global_phase(lhs, ef @ u, tol)
