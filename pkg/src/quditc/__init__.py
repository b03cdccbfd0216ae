"""quditc: compile single-qudit unitaries into two-level rotations under
energy-coupling-graph constraints."""

from .adaptive import (
    BatchItem,
    CompilationResult,
    NoSolutionError,
    SearchConfig,
    SearchStats,
    adaptive_compile,
    compile_batch,
)
from .clifford import CliffordSpec, generator_set, random_clifford, random_cliffords
from .cost import (
    CostBreakdown,
    CostParams,
    gate_cost,
    pulse_cost,
    register_cost_model,
    rotation_cost,
    sequence_cost,
)
from .gates import (
    Gate,
    RotationGate,
    VirtualZGate,
    gate_matrix,
    load_sequence,
    reorder_pulse,
    rotation_matrix,
    save_sequence,
    sequence_matrix,
    virtual_z_matrix,
)
from .graph import (
    CouplingGraph,
    RoutingPlan,
    apply_graph_rules,
    embedding_matrix,
    list_ancillas,
    load_graph,
    mark_ancilla,
    plan_routing,
    save_graph,
)
from .linalg import (
    DEFAULT_TOL,
    equal_up_to_global_phase,
    is_diagonal,
    is_unitary,
    load_unitary,
    max_norm,
    multiply,
    save_unitary,
)
from .phases import canonicalize, commute_through, sweep_phases
from .qr import QrResult, qr_cost_bound, qr_decompose
from .verify import reconstruction_error, verify_result, verify_sequence_document

__version__ = "0.1.0"

__all__ = [
    "BatchItem",
    "CliffordSpec",
    "CompilationResult",
    "CostBreakdown",
    "CostParams",
    "CouplingGraph",
    "DEFAULT_TOL",
    "Gate",
    "NoSolutionError",
    "QrResult",
    "RotationGate",
    "RoutingPlan",
    "SearchConfig",
    "SearchStats",
    "VirtualZGate",
    "adaptive_compile",
    "apply_graph_rules",
    "canonicalize",
    "commute_through",
    "compile_batch",
    "embedding_matrix",
    "equal_up_to_global_phase",
    "gate_cost",
    "gate_matrix",
    "generator_set",
    "is_diagonal",
    "is_unitary",
    "list_ancillas",
    "load_graph",
    "load_sequence",
    "load_unitary",
    "mark_ancilla",
    "max_norm",
    "multiply",
    "plan_routing",
    "pulse_cost",
    "qr_cost_bound",
    "qr_decompose",
    "random_clifford",
    "random_cliffords",
    "reconstruction_error",
    "register_cost_model",
    "reorder_pulse",
    "rotation_cost",
    "rotation_matrix",
    "save_graph",
    "save_sequence",
    "save_unitary",
    "sequence_cost",
    "sequence_matrix",
    "sweep_phases",
    "verify_result",
    "verify_sequence_document",
    "virtual_z_matrix",
]
