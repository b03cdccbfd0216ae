"""Adaptive decomposition: depth-first search over two-level rotation
choices with routing-aware costs and a hard cost limit.

Each node holds the remaining matrix, a coupling-graph snapshot, and the
cost so far.  Children annihilate one entry of one column; a child is
kept only while the path stays under the cost limit (by default a factor
of the fixed baseline's cost).  Routing pulses are not uncomputed, so
the logical placement drifts with the search; this is what lets the
search exploit placements the fixed sequence cannot.

By default the incumbent is seeded with a replay of the fixed elimination
ladder, so the search starts from a complete decomposition and spends its
node budget purely on improving it.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

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
from .cost import CostParams, pulse_cost, rotation_cost
from .graph import CouplingGraph, _topology
from .linalg import as_matrix, is_diagonal, is_unitary
from .qr import qr_cost_bound


@dataclass(frozen=True)
class SearchConfig:
    cost_limit_factor: float = 1.1
    cost_limit: float | None = None     # absolute override of the factor
    threshold: float = 1e-8
    diag_tol: float = 1e-9
    max_nodes: int = 1_000_000
    return_first: bool = False
    sort_children: bool = False
    max_depth: int | None = None        # default: d(d-1)/2 + d
    warm_start: bool = True             # seed the incumbent with the fixed ladder

    def __post_init__(self):
        if self.cost_limit is None and self.cost_limit_factor < 1.0:
            raise ValueError("cost_limit_factor must be >= 1 unless an absolute limit is given")
        if self.threshold <= 0 or self.diag_tol <= 0:
            raise ValueError("threshold and diag_tol must be positive")


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    max_depth: int = 0
    solutions_found: int = 0
    cost_limit: float = 0.0
    wall_time_ms: float = 0.0


@dataclass(frozen=True, eq=False)
class CompilationResult:
    sequence: tuple
    residual_phases: np.ndarray
    total_cost: float
    stats: SearchStats
    initial_graph: CouplingGraph
    final_graph: CouplingGraph

    @property
    def rotation_count(self) -> int:
        return count_gates(self.sequence)[0]

    @property
    def pulse_count(self) -> int:
        return count_gates(self.sequence)[1]


class NoSolutionError(RuntimeError):
    """Search exhausted its budget without a complete decomposition."""

    def __init__(self, message: str, stats: SearchStats):
        super().__init__(message)
        self.stats = stats


class _StopSearch(Exception):
    pass


def _ladder_replay(m0, graph, states, params):
    """Replay the fixed adjacent-index elimination ladder through the
    one-way-routing emitter.  Where every index pair sits on a coupling this
    costs exactly the fixed baseline, giving the search a complete incumbent
    from the start."""
    m = m0.copy()
    g = graph
    gates = []
    cost = 0.0
    dim = m.shape[0]
    for c in range(dim):
        for r2 in range(dim - 1, c, -1):
            if abs(m[r2, c]) < NEGLIGIBLE:
                continue
            theta, phi = annihilation_angles(m, r2 - 1, r2, c)
            step_gates, g, rot_cost, routing = emit_rotation(
                g, params, states[r2 - 1], states[r2], theta, phi
            )
            gates.extend(step_gates)
            cost += rot_cost + routing
            apply_rotation_rows(m, r2 - 1, r2, theta, phi)
    return cost, gates, g, m


class _Search:
    def __init__(self, states, config, params, limit):
        self.states = states
        self.config = config
        self.params = params
        self.limit = limit
        self.pulse_cost = pulse_cost(params)
        self.best = None  # (cost, gates, graph, matrix)
        self.stats = SearchStats(cost_limit=limit)
        dim = len(states)
        self.depth_cap = config.max_depth if config.max_depth is not None \
            else dim * (dim - 1) // 2 + dim
        self.triples = [
            (c, r, r2)
            for c in range(dim)
            for r in range(c, dim)
            for r2 in range(r + 1, dim)
        ]

    def current_limit(self) -> float:
        return self.best[0] if self.best is not None else self.limit

    def expand(self, m, graph, gates, cost, depth):
        if self.stats.nodes_expanded >= self.config.max_nodes:
            raise _StopSearch
        self.stats.nodes_expanded += 1
        self.stats.max_depth = max(self.stats.max_depth, depth)

        dist_table = _topology(graph.num_levels, graph.edges)[1]
        levels = [graph.logical_map[s] for s in self.states]
        children = []
        for c, r, r2 in self.triples:
            if abs(m[r2, c]) <= self.config.threshold:
                continue
            theta, phi = annihilation_angles(m, r, r2, c)
            dist = dist_table[levels[r], levels[r2]]
            step = (dist - 1) * self.pulse_cost + rotation_cost(theta, 1, self.params)
            if cost + step >= self.current_limit():
                continue
            children.append((step, c, r, r2, theta, phi))
        if self.config.sort_children:
            children.sort()

        for step, c, r, r2, theta, phi in children:
            if cost + step >= self.current_limit():
                continue  # incumbent may have improved mid-loop
            step_gates, g2, rot_cost, routing = emit_rotation(
                graph, self.params, self.states[r], self.states[r2], theta, phi
            )
            m2 = m.copy()
            apply_rotation_rows(m2, r, r2, theta, phi)
            cost2 = cost + rot_cost + routing
            gates2 = gates + step_gates
            if is_diagonal(m2, self.config.diag_tol):
                self.stats.solutions_found += 1
                if self.best is None or cost2 < self.best[0]:
                    self.best = (cost2, gates2, g2, m2)
                if self.config.return_first:
                    raise _StopSearch
            elif depth + 1 < self.depth_cap:
                self.expand(m2, g2, gates2, cost2, depth + 1)


def adaptive_compile(u, graph: CouplingGraph, config: SearchConfig = SearchConfig(),
                     params: CostParams = CostParams()) -> CompilationResult:
    u = as_matrix(u)
    if not is_unitary(u, 1e-9):
        raise ValueError("input matrix is not unitary (tol 1e-9)")
    dim = u.shape[0]
    states = compile_states(graph, dim)
    t0 = time.perf_counter()

    m0 = u.conj().T.copy()
    if is_diagonal(m0, config.diag_tol):
        stats = SearchStats(cost_limit=0.0)
        sequence, theta, g_final = assemble(graph, graph, [], m0, dim)
        stats.wall_time_ms = (time.perf_counter() - t0) * 1000.0
        return CompilationResult(sequence, theta, 0.0, stats, graph, g_final)

    limit = config.cost_limit if config.cost_limit is not None \
        else config.cost_limit_factor * qr_cost_bound(u, graph, params)
    search = _Search(states, config, params, limit)
    if config.warm_start:
        wcost, wgates, wgraph, wm = _ladder_replay(m0, graph, states, params)
        if wcost < limit and is_diagonal(wm, config.diag_tol):
            search.best = (wcost, wgates, wgraph, wm)
            search.stats.solutions_found = 1
    if not (config.return_first and search.best is not None):
        try:
            search.expand(m0, graph, [], 0.0, 0)
        except _StopSearch:
            pass
    search.stats.wall_time_ms = (time.perf_counter() - t0) * 1000.0

    if search.best is None:
        raise NoSolutionError(
            f"no decomposition within cost limit {limit:.6g} "
            f"after {search.stats.nodes_expanded} nodes",
            search.stats,
        )
    cost, gates, g_final_raw, m_final = search.best
    sequence, theta, g_final = assemble(graph, g_final_raw, gates, m_final, dim)
    return CompilationResult(sequence, theta, cost, search.stats, graph, g_final)


@dataclass(frozen=True, eq=False)
class BatchItem:
    index: int
    result: CompilationResult | None
    error: str | None = None


def compile_batch(unitaries, graph: CouplingGraph, config: SearchConfig = SearchConfig(),
                  params: CostParams = CostParams()) -> list[BatchItem]:
    """Compile each unitary independently; failures are collected, not raised."""
    items = []
    for idx, u in enumerate(unitaries):
        try:
            items.append(BatchItem(idx, adaptive_compile(u, graph, config, params)))
        except (NoSolutionError, ValueError) as exc:
            items.append(BatchItem(idx, None, str(exc)))
    return items
