"""Experimental cost model for two-level rotations.

The default model scales linearly with the rotation angle, adds a
periodic penalty for angles away from the calibrated value, and scales
with the graph distance of the two states:

    cost = base_factor * dist * (4*t + |mod(t + c/2, c) - c/2|)

where t = |theta|/pi and c is the calibrated angle in units of pi.
Virtual Z gates cost nothing.

Models are swappable: alternatives register under a name and are selected
via ``CostParams.model`` (config key cost.model), so every consumer that
carries a CostParams automatically uses the chosen hardware model.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .gates import RotationGate, VirtualZGate
from .graph import CouplingGraph, RoutingPlan, plan_routing

DEFAULT_MODEL = "calibrated-linear"


@dataclass(frozen=True)
class CostParams:
    base_factor: float = 1e-4
    calibrated_angle: float = 0.5   # units of pi
    angle_floor: float = 0.25       # units of pi; formula applies below it too
    model: str = DEFAULT_MODEL

    def __post_init__(self):
        if self.base_factor <= 0 or self.calibrated_angle <= 0 or self.angle_floor <= 0:
            raise ValueError("cost parameters must be positive")


@dataclass(frozen=True)
class CostBreakdown:
    rotation_cost: float
    routing_cost: float

    def __post_init__(self):
        if self.rotation_cost < 0 or self.routing_cost < 0:
            raise ValueError("costs must be non-negative")

    @property
    def total(self) -> float:
        return self.rotation_cost + self.routing_cost


CostModel = Callable[[float, int, CostParams], float]
_MODELS: dict[str, CostModel] = {}


def register_cost_model(name: str, fn: CostModel) -> None:
    _MODELS[name] = fn


def _calibrated_linear(theta: float, dist: int, params: CostParams) -> float:
    t = (abs(theta) % (2.0 * math.pi)) / math.pi
    c = params.calibrated_angle
    penalty = abs(math.fmod(t + c / 2.0, c) - c / 2.0)
    return params.base_factor * dist * (4.0 * t + penalty)


register_cost_model(DEFAULT_MODEL, _calibrated_linear)


def rotation_cost(theta: float, dist: int, params: CostParams = CostParams()) -> float:
    """Cost of one two-level rotation by theta (radians) at graph distance
    dist, under the model params selects."""
    if dist < 1:
        raise ValueError("distance must be >= 1")
    try:
        model = _MODELS[params.model]
    except KeyError:
        raise ValueError(f"unknown cost model {params.model!r}") from None
    return model(theta, dist, params)


def pulse_cost(params: CostParams = CostParams()) -> float:
    """Cost of one reordering pulse: an adjacent pi rotation."""
    return rotation_cost(math.pi, 1, params)


def gate_cost(gate, graph: CouplingGraph, params: CostParams = CostParams()):
    """Cost of executing a gate on the graph, including routing.

    For a rotation on logical states (level_low, level_high interpreted as
    state indices), returns (CostBreakdown, RoutingPlan): the routing plan
    brings the second state adjacent to the first, each pulse costing a
    distance-1 pi rotation, and the rotation itself is then adjacent.
    Virtual Z gates cost zero.
    """
    if isinstance(gate, VirtualZGate):
        return CostBreakdown(0.0, 0.0), RoutingPlan((), graph)
    if not isinstance(gate, RotationGate):
        raise TypeError(f"unsupported gate {gate!r}")
    plan = plan_routing(graph, gate.level_low, gate.level_high)
    routing = pulse_cost(params) * len(plan.pulses)
    rot = rotation_cost(gate.theta, 1, params)
    return CostBreakdown(rot, routing), plan


def sequence_cost(gates, params: CostParams = CostParams()) -> float:
    """Total cost of an already-physical sequence: every rotation is an
    adjacent (distance-1) pulse; virtual Z gates are free."""
    total = 0.0
    for gate in gates:
        if isinstance(gate, RotationGate):
            total += rotation_cost(gate.theta, 1, params)
    return total
