from __future__ import annotations

import logging
import math
from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
from networkx.algorithms.flow import preflow_push

from sandkit.config import settings
from sandkit.domain.errors import InfeasibleError, PlanError, RoutingError
from sandkit.domain.models import (
    Capacity,
    CapacityPlan,
    CutConstraint,
    Feasible,
    Instance,
    PlanMode,
    Routing,
    Step,
    Violation,
    Walk,
)

logger = logging.getLogger(__name__)

Arc = tuple[int, int, Capacity]


@dataclass(frozen=True)
class FlowResult:
    value: Capacity
    source_side: frozenset[int]
    """Source side of a minimum cut, super-source excluded."""
    arc_flows: Mapping[tuple[int, int], Capacity]
    """Net flow on each ordered node pair that carries flow."""


def _scale_factor(values: Sequence[Capacity]) -> int | None:
    """Common denominator turning all-rational inputs into integers; None if any float."""
    scale = 1
    for value in values:
        if isinstance(value, float):
            return None
        scale = math.lcm(scale, Fraction(value).denominator)
    return scale


def max_flow(
    node_count: int,
    arcs: Sequence[Arc],
    supplies: Mapping[int, Capacity],
    sink: int,
) -> FlowResult:
    """Max flow from a super-source feeding each source its supply into ``sink``.

    Rational inputs are scaled to integers so the result is exact; float inputs
    are solved in floating point.
    """
    for node, supply in supplies.items():
        if node == sink and supply > 0:
            raise ValueError("sink cannot carry a positive supply")

    scale = _scale_factor([c for _, _, c in arcs] + list(supplies.values()))
    exact = scale is not None

    def convert(value: Capacity) -> int | float:
        if scale is None:
            return float(value)
        return int(Fraction(value) * scale)

    super_source = node_count
    graph = nx.DiGraph()
    graph.add_nodes_from(range(node_count + 1))
    for u, v, cap in arcs:
        # preflow_push leaves zero-capacity arcs out of its residual network
        if cap <= 0:
            continue
        if graph.has_edge(u, v):
            graph[u][v]["capacity"] += convert(cap)
        else:
            graph.add_edge(u, v, capacity=convert(cap))
    for node, supply in supplies.items():
        if supply > 0:
            graph.add_edge(super_source, node, capacity=convert(supply))

    residual = preflow_push(graph, super_source, sink)
    tol = 0 if exact else 1e-12

    seen = {super_source}
    queue = deque([super_source])
    while queue:
        u = queue.popleft()
        for v, data in residual[u].items():
            if v not in seen and data["capacity"] - data["flow"] > tol:
                seen.add(v)
                queue.append(v)

    def restore(value: float | int) -> Capacity:
        if scale is None:
            return float(value)
        return Fraction(value, scale)

    flows: dict[tuple[int, int], Capacity] = {}
    for u, v in graph.edges():
        if u == super_source:
            continue
        arc = residual[u].get(v)
        flow = arc["flow"] if arc is not None else 0
        if flow > tol:
            flows[(u, v)] = restore(flow)

    return FlowResult(
        value=restore(residual.graph["flow_value"]),
        source_side=frozenset(seen - {super_source}),
        arc_flows=flows,
    )


def _color_flow(instance: Instance, plan: CapacityPlan, color: int) -> FlowResult:
    arcs: list[Arc] = []
    for edge in instance.edges:
        arcs.append((edge.u, edge.v, plan[edge.id]))
        arcs.append((edge.v, edge.u, plan[edge.id]))
    supplies: dict[int, Capacity] = {t: Fraction(1) for t in instance.colors[color]}
    return max_flow(instance.node_count, arcs, supplies, instance.root)


def color_flows(instance: Instance, plan: CapacityPlan) -> list[FlowResult]:
    plan.check_length(instance)
    return [_color_flow(instance, plan, i) for i in range(instance.k)]


def check_feasible(
    instance: Instance,
    plan: CapacityPlan,
    tol: float | None = None,
) -> Feasible | Violation:
    """Feasible iff every color can route one unit per terminal to the root.

    On failure the returned cut is the most violated one over all colors.
    """
    tol = settings.feasibility_tol if tol is None else tol
    plan.check_length(instance)
    worst: Violation | None = None
    worst_gap: Capacity = 0
    for index, result in enumerate(color_flows(instance, plan)):
        demand = len(instance.colors[index])
        gap = demand - result.value
        violated = gap > 0 if plan.is_exact else gap > tol
        if not violated or (worst is not None and gap <= worst_gap):
            continue
        node_set = result.source_side
        cut = CutConstraint(
            node_set=node_set,
            rhs=len(instance.colors[index] & node_set),
            witness_color=index,
        )
        worst = Violation(cut=cut, flow_value=result.value)
        worst_gap = gap
    if worst is None:
        return Feasible()
    logger.debug("plan violates cut %s", worst.cut)
    return worst


def _edge_flows(
    instance: Instance,
    plan: CapacityPlan,
    pair_flows: Mapping[tuple[int, int], Capacity],
) -> dict[int, list[Step]]:
    """Split net pair flows over parallel edges (lowest id first), one Step per unit."""
    net: dict[tuple[int, int], int] = {}
    for (u, v), flow in pair_flows.items():
        net[(u, v)] = net.get((u, v), 0) + int(flow)
        net[(v, u)] = net.get((v, u), 0) - int(flow)

    outgoing: dict[int, list[Step]] = {n: [] for n in range(instance.node_count)}
    remaining = dict(net)
    for edge in instance.edges:
        capacity = int(plan[edge.id])
        for a, b in ((edge.u, edge.v), (edge.v, edge.u)):
            units = min(max(remaining.get((a, b), 0), 0), capacity)
            if units:
                remaining[(a, b)] -= units
                remaining[(b, a)] += units
                outgoing[a].extend(Step(edge.id, a, b) for _ in range(units))
                break
    return outgoing


def _decompose(
    instance: Instance,
    terminals: frozenset[int],
    outgoing: dict[int, list[Step]],
) -> dict[int, Walk]:
    walks: dict[int, Walk] = {}
    for terminal in sorted(terminals):
        walk: list[Step] = []
        position = {terminal: 0}
        node = terminal
        while node != instance.root:
            if not outgoing[node]:
                raise RoutingError(f"flow decomposition stuck at node {node}")
            step = outgoing[node].pop(0)
            walk.append(step)
            node = step.target
            if node in position:
                # drop the circulation we just closed
                del walk[position[node]:]
                position = {n: i for n, i in position.items() if i <= position[node]}
            else:
                position[node] = len(walk)
        walks[terminal] = tuple(walk)
    return walks


def extract_routing(instance: Instance, plan: CapacityPlan) -> Routing:
    """Decompose each color's integral max-flow into cycle-free terminal-to-root walks."""
    plan.check_length(instance)
    if plan.mode is not PlanMode.INTEGRAL:
        raise PlanError("routing extraction needs an integral plan")
    per_color: list[dict[int, Walk]] = []
    for index, result in enumerate(color_flows(instance, plan)):
        color = instance.colors[index]
        if result.value != len(color):
            raise InfeasibleError(
                f"color {index} routes {result.value} of {len(color)} units to the root"
            )
        outgoing = _edge_flows(instance, plan, result.arc_flows)
        for steps in outgoing.values():
            steps.sort(key=lambda s: s.edge_id)
        per_color.append(_decompose(instance, color, outgoing))
    return Routing(walks=tuple(per_color))


def validate_routing(instance: Instance, plan: CapacityPlan | None, routing: Routing) -> None:
    """Raise RoutingError unless every walk is a terminal-to-root walk within capacity."""
    if len(routing.walks) != instance.k:
        raise RoutingError("routing color count differs from the instance")
    for index, per_color in enumerate(routing.walks):
        if set(per_color) != set(instance.colors[index]):
            raise RoutingError(f"color {index} walks do not match its terminals")
        for terminal, walk in per_color.items():
            node = terminal
            for step in walk:
                edge = instance.edges[step.edge_id]
                if step.source != node or {step.source, step.target} != {edge.u, edge.v}:
                    raise RoutingError(f"walk of {terminal} breaks at edge {step.edge_id}")
                node = step.target
            if node != instance.root:
                raise RoutingError(f"walk of {terminal} ends at {node}, not the root")
        if plan is not None:
            for edge_id, load in routing.edge_loads(index).items():
                if load > plan[edge_id]:
                    raise RoutingError(
                        f"color {index} uses edge {edge_id} {load} times, capacity {plan[edge_id]}"
                    )
