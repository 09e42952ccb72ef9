from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

import networkx as nx

from sandkit.domain.errors import ColorCountError, InstanceError, PlanError
from sandkit.domain.models import Capacity, CapacityPlan, Edge, Instance, PlanMode

logger = logging.getLogger(__name__)


def plan_cost(instance: Instance, plan: CapacityPlan) -> Capacity:
    """Sum of w_e * x_e; exact for rational plans, float for LP output."""
    plan.check_length(instance)
    if plan.is_exact:
        return sum((e.weight * plan[e.id] for e in instance.edges), Fraction(0))
    return float(sum(float(e.weight) * float(plan[e.id]) for e in instance.edges))


@dataclass(frozen=True)
class Expansion:
    """An instance whose edges were copied, with each new edge's original id."""

    instance: Instance
    origin: tuple[int, ...]

    def aggregate(self, plan: CapacityPlan, original: Instance) -> CapacityPlan:
        """Sum capacities over copies to get a plan on the original instance."""
        plan.check_length(self.instance)
        totals: list[Capacity] = [Fraction(0)] * original.edge_count
        for new_id, value in enumerate(plan.values):
            totals[self.origin[new_id]] += value
        if plan.mode is PlanMode.INTEGRAL:
            return CapacityPlan.integral(totals)
        return CapacityPlan.fractional(totals)

    def spread(self, plan: CapacityPlan) -> CapacityPlan:
        """Turn an integral plan on the original into a 0/1 plan on the copies."""
        if plan.mode is not PlanMode.INTEGRAL:
            raise PlanError("only integral plans can be spread over parallel copies")
        used: dict[int, int] = {}
        values = []
        for original_id in self.origin:
            taken = used.get(original_id, 0)
            values.append(1 if taken < plan[original_id] else 0)
            used[original_id] = taken + 1
        if any(plan[e] > used.get(e, 0) for e in range(len(plan))):
            raise PlanError("plan needs more capacity than there are parallel copies")
        return CapacityPlan.integral(values)


def expand_parallel(instance: Instance) -> Expansion:
    """Replace every edge with max_i |C_i| parallel unit copies of the same weight."""
    copies = max(instance.max_demand, 1)
    edges: list[Edge] = []
    origin: list[int] = []
    for edge in instance.edges:
        for _ in range(copies):
            edges.append(Edge(u=edge.u, v=edge.v, weight=edge.weight, id=len(edges)))
            origin.append(edge.id)
    expanded = Instance(
        node_count=instance.node_count,
        root=instance.root,
        edges=tuple(edges),
        colors=instance.colors,
        dummies=instance.dummies,
    )
    return Expansion(instance=expanded, origin=tuple(origin))


def pad_colors(instance: Instance) -> Instance:
    """Balance two colors with dummy terminals hanging off the root by 0-weight edges."""
    if instance.k != 2:
        raise ColorCountError(f"padding needs exactly 2 colors, got {instance.k}")
    first, second = instance.colors
    deficit = len(second) - len(first)
    if deficit == 0:
        return instance

    smaller = 0 if deficit > 0 else 1
    new_nodes = list(range(instance.node_count, instance.node_count + abs(deficit)))
    edges = list(instance.edges)
    for node in new_nodes:
        edges.append(Edge(u=instance.root, v=node, weight=Fraction(0), id=len(edges)))
    colors = list(instance.colors)
    colors[smaller] = colors[smaller] | frozenset(new_nodes)
    logger.debug("padded color %d with %d dummy terminals", smaller, len(new_nodes))
    return Instance(
        node_count=instance.node_count + len(new_nodes),
        root=instance.root,
        edges=tuple(edges),
        colors=tuple(colors),
        dummies=instance.dummies | frozenset(new_nodes),
    )


def shift_root(instance: Instance) -> Instance:
    """Hang a fresh root off the old one with a single 0-weight edge.

    Every terminal then shares at least that edge with a terminal of the other
    color; run expand_parallel afterwards for unit-capacity copies.
    """
    new_root = instance.node_count
    edges = [*instance.edges, Edge(instance.root, new_root, Fraction(0), instance.edge_count)]
    return Instance(
        node_count=instance.node_count + 1,
        root=new_root,
        edges=tuple(edges),
        colors=instance.colors,
        dummies=instance.dummies,
    )


def restrict_plan(plan: CapacityPlan, edge_count: int) -> CapacityPlan:
    """Drop capacities of edges appended after the first ``edge_count`` (padding edges)."""
    if len(plan) < edge_count:
        raise PlanError("plan is shorter than the target edge count")
    return CapacityPlan(plan.values[:edge_count], plan.mode)


def mst_cost(instance: Instance) -> Fraction:
    """Weight of a minimum spanning tree; a lower bound when every node needs the root."""
    graph = instance.graph
    if not nx.is_connected(graph):
        raise InstanceError("graph is disconnected")
    tree = nx.minimum_spanning_tree(graph, weight="weight")
    return sum((Fraction(d["weight"]) for _, _, d in tree.edges(data=True)), Fraction(0))


def format_node(instance: Instance, node: int) -> str:
    """Node id for reports; padding dummies carry a ``d`` prefix so readers can skip them."""
    return f"d{node}" if node in instance.dummies else str(node)
