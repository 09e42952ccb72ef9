"""Random hierarchically separated trees and the tree-embedding baseline solver.

Zero-weight components are contracted to one point before sampling (the root
stands for its own component). After scaling so the smallest positive distance
is 1, level i clusters are carved with radius beta * 2**(i - 1): level 0 is all
singletons and the top level is one cluster. A cluster at level i hangs from
its parent by a tree edge of length 2**(i + 1), which makes the tree metric
dominate the graph metric.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import networkx as nx
import numpy as np

from sandkit.domain.errors import InstanceError
from sandkit.domain.models import CapacityPlan, Instance
from sandkit.domain.paths import MetricClosure, metric_closure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Cluster:
    level: int
    center: int
    points: frozenset[int]
    parent: int | None


@dataclass(frozen=True)
class FrtTree:
    instance: Instance
    clusters: tuple[Cluster, ...]
    leaf_of: dict[int, int]
    """Graph node -> index of its level 0 cluster."""
    members: dict[int, frozenset[int]]
    """Contracted point -> every graph node it stands for."""
    unit: Fraction
    beta: float

    @property
    def top(self) -> int:
        return next(i for i, c in enumerate(self.clusters) if c.parent is None)

    def edge_length(self, index: int) -> Fraction:
        return self.unit * 2 ** (self.clusters[index].level + 1)

    def representative(self, index: int) -> int:
        if self.clusters[index].parent is None:
            return self.instance.root
        return self.clusters[index].center

    def nodes_below(self, index: int) -> frozenset[int]:
        return frozenset().union(*(self.members[p] for p in self.clusters[index].points))

    def _ancestors(self, index: int) -> list[int]:
        chain = [index]
        while (parent := self.clusters[chain[-1]].parent) is not None:
            chain.append(parent)
        return chain

    def distance(self, u: int, v: int) -> Fraction:
        up = self._ancestors(self.leaf_of[u])
        vp = self._ancestors(self.leaf_of[v])
        common = set(up) & set(vp)
        total = Fraction(0)
        for chain in (up, vp):
            for index in chain:
                if index in common:
                    break
                total += self.edge_length(index)
        return total

    def stretch(self) -> float:
        """Mean d_T / d_G over node pairs at positive graph distance."""
        closure = metric_closure(self.instance)
        ratios = [
            float(self.distance(u, v) / closure.distance(u, v))
            for u, v in combinations(range(self.instance.node_count), 2)
            if closure.distance(u, v) > 0
        ]
        return sum(ratios) / len(ratios) if ratios else 1.0


def _contract_zero_edges(instance: Instance) -> dict[int, frozenset[int]]:
    zero = nx.Graph()
    zero.add_nodes_from(range(instance.node_count))
    zero.add_edges_from((e.u, e.v) for e in instance.edges if e.weight == 0)
    members = {}
    for component in nx.connected_components(zero):
        point = instance.root if instance.root in component else min(component)
        members[point] = frozenset(component)
    return members


def frt_embed(instance: Instance, seed: int) -> FrtTree:
    if not instance.is_connected():
        raise InstanceError("tree embedding needs a connected graph")
    closure = metric_closure(instance)
    members = _contract_zero_edges(instance)
    points = sorted(members)

    rng = np.random.default_rng(seed)
    beta = 1.0 + float(rng.random())
    order = [points[i] for i in rng.permutation(len(points))]

    positive = [closure.distance(u, v) for u, v in combinations(points, 2)]
    unit = min(positive, default=Fraction(1))
    diameter = max(positive, default=Fraction(0)) / unit
    top_level = math.ceil(math.log2(diameter)) + 1 if diameter > 1 else 1
    logger.debug("embedding %d points, %d levels, beta=%.6f", len(points), top_level, beta)

    clusters: list[Cluster] = [Cluster(top_level, instance.root, frozenset(points), None)]
    frontier = [0]
    for level in range(top_level - 1, -1, -1):
        radius = beta * 2 ** (level - 1)
        next_frontier = []
        for parent in frontier:
            remaining = set(clusters[parent].points)
            for center in order:
                if not remaining:
                    break
                ball = {p for p in remaining if closure.distance(center, p) / unit <= radius}
                if ball:
                    remaining -= ball
                    clusters.append(Cluster(level, center, frozenset(ball), parent))
                    next_frontier.append(len(clusters) - 1)
        frontier = next_frontier

    leaf_of = {}
    for index in frontier:
        (point,) = clusters[index].points
        for node in members[point]:
            leaf_of[node] = index
    return FrtTree(
        instance=instance,
        clusters=tuple(clusters),
        leaf_of=leaf_of,
        members=members,
        unit=unit,
        beta=beta,
    )


def tree_capacities(tree: FrtTree, family_size: int | None = None) -> dict[int, int]:
    """Capacity of each tree edge, keyed by its lower cluster.

    By default this is max_i |C_i| below the edge. With ``family_size`` b the
    colors are taken to be every b-subset of the non-root nodes, so an edge
    needs min(b, nodes below).
    """
    capacities = {}
    for index, cluster in enumerate(tree.clusters):
        if cluster.parent is None:
            continue
        # terminals sharing the root's zero component reach it over 0-weight edges
        below = tree.nodes_below(index) - tree.members[tree.instance.root]
        if family_size is not None:
            need = min(family_size, len(below))
        else:
            need = max((len(color & below) for color in tree.instance.colors), default=0)
        if need:
            capacities[index] = need
    return capacities


def frt_tree_cost(instance: Instance, seed: int, family_size: int | None = None) -> Fraction:
    """Cost of the optimal solution on the sampled tree, priced with tree edge lengths."""
    tree = frt_embed(instance, seed)
    needs = tree_capacities(tree, family_size)
    return sum((tree.edge_length(index) * need for index, need in needs.items()), Fraction(0))


def is_tree_shaped(instance: Instance) -> bool:
    return instance.edge_count == instance.node_count - 1 and instance.is_connected()


def tree_input_plan(instance: Instance) -> CapacityPlan:
    """Optimal plan when the graph is itself a tree: max_i |C_i| beyond each edge."""
    if not is_tree_shaped(instance):
        raise InstanceError("graph is not a tree")
    hanging = nx.bfs_tree(instance.graph, instance.root)
    capacity = [0] * instance.edge_count
    for parent, child in hanging.edges():
        below = {child} | nx.descendants(hanging, child)
        need = max((len(color & below) for color in instance.colors), default=0)
        capacity[instance.edge_between(parent, child).id] = need
    return CapacityPlan.integral(capacity)


def frt_solve(instance: Instance, seed: int, closure: MetricClosure | None = None) -> CapacityPlan:
    """Solve exactly on a sampled tree, then install each tree edge along a shortest graph path.

    A graph that already is a tree is its own embedding and is solved directly.
    """
    if is_tree_shaped(instance):
        logger.debug("input is a tree, skipping the embedding")
        return tree_input_plan(instance)
    tree = frt_embed(instance, seed)
    closure = closure or metric_closure(instance)
    cap_limit = instance.max_demand

    capacity = [0] * instance.edge_count
    for edge in instance.edges:
        if edge.weight == 0:
            capacity[edge.id] = cap_limit
    for index, need in tree_capacities(tree).items():
        a = tree.representative(index)
        parent = tree.clusters[index].parent
        assert parent is not None
        b = tree.representative(parent)
        for edge_id in closure.path_edges(a, b):
            capacity[edge_id] = min(capacity[edge_id] + need, cap_limit)
    return CapacityPlan.integral(capacity)
