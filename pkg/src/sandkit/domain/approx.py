from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby

import networkx as nx
import numpy as np
from scipy.optimize import linear_sum_assignment

from sandkit.domain.core import pad_colors, restrict_plan
from sandkit.domain.errors import ColorCountError, InfeasibleError
from sandkit.domain.models import CapacityPlan, Instance, MatchedPair, PairingResult
from sandkit.domain.paths import MetricClosure, metric_closure

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SteinerTree:
    cost: Fraction
    edge_ids: frozenset[int]
    median: int


def three_terminal_steiner(
    instance: Instance,
    a: int,
    b: int,
    closure: MetricClosure | None = None,
) -> SteinerTree:
    """Cheapest tree joining a, b and the root: the best median m of three shortest paths."""
    closure = closure or metric_closure(instance)
    root = instance.root
    for terminal in (a, b):
        if not closure.reachable(root, terminal):
            raise InfeasibleError(f"node {terminal} cannot reach the root")

    best: tuple[Fraction, int] | None = None
    for m in range(instance.node_count):
        if not closure.reachable(root, m):
            continue
        total = closure.distance(a, m) + closure.distance(b, m) + closure.distance(root, m)
        if best is None or total < best[0]:
            best = (total, m)
    assert best is not None
    median = best[1]

    edge_ids: set[int] = set()
    for end in (a, b, root):
        edge_ids.update(closure.path_edges(end, median))
    cost = sum((instance.edges[e].weight for e in edge_ids), Fraction(0))
    return SteinerTree(cost=cost, edge_ids=frozenset(edge_ids), median=median)


@dataclass(frozen=True)
class MatchingSolution:
    plan: CapacityPlan
    pairing: PairingResult
    padded: Instance


def matching_solve(instance: Instance) -> MatchingSolution:
    """Two-color 3/2-approximation: min-weight perfect matching on 3-terminal Steiner costs.

    Every matched pair gets one unit of capacity along its Steiner tree, installed
    cumulatively. Pairs may contain padding dummies; the returned plan covers only
    the original edges.
    """
    if instance.k != 2:
        raise ColorCountError(f"matching needs exactly 2 colors, got {instance.k}")
    padded = pad_colors(instance)
    closure = metric_closure(padded)
    greens = sorted(padded.colors[0])
    blues = sorted(padded.colors[1])

    trees = [[three_terminal_steiner(padded, g, b, closure) for b in blues] for g in greens]
    weights = np.array([[float(t.cost) for t in row] for row in trees])
    rows, cols = linear_sum_assignment(weights)

    pairs = []
    usage: Counter[int] = Counter()
    for i, j in zip(rows, cols):
        tree = trees[i][j]
        pairs.append(MatchedPair(greens[i], blues[j], tree.cost, tree.edge_ids))
        usage.update(tree.edge_ids)
        logger.debug("pair green=%d blue=%d cost=%s", greens[i], blues[j], tree.cost)
    pairs.sort(key=lambda p: (p.green, p.blue))
    total = sum((p.steiner_cost for p in pairs), Fraction(0))

    plan = CapacityPlan.integral(usage.get(e.id, 0) for e in padded.edges)
    return MatchingSolution(
        plan=restrict_plan(plan, instance.edge_count),
        pairing=PairingResult(pairs=tuple(pairs), total_weight=total),
        padded=padded,
    )


def shortest_path_parents(instance: Instance) -> dict[int, int]:
    """Shortest-path tree from the root as child -> parent, lowest-id predecessor on ties.

    Nodes are attached in order of distance. Within one distance class (joined
    by 0-weight edges) a node may only hang from a node attached before it, so
    the parent map never closes a cycle.
    """
    preds, dist = nx.dijkstra_predecessor_and_distance(
        instance.graph, instance.root, weight="weight"
    )
    parents: dict[int, int] = {}
    attached = {instance.root}
    ordered = sorted((n for n in dist if n != instance.root), key=lambda n: (dist[n], n))
    for _, group in groupby(ordered, key=lambda n: dist[n]):
        pending = set(group)
        while pending:
            node = min(n for n in pending if any(p in attached for p in preds[n]))
            parents[node] = min(p for p in preds[node] if p in attached)
            attached.add(node)
            pending.discard(node)
    return parents


def shortest_path_solve(instance: Instance) -> CapacityPlan:
    """Route every terminal along one shortest-path tree; capacity is the busiest color per edge."""
    missing = instance.unreachable_terminals()
    if missing:
        raise InfeasibleError(f"terminals {missing} cannot reach the root")
    parents = shortest_path_parents(instance)

    capacity = [0] * instance.edge_count
    for color in instance.colors:
        load: Counter[int] = Counter()
        for terminal in color:
            node = terminal
            while node != instance.root:
                parent = parents[node]
                load[instance.edge_between(parent, node).id] += 1
                node = parent
        for edge_id, count in load.items():
            capacity[edge_id] = max(capacity[edge_id], count)
    return CapacityPlan.integral(capacity)
