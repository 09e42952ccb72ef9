"""Latency objective: one root-anchored walk, paying the prefix length t_j at every level j.

Solutions are walks, so vertices and edges may repeat. Colors smaller than the
largest one, of size m, count as already holding the missing terminals at time
0 (dummies sitting on the root), so a color of size s reaches level j once it
has visited j - (m - s) of its own terminals.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Mapping, Sequence
from fractions import Fraction

import networkx as nx
import numpy as np

from sandkit.config import settings
from sandkit.domain.errors import InfeasibleError, LatencyError
from sandkit.domain.models import CoverTree, Instance, LatencyWalk
from sandkit.domain.paths import metric_closure

logger = logging.getLogger(__name__)


def require_integral_weights(instance: Instance) -> None:
    for edge in instance.edges:
        if edge.weight.denominator != 1:
            raise LatencyError(f"edge {edge.id} has non-integral weight {edge.weight}")


def _head_start(instance: Instance) -> list[int]:
    m = instance.max_demand
    return [m - len(color) for color in instance.colors]


def walk_cost(instance: Instance, walk: Sequence[int]) -> LatencyWalk:
    """Prefix lengths t_1..t_m of a vertex walk; cost is their sum."""
    require_integral_weights(instance)
    if not walk or walk[0] != instance.root:
        raise LatencyError("walk must start at the root")
    m = instance.max_demand
    covered = _head_start(instance)
    visited: set[int] = set()
    prefixes: list[Fraction] = []
    length = Fraction(0)

    for position, node in enumerate(walk):
        if position:
            data = instance.graph.get_edge_data(walk[position - 1], node)
            if data is None:
                raise LatencyError(f"walk steps from {walk[position - 1]} to non-adjacent {node}")
            length += data["weight"]
        if node not in visited:
            visited.add(node)
            for index, color in enumerate(instance.colors):
                if node in color:
                    covered[index] += 1
        level = min(covered, default=0)
        while len(prefixes) < min(level, m):
            prefixes.append(length)

    if len(prefixes) < m:
        raise LatencyError(f"walk only reaches level {len(prefixes)} of {m}")
    return LatencyWalk(vertices=tuple(walk), prefix_lengths=tuple(prefixes))


def walk_length(instance: Instance, walk: Sequence[int]) -> Fraction:
    total = Fraction(0)
    for a, b in zip(walk, walk[1:]):
        data = instance.graph.get_edge_data(a, b)
        if data is None:
            raise LatencyError(f"walk steps from {a} to non-adjacent {b}")
        total += data["weight"]
    return total


def eulerify(instance: Instance, tree: CoverTree) -> list[int]:
    """Closed depth-first walk around the tree from the root, children in ascending id."""
    if instance.root not in tree.nodes:
        raise LatencyError("cover tree does not contain the root")
    adjacency = nx.Graph()
    adjacency.add_node(instance.root)
    for edge_id in tree.edge_ids:
        edge = instance.edges[edge_id]
        adjacency.add_edge(edge.u, edge.v)

    walk = [instance.root]
    seen = {instance.root}

    def visit(node: int) -> None:
        for child in sorted(adjacency.neighbors(node)):
            if child in seen:
                continue
            seen.add(child)
            walk.append(child)
            visit(child)
            walk.append(node)

    visit(instance.root)
    return walk


def greedy_cover_tree(instance: Instance, j: int) -> CoverTree:
    """Grow a tree from the root until every color covers level j.

    Each step serves the color with the fewest covered terminals (lowest index on
    ties) by attaching its nearest uncovered terminal along a shortest path.
    """
    m = instance.max_demand
    root = instance.root
    if j > m:
        raise LatencyError(f"level {j} exceeds the largest color size {m}")
    head = _head_start(instance)
    reach = nx.node_connected_component(instance.graph, root)
    for index, color in enumerate(instance.colors):
        if len(color & reach) + head[index] < j:
            raise LatencyError(f"color {index} cannot reach level {j} from the root")

    nodes = {root}
    edge_ids: set[int] = set()

    def covered() -> list[int]:
        return [len(c & nodes) + head[i] for i, c in enumerate(instance.colors)]

    while (counts := covered()) and min(counts) < j:
        index = min(range(instance.k), key=lambda i: (counts[i], i))
        dist, paths = nx.multi_source_dijkstra(instance.graph, nodes, weight="weight")
        target = min(
            (t for t in instance.colors[index] if t not in nodes and t in dist),
            key=lambda t: (dist[t], t),
        )
        path = paths[target]
        for a, b in zip(path, path[1:]):
            edge_ids.add(instance.edge_between(a, b).id)
        nodes.update(path)
        logger.debug("cover level %d: color %d attaches %d at %s", j, index, target, dist[target])

    weight = sum((instance.edges[e].weight for e in edge_ids), Fraction(0))
    return CoverTree(edge_ids=frozenset(edge_ids), nodes=frozenset(nodes), target=j, weight=weight)


def latency_round(
    instance: Instance,
    trees: Mapping[int, CoverTree | Sequence[CoverTree]],
    seed: int | None = None,
) -> LatencyWalk:
    """Concatenate eulerified trees in increasing scale order.

    A scale may offer several candidate trees; one is drawn with ``seed``
    (the first is taken when no seed is given).
    """
    require_integral_weights(instance)
    rng = np.random.default_rng(seed) if seed is not None else None
    walk = [instance.root]
    last: CoverTree | None = None
    for scale in sorted(trees):
        option = trees[scale]
        if isinstance(option, CoverTree):
            tree = option
        else:
            if not option:
                raise LatencyError(f"no candidate tree at scale {scale}")
            tree = option[int(rng.integers(len(option)))] if rng is not None else option[0]
        if tree.weight > scale:
            logger.warning("tree at scale %d weighs %s", scale, tree.weight)
        walk.extend(eulerify(instance, tree)[1:])
        last = tree

    m = instance.max_demand
    if m and (last is None or last.target < m):
        raise LatencyError(f"final tree does not cover level {m}")
    return walk_cost(instance, walk)


def _largest_level_within(instance: Instance, budget: int, cache: dict[int, CoverTree]) -> int:
    lo, hi = 0, instance.max_demand
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid not in cache:
            cache[mid] = greedy_cover_tree(instance, mid)
        if cache[mid].weight <= budget:
            lo = mid
        else:
            hi = mid - 1
    return lo


def latency_solve_greedy(instance: Instance) -> LatencyWalk:
    """Greedy cover trees on the scales 1, 2, 4, ... rounded into one walk."""
    require_integral_weights(instance)
    missing = instance.unreachable_terminals()
    if missing:
        raise InfeasibleError(f"terminals {missing} cannot reach the root")
    m = instance.max_demand
    if m == 0:
        return walk_cost(instance, [instance.root])

    cache = {m: greedy_cover_tree(instance, m)}
    full = cache[m]
    top = max(0, math.ceil(math.log2(full.weight))) if full.weight > 1 else 0

    trees: dict[int, CoverTree] = {}
    for exponent in range(top + 1):
        scale = 2**exponent
        level = m if exponent == top else _largest_level_within(instance, scale, cache)
        if level:
            trees[scale] = cache[level]
    logger.debug("latency scales %s", {s: t.target for s, t in trees.items()})
    return latency_round(instance, trees)


def latency_exact(instance: Instance) -> LatencyWalk:
    """Best terminal visit order, moving along shortest paths between visits."""
    require_integral_weights(instance)
    terminals = sorted(instance.terminals)
    if len(terminals) > settings.latency_exact_max_terminals:
        raise LatencyError(
            f"{len(terminals)} terminals exceed the exact solver limit "
            f"of {settings.latency_exact_max_terminals}"
        )
    missing = instance.unreachable_terminals()
    if missing:
        raise InfeasibleError(f"terminals {missing} cannot reach the root")
    m = instance.max_demand
    if m == 0:
        return walk_cost(instance, [instance.root])

    closure = metric_closure(instance)
    membership = {t: [i for i, c in enumerate(instance.colors) if t in c] for t in terminals}
    best_cost: Fraction | None = None
    best_order: list[int] = []

    def search(
        at: int, length: Fraction, covered: list[int], paid: Fraction, order: list[int]
    ) -> None:
        nonlocal best_cost, best_order
        level = min(min(covered), m)
        if level == m:
            if best_cost is None or paid < best_cost:
                best_cost, best_order = paid, list(order)
            return
        if best_cost is not None and paid + (m - level) * length >= best_cost:
            return
        for target in terminals:
            if target in order:
                continue
            reached = length + closure.distance(at, target)
            after = list(covered)
            for index in membership[target]:
                after[index] += 1
            gained = min(min(after), m) - level
            order.append(target)
            search(target, reached, after, paid + gained * reached, order)
            order.pop()

    search(instance.root, Fraction(0), _head_start(instance), Fraction(0), [])

    walk = [instance.root]
    for target in best_order:
        walk.extend(closure.path(walk[-1], target)[1:])
    return walk_cost(instance, walk)
