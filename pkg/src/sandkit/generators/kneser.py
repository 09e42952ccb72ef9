from __future__ import annotations

import logging
from fractions import Fraction
from itertools import combinations
from math import comb

from sandkit.config import settings
from sandkit.domain.errors import GeneratorError
from sandkit.domain.models import CapacityPlan, Instance

logger = logging.getLogger(__name__)


def odd_graph(s: int) -> tuple[list[frozenset[int]], list[tuple[int, int]]]:
    """s-subsets of {0..2s} in lexicographic order and the disjoint pairs (i < j) between them."""
    subsets = [frozenset(c) for c in combinations(range(2 * s + 1), s)]
    pairs = [(i, j) for i, j in combinations(range(len(subsets)), 2) if not subsets[i] & subsets[j]]
    return subsets, pairs


def kneser_plan_values(s: int) -> tuple[Fraction, Fraction]:
    """Fractional capacity on root edges and on graph edges."""
    n = comb(2 * s + 1, s)
    root_edge = Fraction(s + 1, n)
    graph_edge = Fraction(s + 1, s * s + 1) - Fraction((s + 1) ** 2, (s * s + 1) * n)
    return root_edge, graph_edge


def gen_kneser(s: int, unordered: bool = False) -> tuple[Instance, CapacityPlan]:
    """Odd graph O_s plus a root joined to every vertex, with its known fractional solution.

    Root edges weigh 2 and graph edges 1. Every ordered adjacent pair (u, v) yields
    the color N[u] - {v} of size s + 1; ``unordered`` keeps only u < v.
    """
    if s < 1:
        raise GeneratorError("s must be positive")
    if s > settings.kneser_max_s:
        raise GeneratorError(f"s={s} exceeds the limit of {settings.kneser_max_s}")

    subsets, pairs = odd_graph(s)
    n = len(subsets)
    root = 0
    edges: list[tuple[int, int, int]] = [(root, v + 1, 2) for v in range(n)]
    edges += [(i + 1, j + 1, 1) for i, j in pairs]

    neighbours: dict[int, set[int]] = {v: set() for v in range(1, n + 1)}
    for i, j in pairs:
        neighbours[i + 1].add(j + 1)
        neighbours[j + 1].add(i + 1)
    colors = []
    for u in range(1, n + 1):
        for v in sorted(neighbours[u]):
            if unordered and v < u:
                continue
            colors.append(({u} | neighbours[u]) - {v})
    instance = Instance.build(n + 1, root, edges, colors)

    root_edge, graph_edge = kneser_plan_values(s)
    plan = CapacityPlan.fractional([root_edge] * n + [graph_edge] * len(pairs))
    logger.debug("odd graph s=%d: %d vertices, %d edges, %d colors", s, n, len(pairs), len(colors))
    return instance, plan
