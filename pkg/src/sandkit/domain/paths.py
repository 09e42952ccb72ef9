from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import networkx as nx

from sandkit.domain.errors import InfeasibleError
from sandkit.domain.models import Instance


class MetricClosure:
    """All-pairs shortest paths of an instance, computed once and read-only afterwards."""

    def __init__(self, instance: Instance) -> None:
        self._instance = instance
        self._dist: dict[int, dict[int, Fraction]] = {}
        self._paths: dict[int, dict[int, list[int]]] = {}
        for source, (dist, paths) in nx.all_pairs_dijkstra(instance.graph, weight="weight"):
            self._dist[source] = dist
            self._paths[source] = paths

    @property
    def instance(self) -> Instance:
        return self._instance

    def reachable(self, u: int, v: int) -> bool:
        return v in self._dist[u]

    def distance(self, u: int, v: int) -> Fraction:
        try:
            return Fraction(self._dist[u][v])
        except KeyError:
            raise InfeasibleError(f"node {v} is not reachable from {u}") from None

    def path(self, u: int, v: int) -> list[int]:
        try:
            return self._paths[u][v]
        except KeyError:
            raise InfeasibleError(f"node {v} is not reachable from {u}") from None

    def path_edges(self, u: int, v: int) -> list[int]:
        nodes = self.path(u, v)
        return [self._instance.edge_between(a, b).id for a, b in zip(nodes, nodes[1:])]

    def diameter(self) -> Fraction:
        return max(
            (Fraction(d) for row in self._dist.values() for d in row.values()),
            default=Fraction(0),
        )


@lru_cache(maxsize=32)
def metric_closure(instance: Instance) -> MetricClosure:
    return MetricClosure(instance)
