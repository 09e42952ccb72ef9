from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property

import networkx as nx

from sandkit.domain.errors import InstanceError, PlanError

Capacity = Fraction | float
"""Rational capacities are exact; floats only come out of the LP relaxation."""


def to_fraction(value: int | str | Fraction) -> Fraction:
    if isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    weight: Fraction
    id: int

    def other(self, node: int) -> int:
        if node == self.u:
            return self.v
        if node == self.v:
            return self.u
        raise ValueError(f"node {node} is not an endpoint of edge {self.id}")

    def touches(self, node: int) -> bool:
        return node in (self.u, self.v)


@dataclass(frozen=True)
class Instance:
    """Weighted undirected multigraph with a root and k color classes."""

    node_count: int
    root: int
    edges: tuple[Edge, ...]
    colors: tuple[frozenset[int], ...]
    dummies: frozenset[int] = field(default=frozenset(), compare=False)

    def __post_init__(self) -> None:
        if self.node_count <= 0:
            raise InstanceError("node count must be positive")
        if not 0 <= self.root < self.node_count:
            raise InstanceError(f"root {self.root} out of range")
        for index, edge in enumerate(self.edges):
            if edge.id != index:
                raise InstanceError(f"edge ids must be dense, got {edge.id} at {index}")
            for end in (edge.u, edge.v):
                if not 0 <= end < self.node_count:
                    raise InstanceError(f"edge {edge.id} endpoint {end} out of range")
            if edge.u == edge.v:
                raise InstanceError(f"edge {edge.id} is a self-loop")
            if edge.weight < 0:
                raise InstanceError(f"edge {edge.id} has negative weight")
        for index, color in enumerate(self.colors):
            if not color:
                raise InstanceError(f"color {index} is empty")
            if self.root in color:
                raise InstanceError(f"color {index} contains the root")
            for node in color:
                if not 0 <= node < self.node_count:
                    raise InstanceError(f"color {index} references unknown node {node}")

    @classmethod
    def build(
        cls,
        node_count: int,
        root: int,
        edges: Iterable[tuple[int, int, int | str | Fraction]],
        colors: Iterable[Iterable[int]],
        dummies: Iterable[int] = (),
    ) -> Instance:
        return cls(
            node_count=node_count,
            root=root,
            edges=tuple(
                Edge(u=u, v=v, weight=to_fraction(w), id=i) for i, (u, v, w) in enumerate(edges)
            ),
            colors=tuple(frozenset(c) for c in colors),
            dummies=frozenset(dummies),
        )

    @property
    def k(self) -> int:
        return len(self.colors)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def max_demand(self) -> int:
        """max_i |C_i|, the largest capacity any single edge can ever need."""
        return max((len(c) for c in self.colors), default=0)

    @property
    def terminals(self) -> frozenset[int]:
        return frozenset().union(*self.colors) if self.colors else frozenset()

    @cached_property
    def graph(self) -> nx.Graph:
        """Simple weighted graph; parallel edges collapse to the cheapest (lowest id on ties)."""
        g = nx.Graph()
        g.add_nodes_from(range(self.node_count))
        for edge in self.edges:
            current = g.get_edge_data(edge.u, edge.v)
            if current is None or edge.weight < current["weight"]:
                g.add_edge(edge.u, edge.v, weight=edge.weight, edge_id=edge.id)
        return g

    def edge_between(self, u: int, v: int) -> Edge:
        data = self.graph.get_edge_data(u, v)
        if data is None:
            raise InstanceError(f"nodes {u} and {v} are not adjacent")
        return self.edges[data["edge_id"]]

    def incident(self, node: int) -> list[Edge]:
        return [e for e in self.edges if e.touches(node)]

    def is_connected(self) -> bool:
        return bool(nx.is_connected(self.graph))

    def unreachable_terminals(self) -> list[int]:
        reach = nx.node_connected_component(self.graph, self.root)
        return sorted(t for t in self.terminals if t not in reach)


class PlanMode(str, Enum):
    INTEGRAL = "integral"
    FRACTIONAL = "fractional"


@dataclass(frozen=True)
class CapacityPlan:
    values: tuple[Capacity, ...]
    mode: PlanMode

    def __post_init__(self) -> None:
        for index, value in enumerate(self.values):
            if value < 0:
                raise PlanError(f"capacity of edge {index} is negative: {value}")
            if self.mode is PlanMode.INTEGRAL:
                if not isinstance(value, Fraction) or value.denominator != 1:
                    raise PlanError(f"integral plan has non-integral capacity {value} on {index}")

    @classmethod
    def integral(cls, values: Iterable[int | Fraction]) -> CapacityPlan:
        return cls(tuple(Fraction(v) for v in values), PlanMode.INTEGRAL)

    @classmethod
    def fractional(cls, values: Iterable[Capacity | int]) -> CapacityPlan:
        return cls(
            tuple(v if isinstance(v, float) else Fraction(v) for v in values),
            PlanMode.FRACTIONAL,
        )

    @classmethod
    def zeros(cls, edge_count: int) -> CapacityPlan:
        return cls.integral([0] * edge_count)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(v, Fraction) for v in self.values)

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, edge_id: int) -> Capacity:
        return self.values[edge_id]

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v > 0]

    def check_length(self, instance: Instance) -> None:
        if len(self.values) != instance.edge_count:
            raise PlanError(
                f"plan has {len(self.values)} entries but instance has {instance.edge_count} edges"
            )


@dataclass(frozen=True)
class CutConstraint:
    """x(delta(S)) >= rhs, with rhs = |C_witness ∩ S|."""

    node_set: frozenset[int]
    rhs: int
    witness_color: int

    def __post_init__(self) -> None:
        if not self.node_set:
            raise ValueError("cut node set must be nonempty")
        if self.rhs <= 0:
            raise ValueError("cut right-hand side must be positive")

    def crossing_edges(self, instance: Instance) -> list[int]:
        return [
            e.id for e in instance.edges if (e.u in self.node_set) != (e.v in self.node_set)
        ]

    def lhs(self, instance: Instance, plan: CapacityPlan) -> Capacity:
        return sum((plan[e] for e in self.crossing_edges(instance)), Fraction(0))


@dataclass(frozen=True)
class Feasible:
    pass


@dataclass(frozen=True)
class Violation:
    cut: CutConstraint
    flow_value: Capacity


@dataclass(frozen=True)
class Step:
    """One traversal of an edge from ``source`` to ``target``."""

    edge_id: int
    source: int
    target: int


Walk = tuple[Step, ...]


def walk_vertices(start: int, walk: Sequence[Step]) -> list[int]:
    return [start, *(s.target for s in walk)]


@dataclass(frozen=True)
class Routing:
    """Per color, one terminal-to-root walk per terminal."""

    walks: tuple[Mapping[int, Walk], ...]

    def walk(self, color: int, terminal: int) -> Walk:
        return self.walks[color][terminal]

    def edge_loads(self, color: int) -> dict[int, int]:
        loads: dict[int, int] = {}
        for walk in self.walks[color].values():
            for step in walk:
                loads[step.edge_id] = loads.get(step.edge_id, 0) + 1
        return loads

    def used_edges(self) -> set[int]:
        return {s.edge_id for per_color in self.walks for w in per_color.values() for s in w}


class SplitKind(str, Enum):
    WIDE = "wide"
    THIN = "thin"


@dataclass(frozen=True)
class Split:
    u: int
    v: int
    green: int
    blue: int
    kind: SplitKind
    edge_ids: tuple[int, ...]


SplitNode = tuple[str, int]
"""("split", index), ("green", terminal) or ("blue", terminal)."""


@dataclass(frozen=True)
class SplitArc:
    tail: SplitNode
    head: SplitNode
    color: int


@dataclass(frozen=True)
class WeightDecomposition:
    blue_only: Fraction
    green_only: Fraction
    thin: Fraction
    wide: Fraction

    @property
    def total(self) -> Fraction:
        return self.blue_only + self.green_only + self.thin + self.wide

    @property
    def fresh_pair_bound(self) -> Fraction:
        return (
            Fraction(3, 2) * self.blue_only
            + Fraction(3, 2) * self.green_only
            + self.thin
            + 3 * self.wide
        )

    @property
    def reroute_bound(self) -> Fraction:
        return self.blue_only + self.green_only + 2 * self.thin

    @property
    def matching_bound(self) -> Fraction:
        return (self.fresh_pair_bound + self.reroute_bound) / 2


@dataclass(frozen=True)
class SplitReport:
    shared_edges: frozenset[int]
    splits: tuple[Split, ...]
    split_arcs: tuple[SplitArc, ...]
    alternating_paths: tuple[tuple[SplitNode, ...], ...]
    fresh_pairs: tuple[tuple[int, int], ...]
    non_sharing: tuple[tuple[int, int], ...]
    weights: WeightDecomposition
    unpaired: tuple[tuple[int, int], ...] = ()
    """Sharing terminals (color, terminal) whose alternating path could not be closed."""

    def split_graph(self) -> nx.MultiDiGraph:
        g = nx.MultiDiGraph()
        for arc in self.split_arcs:
            g.add_edge(arc.tail, arc.head, color=arc.color)
        return g


@dataclass(frozen=True)
class MatchedPair:
    green: int
    blue: int
    steiner_cost: Fraction
    steiner_edges: frozenset[int]


@dataclass(frozen=True)
class PairingResult:
    pairs: tuple[MatchedPair, ...]
    total_weight: Fraction


@dataclass(frozen=True)
class CoverTree:
    edge_ids: frozenset[int]
    nodes: frozenset[int]
    target: int
    weight: Fraction


@dataclass(frozen=True)
class LatencyWalk:
    vertices: tuple[int, ...]
    prefix_lengths: tuple[Fraction, ...]

    @property
    def cost(self) -> Fraction:
        return sum(self.prefix_lengths, Fraction(0))
