from fractions import Fraction
from itertools import combinations

import networkx as nx
import pytest

from sandkit.domain.errors import LatencyError
from sandkit.domain.latency import (
    eulerify,
    greedy_cover_tree,
    latency_exact,
    latency_round,
    latency_solve_greedy,
    walk_cost,
    walk_length,
)
from sandkit.domain.models import CoverTree, Instance
from sandkit.generators.random_instances import gen_random


def star() -> Instance:
    return Instance.build(3, 0, [(0, 1, 1), (0, 2, 1)], [{1, 2}])


def test_walk_cost_unit_path(unit_path: Instance) -> None:
    result = walk_cost(unit_path, [0, 1, 2])
    assert result.prefix_lengths == (1, 2)
    assert result.cost == 3


def test_walk_cost_waits_for_the_slowest_color() -> None:
    instance = Instance.build(3, 0, [(0, 1, 1), (1, 2, 1)], [{1}, {2}])
    result = walk_cost(instance, [0, 1, 2])
    assert result.prefix_lengths == (2,)
    assert result.cost == 2


def test_walk_cost_smaller_color_starts_ahead() -> None:
    instance = Instance.build(4, 0, [(0, 1, 1), (1, 2, 1), (2, 3, 1)], [{1, 2}, {3}])
    # the singleton color is one level ahead, so level 1 waits only on node 1
    assert walk_cost(instance, [0, 1, 2, 3]).prefix_lengths == (1, 3)


def test_walk_cost_without_colors() -> None:
    instance = Instance.build(2, 0, [(0, 1, 1)], [])
    assert walk_cost(instance, [0]).cost == 0


def test_walk_cost_may_repeat_vertices(unit_path: Instance) -> None:
    assert walk_cost(unit_path, [0, 1, 0, 1, 2]).prefix_lengths == (1, 4)


@pytest.mark.parametrize("walk", [[1, 2], [0, 2], [0, 1], []])
def test_walk_cost_rejects_bad_walks(unit_path: Instance, walk: list[int]) -> None:
    with pytest.raises(LatencyError):
        walk_cost(unit_path, walk)


def test_fractional_weights_are_rejected() -> None:
    instance = Instance.build(2, 0, [(0, 1, "1/2")], [{1}])
    with pytest.raises(LatencyError):
        walk_cost(instance, [0, 1])


def test_eulerify_star() -> None:
    instance = star()
    tree = CoverTree(edge_ids=frozenset({0, 1}), nodes=frozenset({0, 1, 2}), target=2, weight=2)
    walk = eulerify(instance, tree)
    assert walk == [0, 1, 0, 2, 0]
    assert walk_length(instance, walk) == 4


def test_eulerify_doubles_tree_weight() -> None:
    for seed in range(100):
        instance = gen_random(2 + seed % 9, 1, 1, seed=seed, extra_edges=0)
        weight = sum(e.weight for e in instance.edges)
        tree = CoverTree(
            edge_ids=frozenset(e.id for e in instance.edges),
            nodes=frozenset(range(instance.node_count)),
            target=1,
            weight=weight,
        )
        walk = eulerify(instance, tree)
        assert walk[0] == walk[-1] == instance.root
        assert set(walk) == set(range(instance.node_count))
        assert walk_length(instance, walk) == 2 * weight


def test_eulerify_needs_the_root() -> None:
    tree = CoverTree(edge_ids=frozenset({1}), nodes=frozenset({1, 2}), target=1, weight=1)
    with pytest.raises(LatencyError):
        eulerify(Instance.build(3, 0, [(0, 1, 1), (1, 2, 1)], [{2}]), tree)


def test_greedy_cover_tree_unit_path(unit_path: Instance) -> None:
    tree = greedy_cover_tree(unit_path, 2)
    assert tree.weight == 2
    assert tree.nodes == frozenset({0, 1, 2})
    assert tree.target == 2


def test_greedy_cover_tree_level_zero_is_the_root(unit_path: Instance) -> None:
    tree = greedy_cover_tree(unit_path, 0)
    assert tree.edge_ids == frozenset()
    assert tree.nodes == frozenset({0})


def test_greedy_cover_tree_rejects_high_levels(unit_path: Instance) -> None:
    with pytest.raises(LatencyError):
        greedy_cover_tree(unit_path, 3)


def test_latency_round_concatenates_scales(unit_path: Instance) -> None:
    trees = {1: greedy_cover_tree(unit_path, 1), 2: greedy_cover_tree(unit_path, 2)}
    result = latency_round(unit_path, trees)
    assert result.vertices == (0, 1, 0, 1, 2, 1, 0)
    assert result.prefix_lengths == (1, 4)


def test_latency_round_draws_one_candidate(unit_path: Instance) -> None:
    full = greedy_cover_tree(unit_path, 2)
    result = latency_round(unit_path, {2: [full, full]}, seed=3)
    assert result.cost == 3


def test_latency_round_requires_full_coverage(unit_path: Instance) -> None:
    with pytest.raises(LatencyError):
        latency_round(unit_path, {1: greedy_cover_tree(unit_path, 1)})


def test_latency_exact_unit_path(unit_path: Instance) -> None:
    result = latency_exact(unit_path)
    assert result.vertices == (0, 1, 2)
    assert result.cost == 3


def test_latency_exact_limits_terminals() -> None:
    instance = gen_random(12, 1, 10, seed=0)
    with pytest.raises(LatencyError):
        latency_exact(instance)


def test_greedy_walk_on_star() -> None:
    result = latency_solve_greedy(star())
    assert result.vertices[0] == 0
    assert result.cost >= latency_exact(star()).cost


def test_greedy_never_beats_exact() -> None:
    for seed in range(100):
        instance = gen_random(4 + seed % 4, 1 + seed % 3, 2, seed=seed, weight_range=(1, 6))
        exact = latency_exact(instance).cost
        greedy = latency_solve_greedy(instance).cost
        assert exact <= greedy <= 16 * exact


def cheapest_walk_by_enumeration(instance: Instance) -> Fraction:
    """Minimum walk_cost over every root walk of bounded hop count that covers all terminals."""
    terminals = instance.terminals
    max_hops = len(terminals) * (instance.node_count - 1)
    best: Fraction | None = None

    def extend(walk: list[int]) -> None:
        nonlocal best
        if terminals <= set(walk):
            cost = walk_cost(instance, walk).cost
            if best is None or cost < best:
                best = cost
            return
        if len(walk) > max_hops:
            return
        for neighbour in instance.graph.neighbors(walk[-1]):
            walk.append(neighbour)
            extend(walk)
            walk.pop()

    extend([instance.root])
    assert best is not None
    return best


def test_latency_exact_matches_walk_enumeration() -> None:
    for seed in range(12):
        instance = gen_random(4, 1 + seed % 2, 2, seed=seed, weight_range=(1, 3))
        assert latency_exact(instance).cost == cheapest_walk_by_enumeration(instance)


def test_greedy_cover_tree_is_never_below_the_cheapest_cover() -> None:
    for seed in range(30):
        instance = gen_random(6, 2, 2, seed=seed, weight_range=(1, 5))
        others = [v for v in range(instance.node_count) if v != instance.root]
        for j in (1, 2):
            cheapest: Fraction | None = None
            for size in range(len(others) + 1):
                for extra in combinations(others, size):
                    nodes = {instance.root, *extra}
                    if any(len(color & nodes) < j for color in instance.colors):
                        continue
                    sub = instance.graph.subgraph(nodes)
                    if not nx.is_connected(sub):
                        continue
                    tree = nx.minimum_spanning_tree(sub, weight="weight")
                    weight = sum((d["weight"] for _, _, d in tree.edges(data=True)), Fraction(0))
                    if cheapest is None or weight < cheapest:
                        cheapest = weight
            greedy = greedy_cover_tree(instance, j)
            assert cheapest is not None
            assert greedy.weight >= cheapest
