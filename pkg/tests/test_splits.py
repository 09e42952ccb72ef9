from collections import Counter
from fractions import Fraction

import pytest

from sandkit.domain.core import expand_parallel
from sandkit.domain.errors import ColorCountError, RoutingError
from sandkit.domain.flow import extract_routing
from sandkit.domain.lp import solve_exact
from sandkit.domain.models import CapacityPlan, Instance, Routing, SplitKind, Step
from sandkit.domain.paths import metric_closure
from sandkit.domain.splits import format_split_report, split_report
from sandkit.generators.random_instances import gen_random
from sandkit.services.solver_service import SolverService

from .helpers import BLUE_1, BLUE_2, GREEN_1, GREEN_2, walk_along


def test_crossing_gadget_splits(crossing: Instance, crossing_routing: Routing) -> None:
    report = split_report(crossing, crossing_routing)
    kinds = Counter(s.kind for s in report.splits)
    assert kinds == {SplitKind.WIDE: 1, SplitKind.THIN: 2}

    (wide,) = [s for s in report.splits if s.kind is SplitKind.WIDE]
    assert (wide.green, wide.blue) == (GREEN_1, BLUE_1)
    assert {wide.u, wide.v} == {5, 6}

    thin = {(s.green, s.blue): s for s in report.splits if s.kind is SplitKind.THIN}
    assert set(thin) == {(GREEN_1, BLUE_2), (GREEN_2, BLUE_1)}
    assert {thin[(GREEN_1, BLUE_2)].u, thin[(GREEN_1, BLUE_2)].v} == {3, 0}
    assert {thin[(GREEN_2, BLUE_1)].u, thin[(GREEN_2, BLUE_1)].v} == {4, 0}

    assert set(report.fresh_pairs) == {(GREEN_1, BLUE_1), (GREEN_2, BLUE_2)}
    assert report.non_sharing == ()


def test_crossing_gadget_weights(crossing: Instance, crossing_routing: Routing) -> None:
    weights = split_report(crossing, crossing_routing).weights
    assert (weights.blue_only, weights.green_only, weights.thin, weights.wide) == (3, 3, 4, 1)
    used = crossing_routing.used_edges()
    assert weights.total == sum(crossing.edges[e].weight for e in used)
    assert weights.matching_bound <= Fraction(3, 2) * weights.total


def test_crossing_gadget_split_graph_degrees(crossing: Instance, crossing_routing: Routing) -> None:
    graph = split_report(crossing, crossing_routing).split_graph()
    for node in graph.nodes:
        if node[0] == "split":
            colors = sorted(d["color"] for _, _, d in graph.in_edges(node, data=True))
            assert colors == [0, 1]
            assert graph.out_degree(node) in (0, 2)
        else:
            assert graph.in_degree(node) == 0
            assert graph.out_degree(node) == 1


def test_crossing_gadget_text_block(crossing: Instance, crossing_routing: Routing) -> None:
    text = format_split_report(split_report(crossing, crossing_routing), crossing)
    lines = text.splitlines()
    assert "split wide 6 5 g=7 b=9 edges=10" in lines
    assert "fresh 7 9" in lines
    assert "fresh 8 10" in lines
    assert lines[-1] == "weights wb=3 wg=3 wt=4 wd=1"


def test_disjoint_paths_share_nothing() -> None:
    instance = Instance.build(3, 0, [(0, 1, 1), (0, 2, 1)], [{1}, {2}])
    routing = Routing(
        walks=({1: walk_along(instance, [1, 0])}, {2: walk_along(instance, [2, 0])})
    )
    report = split_report(instance, routing)
    assert report.shared_edges == frozenset()
    assert report.splits == ()
    assert report.fresh_pairs == ()
    assert report.non_sharing == ((0, 1), (1, 2))


def test_split_report_needs_two_colors(unit_path: Instance) -> None:
    walks = {1: walk_along(unit_path, [1, 0]), 2: walk_along(unit_path, [2, 1, 0])}
    routing = Routing(walks=(walks,))
    with pytest.raises(ColorCountError):
        split_report(unit_path, routing)


def test_split_report_rejects_double_use() -> None:
    instance = Instance.build(4, 0, [(0, 1, 1), (1, 2, 1), (1, 3, 1)], [{2, 3}, {1}])
    routing = Routing(
        walks=(
            {2: walk_along(instance, [2, 1, 0]), 3: walk_along(instance, [3, 1, 0])},
            {1: walk_along(instance, [1, 0])},
        )
    )
    with pytest.raises(RoutingError):
        split_report(instance, routing)


def test_weight_decomposition_sums_to_used_weight() -> None:
    for seed in range(30):
        instance = gen_random(7, 2, 2, seed=seed)
        expansion = expand_parallel(instance)
        full = [1] * expansion.instance.edge_count
        routing = extract_routing(expansion.instance, CapacityPlan.integral(full))
        report = split_report(expansion.instance, routing)
        used = routing.used_edges()
        assert report.weights.total == sum(expansion.instance.edges[e].weight for e in used)


@pytest.mark.slow
def test_splits_of_exact_solutions_are_shortest_paths() -> None:
    for seed in range(15):
        instance = gen_random(6, 2, 2, seed=seed, weight_range=(1, 5))
        solution = solve_exact(instance)
        expansion = expand_parallel(instance)
        routing = extract_routing(expansion.instance, expansion.spread(solution.plan))
        report = split_report(expansion.instance, routing)
        closure = metric_closure(instance)
        for split in report.splits:
            length = sum(expansion.instance.edges[e].weight for e in split.edge_ids)
            assert length == closure.distance(split.u, split.v)


def test_unclosed_alternating_path_is_reported() -> None:
    # g shares 4-5 with b1, then 5-0 with b2; b1 leaves on the parallel 5-0 edge
    edges = [(1, 4, 1), (2, 4, 1), (4, 5, 1), (3, 5, 1), (5, 0, 1), (5, 0, 1)]
    instance = Instance.build(6, 0, edges, [{1}, {2, 3}])
    green = (Step(0, 1, 4), Step(2, 4, 5), Step(4, 5, 0))
    blue_1 = (Step(1, 2, 4), Step(2, 4, 5), Step(5, 5, 0))
    blue_2 = (Step(3, 3, 5), Step(4, 5, 0))
    report = split_report(instance, Routing(walks=({1: green}, {2: blue_1, 3: blue_2})))
    assert report.fresh_pairs == ((1, 2),)
    assert report.unpaired == ((1, 3),)
    assert "unpaired blue 3" in format_split_report(report, instance).splitlines()


def test_diagnose_pairs_every_terminal_of_exact_routings() -> None:
    for seed in range(40):
        instance = gen_random(7, 2, 3, seed=seed)
        report, text = SolverService.diagnose(instance, solve_exact(instance).plan)
        assert report.unpaired == ()
        assert report.non_sharing == ()
        greens = [g for g, _ in report.fresh_pairs]
        blues = [b for _, b in report.fresh_pairs]
        assert len(set(greens)) == len(greens) == 3
        assert len(set(blues)) == len(blues) == 3

        graph = report.split_graph()
        for node in graph.nodes:
            if node[0] == "split":
                colors = sorted(d["color"] for _, _, d in graph.in_edges(node, data=True))
                assert colors == [0, 1]
                assert graph.out_degree(node) in (0, 2)
            else:
                assert graph.in_degree(node) == 0
                assert graph.out_degree(node) == 1
        assert "unpaired" not in text


def test_diagnose_pads_the_smaller_color() -> None:
    instance = Instance.build(4, 0, [(0, 1, 2), (0, 2, 1), (2, 3, 1)], [{1}, {2, 3}])
    plan = CapacityPlan.integral([1, 2, 1])
    report, text = SolverService.diagnose(instance, plan)
    assert len(report.fresh_pairs) == 2
    assert report.unpaired == ()
    assert any(line.startswith("fresh d") for line in text.splitlines())
