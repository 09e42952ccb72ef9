from fractions import Fraction

import networkx as nx
import pytest

from sandkit.domain.approx import shortest_path_solve
from sandkit.domain.errors import InfeasibleError, PlanError, RoutingError
from sandkit.domain.flow import check_feasible, extract_routing, max_flow, validate_routing
from sandkit.domain.lp import violated_cuts_bruteforce
from sandkit.domain.models import CapacityPlan, Feasible, Instance, Violation, walk_vertices
from sandkit.generators.kneser import gen_kneser
from sandkit.generators.random_instances import gen_random


def test_max_flow_single_arc() -> None:
    result = max_flow(2, [(1, 0, Fraction(1))], {1: Fraction(1)}, sink=0)
    assert result.value == 1
    assert result.source_side == frozenset()


def test_max_flow_bottleneck() -> None:
    arcs = [(1, 3, Fraction(1)), (2, 3, Fraction(1)), (3, 0, Fraction(1))]
    result = max_flow(4, arcs, {1: Fraction(1), 2: Fraction(1)}, sink=0)
    assert result.value == 1
    assert 0 not in result.source_side


def test_max_flow_zero_capacity() -> None:
    assert max_flow(2, [(1, 0, Fraction(0))], {1: Fraction(1)}, sink=0).value == 0


def test_max_flow_skips_zero_capacity_arcs() -> None:
    arcs = [(1, 0, Fraction(2)), (2, 0, Fraction(0)), (2, 1, Fraction(1)), (0, 2, Fraction(0))]
    result = max_flow(3, arcs, {1: Fraction(1), 2: Fraction(1)}, sink=0)
    assert result.value == 2
    assert result.arc_flows == {(1, 0): 2, (2, 1): 1}


def test_zero_entries_do_not_break_routing() -> None:
    instance = Instance.build(4, 0, [(0, 1, 10), (1, 2, 1), (1, 3, 1), (0, 3, 4)], [{2}, {3}])
    plan = CapacityPlan.integral([1, 1, 0, 1])
    assert isinstance(check_feasible(instance, plan), Feasible)
    routing = extract_routing(instance, plan)
    validate_routing(instance, plan, routing)
    assert walk_vertices(3, routing.walk(1, 3)) == [3, 0]


def test_max_flow_matches_networkx_on_random_graphs() -> None:
    for seed in range(30):
        instance = gen_random(7, 1, 3, seed=seed, weight_range=(0, 3))
        arcs = []
        for edge in instance.edges:
            arcs.append((edge.u, edge.v, edge.weight))
            arcs.append((edge.v, edge.u, edge.weight))
        supplies = {t: Fraction(1) for t in instance.colors[0]}
        result = max_flow(instance.node_count, arcs, supplies, sink=0)

        reference = nx.DiGraph()
        for u, v, cap in arcs:
            reference.add_edge(u, v, capacity=int(cap))
        for t in supplies:
            reference.add_edge("s", t, capacity=1)
        assert result.value == nx.maximum_flow_value(reference, "s", 0)


def test_max_flow_is_exact_on_rationals() -> None:
    arcs = [(1, 0, Fraction(1, 3)), (1, 0, Fraction(1, 3)), (1, 0, Fraction(1, 3))]
    assert max_flow(2, arcs, {1: Fraction(1)}, sink=0).value == Fraction(1)


def test_check_feasible_all_ones(i2: Instance) -> None:
    assert isinstance(check_feasible(i2, CapacityPlan.integral([1, 1, 1])), Feasible)


def test_check_feasible_isolated_terminal(i2: Instance) -> None:
    verdict = check_feasible(i2, CapacityPlan.integral([1, 1, 0]))
    assert isinstance(verdict, Violation)
    assert verdict.cut.node_set == frozenset({3})
    assert verdict.cut.rhs == 1
    assert verdict.cut.witness_color == 1


def test_check_feasible_length_mismatch(i2: Instance) -> None:
    with pytest.raises(PlanError):
        check_feasible(i2, CapacityPlan.integral([1]))


@pytest.mark.parametrize("s", [2, 3])
def test_kneser_fractional_plan_is_feasible(s: int) -> None:
    instance, plan = gen_kneser(s)
    assert isinstance(check_feasible(instance, plan), Feasible)


def test_kneser_plan_scaled_down_is_infeasible() -> None:
    instance, plan = gen_kneser(2)
    shrunk = CapacityPlan.fractional(v * Fraction(9, 10) for v in plan.values)
    assert isinstance(check_feasible(instance, shrunk), Violation)


def test_check_feasible_agrees_with_subset_enumeration() -> None:
    for seed in range(60):
        instance = gen_random(6, 2, 2, seed=seed, weight_range=(1, 4))
        plan = CapacityPlan.integral([(seed + e.id) % 3 for e in instance.edges])
        verdict = check_feasible(instance, plan)
        violated = violated_cuts_bruteforce(instance, plan)
        assert isinstance(verdict, Feasible) == (not violated)


def test_extract_routing_i2(i2: Instance) -> None:
    routing = extract_routing(i2, CapacityPlan.integral([1, 1, 1]))
    assert walk_vertices(2, routing.walk(0, 2)) == [2, 1, 0]
    assert walk_vertices(3, routing.walk(1, 3)) == [3, 1, 0]


def test_extract_routing_star() -> None:
    instance = Instance.build(3, 0, [(0, 1, 1), (0, 2, 1)], [{1, 2}])
    routing = extract_routing(instance, CapacityPlan.integral([1, 1]))
    assert len(routing.walk(0, 1)) == 1
    assert len(routing.walk(0, 2)) == 1


def test_extract_routing_rejects_infeasible(i2: Instance) -> None:
    with pytest.raises(InfeasibleError):
        extract_routing(i2, CapacityPlan.integral([1, 1, 0]))


def test_extract_routing_rejects_fractional(i2: Instance) -> None:
    with pytest.raises(PlanError):
        extract_routing(i2, CapacityPlan.fractional([1, 1, 1]))


def test_extracted_routings_validate() -> None:
    for seed in range(40):
        instance = gen_random(7, 3, 3, seed=seed)
        plan = shortest_path_solve(instance)
        routing = extract_routing(instance, plan)
        validate_routing(instance, plan, routing)
        for per_color in routing.walks:
            for terminal, walk in per_color.items():
                nodes = walk_vertices(terminal, walk)
                assert len(nodes) == len(set(nodes))


def test_validate_routing_catches_overuse(i2: Instance) -> None:
    plan = CapacityPlan.integral([1, 1, 1])
    routing = extract_routing(i2, plan)
    with pytest.raises(RoutingError):
        validate_routing(i2, CapacityPlan.integral([0, 1, 1]), routing)
