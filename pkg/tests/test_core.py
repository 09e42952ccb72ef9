from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sandkit.domain.core import (
    expand_parallel,
    mst_cost,
    pad_colors,
    plan_cost,
    restrict_plan,
    shift_root,
)
from sandkit.domain.errors import ColorCountError, InstanceError, PlanError
from sandkit.domain.flow import check_feasible
from sandkit.domain.models import CapacityPlan, Feasible, Instance, PlanMode
from sandkit.generators.kneser import gen_kneser
from sandkit.generators.random_instances import gen_random


def test_instance_rejects_root_in_color() -> None:
    with pytest.raises(InstanceError):
        Instance.build(2, 0, [(0, 1, 1)], [{0}])


def test_instance_rejects_self_loop_and_negative_weight() -> None:
    with pytest.raises(InstanceError):
        Instance.build(2, 0, [(1, 1, 1)], [{1}])
    with pytest.raises(InstanceError):
        Instance.build(2, 0, [(0, 1, -1)], [{1}])


def test_parallel_edges_keep_their_ids() -> None:
    instance = Instance.build(2, 0, [(0, 1, 3), (0, 1, 2)], [{1}])
    assert instance.edge_count == 2
    assert instance.edge_between(0, 1).id == 1


def test_integral_plan_rejects_fractions() -> None:
    with pytest.raises(PlanError):
        CapacityPlan(values=(Fraction(1, 2),), mode=PlanMode.INTEGRAL)


def test_plan_cost_of_zero_plan(i2: Instance) -> None:
    assert plan_cost(i2, CapacityPlan.zeros(3)) == 0


def test_plan_cost_all_ones(i2: Instance) -> None:
    assert plan_cost(i2, CapacityPlan.integral([1, 1, 1])) == 12


def test_plan_cost_length_mismatch(i2: Instance) -> None:
    with pytest.raises(PlanError):
        plan_cost(i2, CapacityPlan.integral([1, 1]))


def test_plan_cost_kneser_s3() -> None:
    instance, plan = gen_kneser(3)
    assert plan_cost(instance, plan) == Fraction(328, 10)


@given(
    st.lists(st.integers(0, 6), min_size=3, max_size=3),
    st.lists(st.integers(0, 6), min_size=3, max_size=3),
    st.integers(0, 4),
    st.integers(0, 4),
)
def test_plan_cost_is_linear(x: list[int], y: list[int], a: int, b: int) -> None:
    instance = Instance.build(4, 0, [(0, 1, 10), (1, 2, 1), (1, 3, "1/2")], [{2}, {3}])
    combined = CapacityPlan.integral(a * xi + b * yi for xi, yi in zip(x, y))
    expected = a * plan_cost(instance, CapacityPlan.integral(x)) + b * plan_cost(
        instance, CapacityPlan.integral(y)
    )
    assert plan_cost(instance, combined) == expected


def test_expand_parallel_copies_by_largest_color() -> None:
    instance = Instance.build(6, 0, [(0, 1, 2)], [{1, 2}, {3, 4, 5}])
    expansion = expand_parallel(instance)
    assert expansion.instance.edge_count == 3
    assert expansion.origin == (0, 0, 0)
    assert all(e.weight == 2 for e in expansion.instance.edges)


def test_expand_parallel_singleton_colors_is_identity(i2: Instance) -> None:
    expansion = expand_parallel(i2)
    assert expansion.instance.edges == i2.edges


def test_expansion_spread_and_aggregate_round_trip() -> None:
    instance = gen_random(6, 2, 2, seed=3)
    expansion = expand_parallel(instance)
    plan = CapacityPlan.integral([2] * instance.edge_count)
    spread = expansion.spread(plan)
    assert expansion.aggregate(spread, instance) == plan
    assert plan_cost(expansion.instance, spread) == plan_cost(instance, plan)


def test_aggregated_feasible_plan_stays_feasible() -> None:
    for seed in range(20):
        instance = gen_random(6, 2, 2, seed=seed)
        expansion = expand_parallel(instance)
        full = CapacityPlan.integral([1] * expansion.instance.edge_count)
        assert isinstance(check_feasible(expansion.instance, full), Feasible)
        aggregated = expansion.aggregate(full, instance)
        assert isinstance(check_feasible(instance, aggregated), Feasible)


def test_pad_colors_balanced_is_unchanged(i2: Instance) -> None:
    assert pad_colors(i2) is i2


def test_pad_colors_adds_dummies_to_smaller_color() -> None:
    instance = Instance.build(5, 0, [(0, 1, 1), (0, 2, 1), (0, 3, 1), (0, 4, 1)], [{1}, {2, 3, 4}])
    padded = pad_colors(instance)
    assert padded.node_count == 7
    assert padded.dummies == frozenset({5, 6})
    assert padded.colors[0] == frozenset({1, 5, 6})
    for dummy in (5, 6):
        (edge,) = padded.incident(dummy)
        assert edge.weight == 0
        assert edge.other(dummy) == 0


def test_pad_colors_needs_two_colors() -> None:
    with pytest.raises(ColorCountError):
        pad_colors(Instance.build(2, 0, [(0, 1, 1)], [{1}]))


def test_restrict_plan_drops_padding_edges() -> None:
    plan = CapacityPlan.integral([1, 2, 3, 4])
    assert restrict_plan(plan, 2).values == (1, 2)


def test_shift_root_adds_zero_edge() -> None:
    instance = Instance.build(3, 0, [(0, 1, 1), (1, 2, 1)], [{1, 2}])
    shifted = shift_root(instance)
    assert shifted.root == 3
    assert shifted.edges[-1].weight == 0
    assert {shifted.edges[-1].u, shifted.edges[-1].v} == {0, 3}


def test_mst_cost_triangle() -> None:
    instance = Instance.build(3, 0, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], [{1}])
    assert mst_cost(instance) == 2


@pytest.mark.parametrize(("s", "expected"), [(2, 11), (3, 36)])
def test_mst_cost_kneser(s: int, expected: int) -> None:
    instance, _ = gen_kneser(s)
    assert mst_cost(instance) == expected


def test_mst_cost_disconnected() -> None:
    with pytest.raises(InstanceError):
        mst_cost(Instance.build(3, 0, [(0, 1, 1)], [{1}]))
