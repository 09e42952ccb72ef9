from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from sandkit.domain.approx import matching_solve, shortest_path_solve
from sandkit.domain.core import expand_parallel, format_node, pad_colors, plan_cost, shift_root
from sandkit.domain.errors import PlanError
from sandkit.domain.flow import check_feasible, extract_routing
from sandkit.domain.frt import frt_solve
from sandkit.domain.latency import latency_exact, latency_solve_greedy, walk_cost
from sandkit.domain.lp import solve_exact, solve_lp
from sandkit.domain.models import (
    Capacity,
    CapacityPlan,
    Feasible,
    Instance,
    LatencyWalk,
    PlanMode,
    SplitReport,
    Violation,
)
from sandkit.domain.splits import format_split_report, split_report
from sandkit.storage.text_format import format_number

logger = logging.getLogger(__name__)


class Algorithm(str, Enum):
    EXACT = "exact"
    LP = "lp"
    MATCHING = "matching"
    SP = "sp"
    FRT = "frt"


class LatencyAlgorithm(str, Enum):
    GREEDY = "greedy"
    EXACT = "exact"


@dataclass(frozen=True)
class SolveOutcome:
    plan: CapacityPlan
    cost: Capacity
    summary: str
    details: list[str] = field(default_factory=list)


def format_cost(value: Capacity) -> str:
    if isinstance(value, float):
        return f"{value:.10g}"
    return format_number(value)


def format_violation(instance: Instance, violation: Violation) -> str:
    nodes = " ".join(format_node(instance, n) for n in sorted(violation.cut.node_set))
    return (
        f"violated color={violation.cut.witness_color} rhs={violation.cut.rhs} "
        f"flow={format_cost(violation.flow_value)} set={nodes}"
    )


class SolverService:
    """Dispatches solver runs and renders their one-line summaries."""

    def __init__(self, budget: int | None = None) -> None:
        self._budget = budget

    def solve(self, instance: Instance, algorithm: Algorithm, seed: int = 0) -> SolveOutcome:
        logger.info("solving with %s", algorithm.value)
        if algorithm is Algorithm.EXACT:
            solution = solve_exact(instance, node_budget=self._budget).require_optimal()
            return SolveOutcome(
                plan=solution.plan,
                cost=solution.optimum,
                summary=(
                    f"optimum={format_cost(solution.optimum)} "
                    f"nodes={solution.nodes} cuts={solution.cuts}"
                ),
            )
        if algorithm is Algorithm.LP:
            relaxation = solve_lp(instance)
            return SolveOutcome(
                plan=relaxation.plan,
                cost=relaxation.optimum,
                summary=f"optimum={format_cost(relaxation.optimum)} nodes=0 cuts={relaxation.cuts}",
            )
        if algorithm is Algorithm.MATCHING:
            matching = matching_solve(instance)
            details = [
                f"pair {format_node(matching.padded, p.green)} "
                f"{format_node(matching.padded, p.blue)} cost={format_cost(p.steiner_cost)}"
                for p in matching.pairing.pairs
            ]
            return self._priced(instance, matching.plan, details)
        if algorithm is Algorithm.SP:
            return self._priced(instance, shortest_path_solve(instance))
        return self._priced(instance, frt_solve(instance, seed))

    @staticmethod
    def _priced(
        instance: Instance, plan: CapacityPlan, details: list[str] | None = None
    ) -> SolveOutcome:
        cost = plan_cost(instance, plan)
        return SolveOutcome(plan, cost, f"optimum={format_cost(cost)}", details or [])

    @staticmethod
    def check(instance: Instance, plan: CapacityPlan) -> tuple[bool, str]:
        verdict = check_feasible(instance, plan)
        if isinstance(verdict, Feasible):
            return True, "feasible"
        return False, format_violation(instance, verdict)

    @staticmethod
    def diagnose(instance: Instance, plan: CapacityPlan) -> tuple[SplitReport, str]:
        """Split diagnostics of an integral two-color plan.

        The colors are padded to equal size and a fresh root hangs off the old one,
        so every walk ends on a shared edge; the report is taken on the
        unit-capacity expansion of that instance.
        """
        plan.check_length(instance)
        if plan.mode is not PlanMode.INTEGRAL:
            raise PlanError("split diagnostics need an integral plan")
        padded = pad_colors(instance)
        shifted = shift_root(padded)
        dummy_edges = padded.edge_count - instance.edge_count
        lifted = CapacityPlan.integral([*plan.values, *([1] * dummy_edges), padded.max_demand])
        expansion = expand_parallel(shifted)
        routing = extract_routing(expansion.instance, expansion.spread(lifted))
        report = split_report(expansion.instance, routing)
        return report, format_split_report(report, expansion.instance)

    @staticmethod
    def latency(instance: Instance, algorithm: LatencyAlgorithm) -> LatencyWalk:
        if algorithm is LatencyAlgorithm.EXACT:
            return latency_exact(instance)
        return latency_solve_greedy(instance)

    @staticmethod
    def evaluate_walk(instance: Instance, vertices: list[int]) -> LatencyWalk:
        return walk_cost(instance, vertices)


def format_latency(walk: LatencyWalk) -> str:
    prefixes = ",".join(format_number(t) for t in walk.prefix_lengths)
    return f"cost={format_number(walk.cost)} t={prefixes}"
