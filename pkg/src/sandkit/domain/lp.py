"""Cut-covering LP relaxation and exact branch-and-bound for (IP).

Edge upper bound: no edge ever needs more than U = max_i |C_i| units. Every cut
requirement f(S) is at most U, so lowering any x_e > U to U keeps every cut
x(delta(S)) >= f(S) satisfied and never raises the cost; the bound is therefore
valid for both the relaxation and the integer program.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np
from scipy.optimize import linprog

from sandkit.config import settings
from sandkit.domain.core import plan_cost
from sandkit.domain.errors import BudgetExceededError, InfeasibleError
from sandkit.domain.flow import check_feasible, color_flows
from sandkit.domain.models import CapacityPlan, CutConstraint, Instance, Violation

logger = logging.getLogger(__name__)


def separate(
    instance: Instance,
    x: CapacityPlan,
    tol: float | None = None,
) -> list[CutConstraint]:
    """One min-cut constraint per color whose max-flow falls short of |C_i|."""
    tol = settings.feasibility_tol if tol is None else tol
    cuts = []
    for index, result in enumerate(color_flows(instance, x)):
        color = instance.colors[index]
        short = result.value < len(color) if x.is_exact else result.value < len(color) - tol
        if short:
            cuts.append(
                CutConstraint(
                    node_set=result.source_side,
                    rhs=len(color & result.source_side),
                    witness_color=index,
                )
            )
    return cuts


def cut_requirement(instance: Instance, node_set: frozenset[int]) -> tuple[int, int]:
    """f(S) = max_i |C_i ∩ S| and the lowest color index attaining it."""
    best, witness = 0, 0
    for index, color in enumerate(instance.colors):
        size = len(color & node_set)
        if size > best:
            best, witness = size, index
    return best, witness


def violated_cuts_bruteforce(
    instance: Instance,
    x: CapacityPlan,
    tol: float | None = None,
) -> list[CutConstraint]:
    """Every violated S ⊆ V minus the root, by subset enumeration (small instances only)."""
    tol = settings.feasibility_tol if tol is None else tol
    others = [n for n in range(instance.node_count) if n != instance.root]
    violated = []
    for size in range(1, len(others) + 1):
        for subset in combinations(others, size):
            node_set = frozenset(subset)
            rhs, witness = cut_requirement(instance, node_set)
            if rhs == 0:
                continue
            cut = CutConstraint(node_set=node_set, rhs=rhs, witness_color=witness)
            lhs = cut.lhs(instance, x)
            if (lhs < rhs) if x.is_exact else (lhs < rhs - tol):
                violated.append(cut)
    return violated


class CutPool:
    """Working set of cut constraints as dense rows over the edge ids."""

    def __init__(self, instance: Instance) -> None:
        self._instance = instance
        self._rows: list[np.ndarray] = []
        self._rhs: list[float] = []
        self._index: dict[frozenset[int], int] = {}

    def __len__(self) -> int:
        return len(self._rows)

    def add(self, cut: CutConstraint) -> bool:
        known = self._index.get(cut.node_set)
        if known is not None:
            if self._rhs[known] >= cut.rhs:
                return False
            self._rhs[known] = float(cut.rhs)
            return True
        row = np.zeros(self._instance.edge_count)
        row[cut.crossing_edges(self._instance)] = 1.0
        self._index[cut.node_set] = len(self._rows)
        self._rows.append(row)
        self._rhs.append(float(cut.rhs))
        return True

    def add_all(self, cuts: list[CutConstraint]) -> int:
        return sum(1 for cut in cuts if self.add(cut))

    def add_singletons(self) -> None:
        for terminal in sorted(self._instance.terminals):
            self.add(CutConstraint(frozenset({terminal}), 1, _color_of(self._instance, terminal)))

    def solve(self, lower: np.ndarray, upper: np.ndarray) -> np.ndarray | None:
        """min w.x over the pool and bounds; None when infeasible."""
        weights = np.array([float(e.weight) for e in self._instance.edges])
        a_ub = -np.vstack(self._rows) if self._rows else None
        b_ub = -np.array(self._rhs) if self._rows else None
        result = linprog(
            weights,
            A_ub=a_ub,
            b_ub=b_ub,
            bounds=list(zip(lower, upper)),
            method="highs-ds",
            options={
                "primal_feasibility_tolerance": 1e-9,
                "dual_feasibility_tolerance": settings.optimality_tol,
            },
        )
        if result.status == 2:
            return None
        if result.status != 0:
            raise RuntimeError(f"LP solver failed: {result.message}")
        return np.clip(result.x, lower, upper)


def _color_of(instance: Instance, terminal: int) -> int:
    return next(i for i, c in enumerate(instance.colors) if terminal in c)


def _require_connected(instance: Instance) -> None:
    missing = instance.unreachable_terminals()
    if missing:
        raise InfeasibleError(f"terminals {missing} cannot reach the root")


@dataclass(frozen=True)
class LpSolution:
    plan: CapacityPlan
    optimum: float
    cuts: int
    rounds: int


def _cutting_planes(
    instance: Instance,
    pool: CutPool,
    lower: np.ndarray,
    upper: np.ndarray,
    cutoff: float = math.inf,
) -> tuple[np.ndarray | None, int]:
    """Resolve until separation finds nothing new; stops early once the bound reaches cutoff."""
    weights = np.array([float(e.weight) for e in instance.edges])
    rounds = 0
    while True:
        rounds += 1
        x = pool.solve(lower, upper)
        if x is None:
            return None, rounds
        if float(weights @ x) >= cutoff:
            return x, rounds
        cuts = separate(instance, CapacityPlan.fractional(x.tolist()))
        added = pool.add_all(cuts)
        logger.debug("cut round %d: objective=%.9g new cuts=%d", rounds, weights @ x, added)
        if not added:
            if cuts:
                logger.warning("separation repeats known cuts; stopping at tolerance")
            return x, rounds


def solve_lp(instance: Instance) -> LpSolution:
    """LP relaxation of (IP) by cutting planes over max-flow separation."""
    _require_connected(instance)
    pool = CutPool(instance)
    pool.add_singletons()
    m = instance.edge_count
    lower = np.zeros(m)
    upper = np.full(m, float(instance.max_demand))
    x, rounds = _cutting_planes(instance, pool, lower, upper)
    if x is None:
        raise InfeasibleError("LP relaxation is infeasible")
    plan = CapacityPlan.fractional(x.tolist())
    optimum = float(sum(float(e.weight) * x[e.id] for e in instance.edges))
    logger.info("LP optimum %.9g after %d rounds, %d cuts", optimum, rounds, len(pool))
    return LpSolution(plan=plan, optimum=optimum, cuts=len(pool), rounds=rounds)


@dataclass(frozen=True)
class ExactSolution:
    plan: CapacityPlan
    optimum: Fraction
    optimal: bool
    nodes: int
    cuts: int
    lower_bound: float

    def require_optimal(self) -> ExactSolution:
        if not self.optimal:
            raise BudgetExceededError(self.plan, self.optimum, self.lower_bound, self.nodes)
        return self


@dataclass(order=True)
class _Node:
    bound: float
    depth: int = field(compare=False)
    lower: np.ndarray = field(compare=False)
    upper: np.ndarray = field(compare=False)


def _most_fractional(x: np.ndarray, tol: float) -> int | None:
    best, best_gap = None, tol
    for edge_id, value in enumerate(x):
        gap = min(value - math.floor(value), math.ceil(value) - value)
        if gap > best_gap + 1e-12:
            best, best_gap = edge_id, gap
    return best


def solve_exact(instance: Instance, node_budget: int | None = None) -> ExactSolution:
    """Optimal integral plan by LP-based branch-and-bound.

    Depth-first on the most fractional variable (lowest edge id on ties); every
    ``restart_interval`` nodes the open node with the best bound is explored next.
    The incumbent starts from the shortest-path tree plan.
    """
    from sandkit.domain.approx import shortest_path_solve

    _require_connected(instance)
    budget = settings.budget if node_budget is None else node_budget
    tol = settings.integrality_tol

    incumbent = shortest_path_solve(instance)
    incumbent_cost = Fraction(plan_cost(instance, incumbent))
    logger.debug("initial incumbent cost %s", incumbent_cost)

    pool = CutPool(instance)
    pool.add_singletons()
    m = instance.edge_count
    stack = [_Node(0.0, 0, np.zeros(m), np.full(m, float(instance.max_demand)))]
    nodes = 0

    def cutoff() -> float:
        return float(incumbent_cost) - settings.optimality_tol * max(1.0, float(incumbent_cost))

    while stack:
        if nodes >= budget:
            lower_bound = min(n.bound for n in stack)
            logger.warning("branch-and-bound budget of %d nodes exhausted", budget)
            return ExactSolution(
                incumbent,
                incumbent_cost,
                False,
                nodes,
                len(pool),
                min(lower_bound, float(incumbent_cost)),
            )
        if nodes and nodes % settings.restart_interval == 0:
            best = min(range(len(stack)), key=lambda i: stack[i].bound)
            stack.append(stack.pop(best))
        node = stack.pop()
        nodes += 1
        if node.bound >= cutoff():
            continue

        while True:
            x, _ = _cutting_planes(instance, pool, node.lower, node.upper, cutoff())
            if x is None:
                break
            bound = float(sum(float(e.weight) * x[e.id] for e in instance.edges))
            if bound >= cutoff():
                break
            branch_on = _most_fractional(x, tol)
            if branch_on is None:
                candidate = CapacityPlan.integral(int(round(v)) for v in x)
                verdict = check_feasible(instance, candidate)
                if isinstance(verdict, Violation):
                    pool.add(verdict.cut)
                    continue
                cost = Fraction(plan_cost(instance, candidate))
                if cost < incumbent_cost:
                    incumbent, incumbent_cost = candidate, cost
                    logger.debug("node %d: new incumbent %s", nodes, cost)
                break
            value = x[branch_on]
            down_upper = node.upper.copy()
            down_upper[branch_on] = math.floor(value)
            up_lower = node.lower.copy()
            up_lower[branch_on] = math.ceil(value)
            stack.append(_Node(bound, node.depth + 1, node.lower, down_upper))
            stack.append(_Node(bound, node.depth + 1, up_lower, node.upper))
            break

    logger.info("exact optimum %s after %d nodes, %d cuts", incumbent_cost, nodes, len(pool))
    return ExactSolution(incumbent, incumbent_cost, True, nodes, len(pool), float(incumbent_cost))
