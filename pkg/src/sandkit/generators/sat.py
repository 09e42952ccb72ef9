"""Reduction from 3-occurrence SAT to two-color instances.

Node layout: the root is 0, clause k_j is node j + 1 (j counted from 0), and the
seven gadget nodes y^1..y^7 of variable i follow the clauses in blocks of seven.
Root edges into y^1, y^3, y^5, y^7 cost 2, the gadget path costs 1 per edge and
the three clause edges cost M. A satisfiable formula with m clauses and p
variables has a plan of cost exactly (M + 2) * m + 8 * p.
"""

from __future__ import annotations

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import NamedTuple

import numpy as np

from sandkit.domain.errors import GeneratorError
from sandkit.domain.models import CapacityPlan, Instance, Routing, Step, Walk

logger = logging.getLogger(__name__)


class Literal(NamedTuple):
    variable: int
    """1-based, as in DIMACS."""
    positive: bool


@dataclass(frozen=True)
class CnfFormula:
    variable_count: int
    clauses: tuple[tuple[Literal, ...], ...]

    def __post_init__(self) -> None:
        for var in range(1, self.variable_count + 1):
            occurrences = self.occurrences(var)
            if len(occurrences) != 3 or len({j for j, _ in occurrences}) != 3:
                raise GeneratorError(f"variable {var} must occur in exactly 3 distinct clauses")
            if sum(1 for _, positive in occurrences if not positive) != 1:
                raise GeneratorError(f"variable {var} must occur negated exactly once")
        for clause in self.clauses:
            if not clause:
                raise GeneratorError("empty clause")
            for literal in clause:
                if not 1 <= literal.variable <= self.variable_count:
                    raise GeneratorError(f"literal references unknown variable {literal.variable}")

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def occurrences(self, variable: int) -> list[tuple[int, bool]]:
        return [
            (j, literal.positive)
            for j, clause in enumerate(self.clauses)
            for literal in clause
            if literal.variable == variable
        ]

    def occurrence_indices(self, variable: int) -> tuple[int, int, int]:
        """(i1, i2, i3): the two clauses holding x_i, then the one holding its negation."""
        positives = [j for j, positive in self.occurrences(variable) if positive]
        negative = next(j for j, positive in self.occurrences(variable) if not positive)
        return positives[0], positives[1], negative

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(
            any(assignment[lit.variable - 1] == lit.positive for lit in clause)
            for clause in self.clauses
        )


def _signed_clauses(clauses: Sequence[Sequence[int]]) -> list[list[int]]:
    result = []
    for clause in clauses:
        if any(lit == 0 for lit in clause):
            raise GeneratorError("literal 0 is not a variable")
        result.append(list(clause))
    return result


def normalize_formula(
    clauses: Sequence[Sequence[int]],
    variable_count: int | None = None,
) -> tuple[CnfFormula, frozenset[int]]:
    """Flip variables so each occurs negated exactly once; returns the formula and the flips.

    Clauses use DIMACS signed integers.
    """
    raw = _signed_clauses(clauses)
    p = variable_count
    if p is None:
        p = max((abs(lit) for clause in raw for lit in clause), default=0)
    flipped = set()
    for var in range(1, p + 1):
        signs = [lit > 0 for clause in raw for lit in clause if abs(lit) == var]
        if len(signs) != 3:
            raise GeneratorError(f"variable {var} occurs {len(signs)} times, expected 3")
        negatives = signs.count(False)
        if negatives in (0, 3):
            raise GeneratorError(f"variable {var} occurs with a single polarity")
        if negatives == 2:
            flipped.add(var)
    formula = CnfFormula(
        variable_count=p,
        clauses=tuple(
            tuple(
                Literal(abs(lit), (lit > 0) != (abs(lit) in flipped)) for lit in clause
            )
            for clause in raw
        ),
    )
    if flipped:
        logger.debug("flipped variables %s", sorted(flipped))
    return formula, frozenset(flipped)


def satisfying_assignment(formula: CnfFormula) -> tuple[bool, ...] | None:
    """First satisfying assignment in lexicographic order (False before True), by brute force."""
    for assignment in product((False, True), repeat=formula.variable_count):
        if formula.satisfied_by(assignment):
            return assignment
    return None


def is_satisfiable(formula: CnfFormula) -> bool:
    return satisfying_assignment(formula) is not None


def random_formula(p: int, seed: int, max_tries: int = 1000) -> CnfFormula:
    """Random satisfiable normalized formula with p variables.

    A single variable only admits the unsatisfiable (x), (x), (not x), so p >= 2.
    """
    if p < 2:
        raise GeneratorError("random satisfiable formulas need at least two variables")
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        m = int(rng.integers(max(3, p), 2 * p + 2))
        clauses: list[list[Literal]] = [[] for _ in range(m)]
        for var in range(1, p + 1):
            picked = rng.choice(m, size=3, replace=False)
            negated = int(rng.integers(3))
            for slot, clause in enumerate(picked):
                clauses[int(clause)].append(Literal(var, slot != negated))
        if any(not clause for clause in clauses):
            continue
        formula = CnfFormula(p, tuple(tuple(c) for c in clauses))
        if is_satisfiable(formula):
            return formula
    raise GeneratorError(f"no satisfiable formula with {p} variables after {max_tries} tries")


@dataclass(frozen=True)
class ReductionMap:
    root: int
    clause_nodes: tuple[int, ...]
    variable_nodes: tuple[tuple[int, ...], ...]
    """Per variable, the gadget nodes y^1..y^7."""
    edge_roles: tuple[str, ...]
    """E1, E2, E3 or pendant, by edge id."""
    big_m: Fraction
    occurrence_indices: tuple[tuple[int, int, int], ...]
    pendants: tuple[tuple[int, int], ...] = ()
    """Disjoint variant only: per clause, its color-1 and color-2 stand-ins."""
    edge_ids: Mapping[frozenset[int], int] | None = None

    def edge(self, u: int, v: int) -> int:
        assert self.edge_ids is not None
        return self.edge_ids[frozenset((u, v))]

    def role_count(self, role: str) -> int:
        return self.edge_roles.count(role)


def gen_sat(
    formula: CnfFormula,
    big_m: int | Fraction | None = None,
    disjoint: bool = False,
) -> tuple[Instance, ReductionMap]:
    m, p = formula.clause_count, formula.variable_count
    threshold = 2 * m + 8 * p
    weight_m = Fraction(threshold + 1) if big_m is None else Fraction(big_m)
    if weight_m <= threshold:
        raise GeneratorError(f"M must exceed 2m + 8p = {threshold}, got {weight_m}")

    root = 0
    clause_nodes = tuple(range(1, m + 1))
    gadgets = tuple(tuple(1 + m + 7 * i + l for l in range(7)) for i in range(p))
    node_count = 1 + m + 7 * p

    edges: list[tuple[int, int, Fraction]] = []
    roles: list[str] = []

    def add(u: int, v: int, weight: Fraction, role: str) -> None:
        edges.append((u, v, weight))
        roles.append(role)

    for y in gadgets:
        for l in (0, 2, 4, 6):
            add(root, y[l], Fraction(2), "E1")
    for y in gadgets:
        for l in range(6):
            add(y[l], y[l + 1], Fraction(1), "E2")
    indices = tuple(formula.occurrence_indices(i + 1) for i in range(p))
    for y, (i1, i2, i3) in zip(gadgets, indices):
        add(y[1], clause_nodes[i1], weight_m, "E3")
        add(y[3], clause_nodes[i3], weight_m, "E3")
        add(y[5], clause_nodes[i2], weight_m, "E3")

    pendants: list[tuple[int, int]] = []
    if disjoint:
        for k in clause_nodes:
            first, second = node_count, node_count + 1
            node_count += 2
            add(k, first, Fraction(0), "pendant")
            add(k, second, Fraction(0), "pendant")
            pendants.append((first, second))

    clause_terms = [list(clause_nodes), list(clause_nodes)]
    if disjoint:
        clause_terms = [[a for a, _ in pendants], [b for _, b in pendants]]
    colors = (
        frozenset(clause_terms[0]) | {y[l] for y in gadgets for l in (0, 4)},
        frozenset(clause_terms[1]) | {y[l] for y in gadgets for l in (2, 6)},
    )
    instance = Instance.build(node_count, root, edges, colors)
    reduction = ReductionMap(
        root=root,
        clause_nodes=clause_nodes,
        variable_nodes=gadgets,
        edge_roles=tuple(roles),
        big_m=weight_m,
        occurrence_indices=indices,
        pendants=tuple(pendants),
        edge_ids={frozenset((e.u, e.v)): e.id for e in instance.edges},
    )
    logger.debug("reduction: %d nodes, %d edges, M=%s", node_count, len(edges), weight_m)
    return instance, reduction


# gadget nodes (0-based y index) on each clause path, per color and occurrence slot
_CLAUSE_PATHS = {
    (0, 0): (1, 2),
    (0, 1): (5, 6),
    (0, 2): (3, 2),
    (1, 0): (1, 0),
    (1, 1): (5, 4),
    (1, 2): (3, 4),
}


def sat_certificate(
    formula: CnfFormula,
    assignment: Sequence[bool],
    reduction: ReductionMap,
) -> tuple[Routing, CapacityPlan]:
    """Completeness routing for a satisfying assignment, with unit capacity on every used edge."""
    if len(assignment) != formula.variable_count:
        raise GeneratorError("assignment length differs from the variable count")
    if not formula.satisfied_by(assignment):
        raise GeneratorError("assignment does not satisfy the formula")

    root = reduction.root

    def walk(nodes: Sequence[int]) -> Walk:
        return tuple(Step(reduction.edge(a, b), a, b) for a, b in zip(nodes, nodes[1:]))

    per_color: list[dict[int, Walk]] = [{}, {}]
    for y in reduction.variable_nodes:
        for color, direct in ((0, (0, 4)), (1, (2, 6))):
            for l in direct:
                per_color[color][y[l]] = walk((y[l], root))

    for j, clause in enumerate(formula.clauses):
        literal = next(lit for lit in clause if assignment[lit.variable - 1] == lit.positive)
        i = literal.variable - 1
        slot = reduction.occurrence_indices[i].index(j)
        y = reduction.variable_nodes[i]
        k = reduction.clause_nodes[j]
        for color in (0, 1):
            first, second = _CLAUSE_PATHS[(color, slot)]
            nodes = [k, y[first], y[second], root]
            if reduction.pendants:
                nodes.insert(0, reduction.pendants[j][color])
            per_color[color][nodes[0]] = walk(nodes)

    routing = Routing(walks=tuple(per_color))
    used = routing.used_edges()
    plan = CapacityPlan.integral(1 if e in used else 0 for e in range(len(reduction.edge_roles)))
    return routing, plan
