from __future__ import annotations

import csv
import io
import logging
from collections.abc import Iterable, Sequence
from statistics import median

from pydantic import BaseModel

from sandkit.domain.core import mst_cost, plan_cost
from sandkit.domain.frt import frt_solve, frt_tree_cost
from sandkit.domain.lp import solve_lp
from sandkit.domain.paths import metric_closure
from sandkit.generators.expander import gen_expander
from sandkit.generators.kneser import gen_kneser

logger = logging.getLogger(__name__)

CSV_FIELDS = ("family", "param", "algorithm", "cost", "bound", "ratio", "seed")


class GapRow(BaseModel):
    family: str
    param: str
    algorithm: str
    cost: float
    bound: float | None = None
    ratio: float | None = None
    seed: int | None = None

    @classmethod
    def against(
        cls,
        family: str,
        param: str,
        algorithm: str,
        cost: float,
        bound: float,
        seed: int | None = None,
    ) -> GapRow:
        ratio = bound / cost if cost else None
        return cls(
            family=family,
            param=param,
            algorithm=algorithm,
            cost=cost,
            bound=bound,
            ratio=ratio,
            seed=seed,
        )


def kneser_rows(values: Sequence[int], with_lp: bool = False) -> list[GapRow]:
    """Known fractional solution against the MST bound (every node must reach the root)."""
    rows = []
    for s in values:
        instance, plan = gen_kneser(s)
        fractional = float(plan_cost(instance, plan))
        bound = float(mst_cost(instance))
        rows.append(GapRow.against("kneser", str(s), "fractional", fractional, bound))
        if with_lp:
            relaxation = solve_lp(instance)
            rows.append(GapRow.against("kneser", str(s), "lp", relaxation.optimum, bound))
        logger.info("kneser s=%d fractional=%.6g mst=%.6g", s, fractional, bound)
    return rows


def expander_rows(
    n: int,
    d: int,
    b: int,
    colors: int,
    seed: int,
    frt_seeds: Iterable[int],
) -> list[GapRow]:
    """Reference graph solution and tree-embedding costs relative to it.

    ``frt`` rows price the graph plan for the sampled colors. ``frt-tree`` rows
    price the tree solution itself for the full family of b-subsets.
    """
    instance, plan = gen_expander(n, d, b, colors, seed)
    param = f"n={n},d={d},b={b}"
    reference = float(plan_cost(instance, plan))
    rows = [
        GapRow(family="expander", param=param, algorithm="reference", cost=reference, seed=seed)
    ]

    closure = metric_closure(instance)
    seeds = list(frt_seeds)
    graph_costs = [float(plan_cost(instance, frt_solve(instance, s, closure))) for s in seeds]
    tree_costs = [float(frt_tree_cost(instance, s, family_size=b)) for s in seeds]
    for algorithm, costs in (("frt", graph_costs), ("frt-tree", tree_costs)):
        for frt_seed, cost in zip(seeds, costs):
            rows.append(_relative(param, algorithm, cost, reference, frt_seed))
        if costs:
            rows.append(_relative(param, f"{algorithm}-median", median(costs), reference))
    return rows


def _relative(
    param: str, algorithm: str, cost: float, reference: float, seed: int | None = None
) -> GapRow:
    return GapRow(
        family="expander",
        param=param,
        algorithm=algorithm,
        cost=cost,
        bound=reference,
        ratio=cost / reference,
        seed=seed,
    )


def _cell(value: float | int | str | None) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def rows_to_csv(rows: Iterable[GapRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        data = row.model_dump()
        writer.writerow([_cell(data[name]) for name in CSV_FIELDS])
    return buffer.getvalue()
