from __future__ import annotations

import logging
from fractions import Fraction

import networkx as nx
import numpy as np

from sandkit.domain.errors import GeneratorError
from sandkit.domain.models import CapacityPlan, Instance

logger = logging.getLogger(__name__)


def gen_expander(
    n: int,
    d: int,
    b: int,
    num_sampled_colors: int,
    seed: int,
) -> tuple[Instance, CapacityPlan]:
    """Random d-regular graph on nodes 1..n plus a root 0 joined to all of them.

    Root edges weigh n/b and graph edges 1; colors are sampled b-subsets. The
    reference plan buys every graph edge and the b lowest-id root edges, for a
    cost of n*d/2 + n.
    """
    if (n * d) % 2:
        raise GeneratorError(f"n*d must be even, got n={n} d={d}")
    if not 1 <= b <= n:
        raise GeneratorError(f"b must lie in 1..{n}, got {b}")
    if not 0 <= d < n:
        raise GeneratorError(f"degree {d} impossible on {n} nodes")
    if num_sampled_colors < 1:
        raise GeneratorError("need at least one color")

    rng = np.random.default_rng(seed)
    graph = nx.random_regular_graph(d, n, seed=int(rng.integers(2**32)))
    root = 0
    root_weight = Fraction(n, b)
    edges: list[tuple[int, int, Fraction]] = [(root, v, root_weight) for v in range(1, n + 1)]
    edges += sorted((min(u, v) + 1, max(u, v) + 1, Fraction(1)) for u, v in graph.edges())

    colors = [
        sorted(int(v) + 1 for v in rng.choice(n, size=b, replace=False))
        for _ in range(num_sampled_colors)
    ]
    instance = Instance.build(n + 1, root, edges, colors)
    plan = CapacityPlan.integral([1] * b + [0] * (n - b) + [1] * graph.number_of_edges())
    logger.debug("expander n=%d d=%d b=%d with %d colors", n, d, b, len(colors))
    return instance, plan
