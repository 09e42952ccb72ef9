from __future__ import annotations

import numpy as np

from sandkit.domain.errors import GeneratorError
from sandkit.domain.models import Instance


def gen_random(
    n: int,
    k: int,
    color_size: int,
    seed: int,
    weight_range: tuple[int, int] = (1, 10),
    extra_edges: int | None = None,
) -> Instance:
    """Connected random instance: a random spanning tree, then extra non-parallel edges.

    The root is 0 and colors are independent draws of ``color_size`` non-root nodes.
    """
    low, high = weight_range
    if n < 2 or k < 1:
        raise GeneratorError(f"need n >= 2 and k >= 1, got n={n} k={k}")
    if not 1 <= color_size <= n - 1:
        raise GeneratorError(f"color size must lie in 1..{n - 1}, got {color_size}")
    if low < 0 or high < low:
        raise GeneratorError(f"bad weight range {weight_range}")

    rng = np.random.default_rng(seed)
    order = [int(v) for v in rng.permutation(n)]
    pairs: list[tuple[int, int]] = []
    for position in range(1, n):
        parent = order[int(rng.integers(position))]
        pairs.append((min(parent, order[position]), max(parent, order[position])))

    taken = set(pairs)
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if (u, v) not in taken]
    wanted = int(rng.integers(n)) if extra_edges is None else extra_edges
    if missing and wanted:
        picks = rng.choice(len(missing), size=min(wanted, len(missing)), replace=False)
        pairs.extend(missing[int(i)] for i in sorted(picks))

    edges = [(u, v, int(rng.integers(low, high + 1))) for u, v in pairs]
    colors = [
        sorted(int(v) + 1 for v in rng.choice(n - 1, size=color_size, replace=False))
        for _ in range(k)
    ]
    return Instance.build(n, 0, edges, colors)
