"""Split structure of a two-color unit-capacity routing.

Color 0 is green and color 1 is blue. Run on the output of
``expand_parallel`` so that every edge carries at most one walk per color.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction

from sandkit.domain.core import format_node
from sandkit.domain.errors import ColorCountError, RoutingError
from sandkit.domain.models import (
    Instance,
    Routing,
    Split,
    SplitArc,
    SplitKind,
    SplitNode,
    SplitReport,
    Step,
    WeightDecomposition,
)

logger = logging.getLogger(__name__)

GREEN, BLUE = 0, 1
_ROLE = ("green", "blue")


@dataclass(frozen=True)
class _Use:
    terminal: int
    position: int
    step: Step


def _edge_users(routing: Routing, color: int) -> dict[int, _Use]:
    users: dict[int, _Use] = {}
    for terminal, walk in routing.walks[color].items():
        for position, step in enumerate(walk):
            if step.edge_id in users:
                raise RoutingError(
                    f"edge {step.edge_id} carries two {_ROLE[color]} walks; "
                    "expand parallel edges first"
                )
            users[step.edge_id] = _Use(terminal, position, step)
    return users


def _find_splits(
    routing: Routing,
    green_users: dict[int, _Use],
    blue_users: dict[int, _Use],
) -> list[tuple[Split, int, int, int, int]]:
    """Maximal runs along green walks with one blue partner and one orientation.

    Returns each split with its (start, end) step positions in the green and blue walks.
    """
    found = []
    for green in sorted(routing.walks[GREEN]):
        walk = routing.walks[GREEN][green]
        i = 0
        while i < len(walk):
            partner = blue_users.get(walk[i].edge_id)
            if partner is None:
                i += 1
                continue
            same = partner.step.source == walk[i].source
            j = i
            while j + 1 < len(walk):
                nxt = blue_users.get(walk[j + 1].edge_id)
                if nxt is None or nxt.terminal != partner.terminal:
                    break
                if (nxt.step.source == walk[j + 1].source) != same:
                    break
                expected = blue_users[walk[j].edge_id].position + (1 if same else -1)
                if nxt.position != expected:
                    break
                j += 1
            blue_positions = [blue_users[walk[t].edge_id].position for t in range(i, j + 1)]
            split = Split(
                u=walk[i].source,
                v=walk[j].target,
                green=green,
                blue=partner.terminal,
                kind=SplitKind.THIN if same else SplitKind.WIDE,
                edge_ids=tuple(walk[t].edge_id for t in range(i, j + 1)),
            )
            found.append((split, i, j, min(blue_positions), max(blue_positions)))
            i = j + 1
    return found


def _alternating_paths(
    arcs: list[SplitArc],
    sharing_greens: list[int],
) -> tuple[list[tuple[SplitNode, ...]], list[tuple[int, int]]]:
    in_arcs: dict[SplitNode, list[int]] = {}
    out_arcs: dict[SplitNode, list[int]] = {}
    for index, arc in enumerate(arcs):
        out_arcs.setdefault(arc.tail, []).append(index)
        in_arcs.setdefault(arc.head, []).append(index)

    used: set[int] = set()
    paths: list[tuple[SplitNode, ...]] = []
    fresh: list[tuple[int, int]] = []
    for green in sorted(sharing_greens):
        start: SplitNode = ("green", green)
        first = out_arcs[start][0]
        used.add(first)
        path = [start, arcs[first].head]
        at, color, backwards = arcs[first].head, arcs[first].color, True
        while True:
            pool = in_arcs if backwards else out_arcs
            options = [a for a in pool.get(at, []) if a not in used and arcs[a].color != color]
            if not options:
                logger.warning("alternating path from green %d stops at %s", green, at)
                path = []
                break
            chosen = options[0]
            used.add(chosen)
            arc = arcs[chosen]
            at = arc.tail if backwards else arc.head
            path.append(at)
            color = arc.color
            if at[0] != "split":
                break
            backwards = not backwards
        if not path:
            continue
        paths.append(tuple(path))
        end = path[-1]
        if end[0] == "blue":
            fresh.append((green, end[1]))
        else:
            logger.warning("alternating path from green %d ends at %s", green, end)
    return paths, fresh


def split_report(instance: Instance, routing: Routing) -> SplitReport:
    if instance.k != 2 or len(routing.walks) != 2:
        raise ColorCountError("split diagnostics are defined for exactly two colors")

    green_users = _edge_users(routing, GREEN)
    blue_users = _edge_users(routing, BLUE)
    shared = frozenset(green_users) & frozenset(blue_users)

    located = _find_splits(routing, green_users, blue_users)
    splits = [entry[0] for entry in located]

    # splits in walk order for every terminal of both colors
    along: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for index, (split, g_start, _, b_start, _) in enumerate(located):
        along.setdefault((GREEN, split.green), []).append((g_start, index))
        along.setdefault((BLUE, split.blue), []).append((b_start, index))

    arcs: list[SplitArc] = []
    for color in (GREEN, BLUE):
        for terminal in sorted(routing.walks[color]):
            sequence = [index for _, index in sorted(along.get((color, terminal), []))]
            if not sequence:
                continue
            previous: SplitNode = (_ROLE[color], terminal)
            for index in sequence:
                node: SplitNode = ("split", index)
                arcs.append(SplitArc(tail=previous, head=node, color=color))
                previous = node

    sharing_greens = [g for g in routing.walks[GREEN] if (GREEN, g) in along]
    non_sharing = tuple(
        (color, terminal)
        for color in (GREEN, BLUE)
        for terminal in sorted(routing.walks[color])
        if (color, terminal) not in along
    )
    paths, fresh = _alternating_paths(arcs, sharing_greens)
    paired_greens = {g for g, _ in fresh}
    paired_blues = {b for _, b in fresh}
    unpaired = tuple(
        (color, terminal)
        for color, paired in ((GREEN, paired_greens), (BLUE, paired_blues))
        for terminal in sorted(routing.walks[color])
        if (color, terminal) in along and terminal not in paired
    )

    weight = {e.id: e.weight for e in instance.edges}
    thin = sum(
        (weight[e] for s in splits if s.kind is SplitKind.THIN for e in s.edge_ids), Fraction(0)
    )
    wide = sum(
        (weight[e] for s in splits if s.kind is SplitKind.WIDE for e in s.edge_ids), Fraction(0)
    )
    green_only = sum((weight[e] for e in green_users if e not in shared), Fraction(0))
    blue_only = sum((weight[e] for e in blue_users if e not in shared), Fraction(0))

    return SplitReport(
        shared_edges=shared,
        splits=tuple(splits),
        split_arcs=tuple(arcs),
        alternating_paths=tuple(paths),
        fresh_pairs=tuple(fresh),
        non_sharing=non_sharing,
        weights=WeightDecomposition(
            blue_only=blue_only, green_only=green_only, thin=thin, wide=wide
        ),
        unpaired=unpaired,
    )


def format_split_report(report: SplitReport, instance: Instance) -> str:
    """Diagnostic text block: split lines, fresh pairs, then the weight decomposition."""
    lines = []
    for split in report.splits:
        lines.append(
            f"split {split.kind.value} {format_node(instance, split.u)} "
            f"{format_node(instance, split.v)} g={format_node(instance, split.green)} "
            f"b={format_node(instance, split.blue)} "
            f"edges={','.join(str(e) for e in split.edge_ids)}"
        )
    for green, blue in report.fresh_pairs:
        lines.append(f"fresh {format_node(instance, green)} {format_node(instance, blue)}")
    for color, terminal in report.non_sharing:
        lines.append(f"nonsharing {_ROLE[color]} {format_node(instance, terminal)}")
    for color, terminal in report.unpaired:
        lines.append(f"unpaired {_ROLE[color]} {format_node(instance, terminal)}")
    w = report.weights
    lines.append(
        f"weights wb={w.blue_only} wg={w.green_only} wt={w.thin} wd={w.wide}"
    )
    return "\n".join(lines) + "\n"
