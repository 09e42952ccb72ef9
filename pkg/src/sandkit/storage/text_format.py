"""Line-based text codecs for instances, capacity plans and latency walks.

Instance format::

    # comment
    nodes <n>
    root <id>
    edge <u> <v> <w>        (declaration order = edge id)
    color <i>: <id> <id>...  (i = 0..k-1 in order)

Plan format: ``plan <integral|fractional> <edge-count>`` followed by one
``cap <edge-id> <value>`` line per nonzero entry.
"""

from __future__ import annotations

from fractions import Fraction

from sandkit.domain.errors import InstanceError, ParseError, PlanError
from sandkit.domain.models import Capacity, CapacityPlan, Edge, Instance, PlanMode


def format_number(value: Capacity | int) -> str:
    """Integers plainly, terminating rationals as exact decimals, anything else as p/q."""
    if isinstance(value, float):
        if value.is_integer():
            return str(int(value))
        return repr(value)
    frac = Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    den = frac.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{frac.numerator}/{frac.denominator}"
    places = max(twos, fives)
    scaled = frac * 10**places
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled.numerator)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}".rstrip("0").rstrip(".")


def _parse_rational(token: str, line_no: int, what: str) -> Fraction:
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise ParseError(line_no, f"malformed {what} {token!r}") from None
    if value < 0:
        raise ParseError(line_no, f"negative {what} {token!r}")
    return value


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_no, f"malformed {what} {token!r}") from None


def _content_lines(text: str) -> list[tuple[int, list[str]]]:
    lines = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((line_no, line.split()))
    return lines


def parse_instance(text: str | bytes) -> Instance:
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    node_count: int | None = None
    root: int | None = None
    root_line = 0
    edges: list[tuple[int, int, int, Fraction]] = []
    colors: list[tuple[int, list[int]]] = []
    last_line = 0

    for line_no, tokens in _content_lines(text):
        last_line = line_no
        keyword = tokens[0]
        if keyword == "nodes":
            if len(tokens) != 2:
                raise ParseError(line_no, "expected 'nodes <n>'")
            if node_count is not None:
                raise ParseError(line_no, "duplicate nodes declaration")
            node_count = _parse_int(tokens[1], line_no, "node count")
            if node_count <= 0:
                raise ParseError(line_no, "node count must be positive")
        elif keyword == "root":
            if len(tokens) != 2:
                raise ParseError(line_no, "expected 'root <id>'")
            if root is not None:
                raise ParseError(line_no, "duplicate root")
            root = _parse_int(tokens[1], line_no, "root id")
            root_line = line_no
        elif keyword == "edge":
            if len(tokens) != 4:
                raise ParseError(line_no, "expected 'edge <u> <v> <w>'")
            u = _parse_int(tokens[1], line_no, "node id")
            v = _parse_int(tokens[2], line_no, "node id")
            if u == v:
                raise ParseError(line_no, f"self-loop on node {u}")
            edges.append((line_no, u, v, _parse_rational(tokens[3], line_no, "weight")))
        elif keyword == "color":
            if len(tokens) < 3 or not tokens[1].endswith(":"):
                raise ParseError(line_no, "expected 'color <i>: <id>+'")
            index = _parse_int(tokens[1][:-1], line_no, "color index")
            if index != len(colors):
                raise ParseError(
                    line_no, f"color index {index} out of order, expected {len(colors)}"
                )
            colors.append((line_no, [_parse_int(t, line_no, "node id") for t in tokens[2:]]))
        else:
            raise ParseError(line_no, f"unknown keyword {keyword!r}")

    if node_count is None:
        raise ParseError(last_line, "missing nodes declaration")
    if root is None:
        raise ParseError(last_line, "missing root declaration")
    if not 0 <= root < node_count:
        raise ParseError(root_line, f"root {root} out of range")
    for line_no, u, v, _ in edges:
        for end in (u, v):
            if not 0 <= end < node_count:
                raise ParseError(line_no, f"node id {end} out of range")
    for line_no, members in colors:
        for node in members:
            if node == root:
                raise ParseError(line_no, "color contains root")
            if not 0 <= node < node_count:
                raise ParseError(line_no, f"color references unknown node {node}")

    try:
        return Instance(
            node_count=node_count,
            root=root,
            edges=tuple(Edge(u=u, v=v, weight=w, id=i) for i, (_, u, v, w) in enumerate(edges)),
            colors=tuple(frozenset(members) for _, members in colors),
        )
    except InstanceError as exc:
        raise ParseError(last_line, str(exc)) from exc


def serialize_instance(instance: Instance) -> str:
    lines = [f"nodes {instance.node_count}", f"root {instance.root}"]
    for edge in instance.edges:
        lines.append(f"edge {edge.u} {edge.v} {format_number(edge.weight)}")
    for index, color in enumerate(instance.colors):
        lines.append(f"color {index}: " + " ".join(str(n) for n in sorted(color)))
    return "\n".join(lines) + "\n"


def parse_plan(text: str | bytes) -> CapacityPlan:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = _content_lines(text)
    if not lines:
        raise ParseError(0, "empty plan")
    line_no, header = lines[0]
    if len(header) != 3 or header[0] != "plan":
        raise ParseError(line_no, "expected 'plan <integral|fractional> <edge-count>'")
    try:
        mode = PlanMode(header[1])
    except ValueError:
        raise ParseError(line_no, f"unknown plan mode {header[1]!r}") from None
    size = _parse_int(header[2], line_no, "edge count")
    values: list[Fraction] = [Fraction(0)] * size
    seen: set[int] = set()
    for line_no, tokens in lines[1:]:
        if len(tokens) != 3 or tokens[0] != "cap":
            raise ParseError(line_no, "expected 'cap <edge-id> <value>'")
        edge_id = _parse_int(tokens[1], line_no, "edge id")
        if not 0 <= edge_id < size:
            raise ParseError(line_no, f"edge id {edge_id} out of range")
        if edge_id in seen:
            raise ParseError(line_no, f"duplicate capacity for edge {edge_id}")
        seen.add(edge_id)
        values[edge_id] = _parse_rational(tokens[2], line_no, "capacity")
    try:
        return CapacityPlan(tuple(values), mode)
    except PlanError as exc:
        raise ParseError(line_no, str(exc)) from exc


def serialize_plan(plan: CapacityPlan) -> str:
    lines = [f"plan {plan.mode.value} {len(plan)}"]
    for edge_id, value in enumerate(plan.values):
        if value > 0:
            lines.append(f"cap {edge_id} {format_number(value)}")
    return "\n".join(lines) + "\n"


def parse_walk(text: str | bytes) -> list[int]:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    vertices = []
    for line_no, tokens in _content_lines(text):
        vertices.extend(_parse_int(t, line_no, "vertex id") for t in tokens)
    return vertices


def serialize_walk(vertices: list[int] | tuple[int, ...]) -> str:
    return " ".join(str(v) for v in vertices) + "\n"
