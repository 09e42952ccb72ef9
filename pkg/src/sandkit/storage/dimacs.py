from __future__ import annotations

from sandkit.domain.errors import ParseError


def parse_dimacs(text: str | bytes) -> tuple[int, list[list[int]]]:
    """Read a DIMACS ``p cnf`` file into (variable count, clauses of signed literals)."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    variable_count: int | None = None
    declared_clauses = 0
    clauses: list[list[int]] = []
    current: list[int] = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(line_no, "expected 'p cnf <variables> <clauses>'")
            try:
                variable_count, declared_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(line_no, "malformed problem line") from None
            continue
        if variable_count is None:
            raise ParseError(line_no, "clause before problem line")
        for token in line.split():
            try:
                literal = int(token)
            except ValueError:
                raise ParseError(line_no, f"malformed literal {token!r}") from None
            if literal == 0:
                clauses.append(current)
                current = []
            elif abs(literal) > variable_count:
                raise ParseError(line_no, f"literal {literal} exceeds variable count")
            else:
                current.append(literal)

    if variable_count is None:
        raise ParseError(0, "missing problem line")
    if current:
        clauses.append(current)
    if declared_clauses and len(clauses) != declared_clauses:
        raise ParseError(0, f"declared {declared_clauses} clauses, found {len(clauses)}")
    return variable_count, clauses
