from __future__ import annotations

from fractions import Fraction
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from sandkit.domain.models import CapacityPlan


class SandkitError(Exception):
    """Base class for every error raised by the toolkit."""


class InstanceError(SandkitError):
    pass


class ParseError(InstanceError):
    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no
        self.message = message


class PlanError(SandkitError):
    pass


class InfeasibleError(SandkitError):
    pass


class ColorCountError(SandkitError):
    pass


class RoutingError(SandkitError):
    pass


class GeneratorError(SandkitError):
    pass


class LatencyError(SandkitError):
    pass


class BudgetExceededError(SandkitError):
    """Branch-and-bound ran out of nodes before proving optimality.

    The best incumbent found so far is attached so callers can still use it.
    """

    def __init__(
        self,
        incumbent: CapacityPlan | None,
        cost: Fraction | None,
        lower_bound: float,
        nodes: int,
    ) -> None:
        super().__init__(
            f"node budget exhausted after {nodes} nodes "
            f"(incumbent={cost}, lower bound={lower_bound:.9g})"
        )
        self.incumbent = incumbent
        self.cost = cost
        self.lower_bound = lower_bound
        self.nodes = nodes
