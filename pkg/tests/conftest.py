from __future__ import annotations

import pytest

from sandkit.domain.models import Instance, Routing

from .helpers import BLUE_1, BLUE_2, CROSSING_EDGES, GREEN_1, GREEN_2, walk_along


@pytest.fixture
def i2() -> Instance:
    """Root 0, hub 1 at cost 10, green leaf 2 and blue leaf 3 at cost 1."""
    return Instance.build(4, 0, [(0, 1, 10), (1, 2, 1), (1, 3, 1)], [{2}, {3}])


@pytest.fixture
def triangle() -> Instance:
    return Instance.build(3, 0, [(0, 1, 3), (0, 2, 3), (1, 2, 1)], [{1}, {2}])


@pytest.fixture
def unit_path() -> Instance:
    """r - a - b with unit weights and one color {a, b}."""
    return Instance.build(3, 0, [(0, 1, 1), (1, 2, 1)], [{1, 2}])


@pytest.fixture
def crossing() -> Instance:
    return Instance.build(11, 0, CROSSING_EDGES, [{GREEN_1, GREEN_2}, {BLUE_1, BLUE_2}])


@pytest.fixture
def crossing_routing(crossing: Instance) -> Routing:
    green = {
        GREEN_1: walk_along(crossing, [7, 6, 5, 3, 1, 0]),
        GREEN_2: walk_along(crossing, [8, 4, 2, 0]),
    }
    blue = {
        BLUE_1: walk_along(crossing, [9, 5, 6, 4, 2, 0]),
        BLUE_2: walk_along(crossing, [10, 3, 1, 0]),
    }
    return Routing(walks=(green, blue))
