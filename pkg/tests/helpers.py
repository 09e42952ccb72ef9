from sandkit.domain.models import Instance, Step, Walk

GREEN_1, GREEN_2, BLUE_1, BLUE_2 = 7, 8, 9, 10

# two green and two blue walks crossing on the 5-6 rung: root 0, ladder nodes 1..6,
# terminals g1=7 g2=8 b1=9 b2=10
CROSSING_EDGES = [
    (9, 5, 1),
    (5, 3, 1),
    (3, 1, 1),
    (1, 0, 1),
    (7, 6, 1),
    (6, 4, 1),
    (4, 2, 1),
    (2, 0, 1),
    (10, 3, 1),
    (8, 4, 1),
    (5, 6, 1),
]


def walk_along(instance: Instance, nodes: list[int]) -> Walk:
    return tuple(Step(instance.edge_between(a, b).id, a, b) for a, b in zip(nodes, nodes[1:]))
