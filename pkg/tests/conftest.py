import random

import pytest

from graphentropy.graphs import Graph


def c5() -> Graph:
    return Graph.cycle(5)


def g1() -> Graph:
    """Pentagon, an apex joined to two consecutive rim vertices, and a second
    apex joined to the first and to the rim vertex opposite the pair."""
    return Graph.undirected(
        7,
        [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 6), (5, 0), (5, 1), (6, 3)],
    )


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.undirected(n, edges)


def random_digraph(rng: random.Random, n: int, p: float = 0.4,
                   loop_p: float = 0.0) -> Graph:
    arcs = [(u, v) for u in range(n) for v in range(n)
            if u != v and rng.random() < p]
    arcs += [(v, v) for v in range(n) if rng.random() < loop_p]
    return Graph.from_arcs(n, arcs)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0x5eed)
