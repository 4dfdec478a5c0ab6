"""Explicit colourings that separate global from local boundedness.

tight_counterexample: a 3-graph on three near-equal parts whose edges are
the triples with exactly two vertices in one part, coloured by that pair.
Every colour class has at most 2*ceil(n/3) <= n edges, yet no tight
Hamilton cycle is rainbow (any tight cycle repeats a pair colour on two
consecutive edges).

first_prefix_colouring: colour each edge of the complete k-graph by its
k-1 smallest vertices.  The colouring is globally bounded but not locally
bounded, and every loose Hamilton cycle is automatically rainbow under it
(two loose-cycle edges never share k-1 vertices).
"""

from itertools import combinations
from math import comb

from .colouring import Colouring
from .hypergraph import Hypergraph, InvalidInput


def pair_colour_id(u: int, v: int) -> int:
    """Stable id for an unordered vertex pair (colexicographic rank)."""
    u, v = min(u, v), max(u, v)
    return v * (v - 1) // 2 + u


def prefix_colour_id(prefix: tuple[int, ...]) -> int:
    """Stable id for a sorted vertex set (colexicographic rank)."""
    return sum(comb(v, i + 1) for i, v in enumerate(sorted(prefix)))


def tight_counterexample(n: int) -> tuple[Hypergraph, Colouring]:
    """The three-part 3-graph with pair colours and no rainbow tight cycle.

    Parts take sizes floor(n/3)/ceil(n/3) and are filled in vertex order.
    """
    if n < 6:
        raise InvalidInput(f"need n >= 6, got {n}")
    base = n // 3
    extra = n % 3
    sizes = [base + (1 if i < extra else 0) for i in range(3)]
    part_of = []
    for i, size in enumerate(sizes):
        part_of.extend([i] * size)

    edges = []
    colours = []
    for e in combinations(range(n), 3):
        parts = [part_of[v] for v in e]
        counts = {p: parts.count(p) for p in set(parts)}
        doubled = [p for p, c in counts.items() if c == 2]
        if not doubled:
            continue
        pair = tuple(v for v in e if part_of[v] == doubled[0])
        edges.append(e)
        colours.append(pair_colour_id(*pair))
    g = Hypergraph(n, 3, tuple(edges))
    return g, Colouring(g, tuple(colours))


def first_prefix_colouring(n: int, k: int) -> Colouring:
    """Colour each edge of the complete k-graph by its least k-1 vertices."""
    if k < 3:
        raise InvalidInput("the prefix colouring needs k >= 3")
    if n < k:
        raise InvalidInput(f"need n >= k, got n = {n}, k = {k}")
    g = Hypergraph.complete(n, k)
    colours = tuple(prefix_colour_id(e[: k - 1]) for e in g.edges)
    return Colouring(g, colours)
