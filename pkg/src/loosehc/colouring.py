"""Edge colourings, the global boundedness check and rainbow predicates."""

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

from .hypergraph import FormatError, Hypergraph, InvalidInput


@dataclass(frozen=True)
class Colouring:
    """A total map from the edges of a hypergraph to colour ids.

    Colour ids are arbitrary non-negative integers with no ordering
    semantics.  The class-size index is derived once and cached because
    shares_colour runs inside the hot loops of the search driver.
    """

    graph: Hypergraph
    assignment: tuple[int, ...]  # colour of graph.edges[i]

    def __post_init__(self) -> None:
        if len(self.assignment) != len(self.graph.edges):
            raise InvalidInput(
                f"colouring has {len(self.assignment)} entries for "
                f"{len(self.graph.edges)} edges"
            )
        if any(c < 0 for c in self.assignment):
            raise InvalidInput("colour ids must be non-negative")

    @cached_property
    def by_edge(self) -> dict[tuple[int, ...], int]:
        return dict(zip(self.graph.edges, self.assignment))

    @cached_property
    def class_sizes(self) -> dict[int, int]:
        return dict(Counter(self.assignment))

    @cached_property
    def classes(self) -> dict[int, tuple[tuple[int, ...], ...]]:
        buckets: dict[int, list[tuple[int, ...]]] = {}
        for e, c in zip(self.graph.edges, self.assignment):
            buckets.setdefault(c, []).append(e)
        return {c: tuple(es) for c, es in buckets.items()}

    def colour(self, edge: Iterable[int]) -> int:
        e = tuple(sorted(edge))
        try:
            return self.by_edge[e]
        except KeyError:
            raise InvalidInput(f"edge {e} is not in the coloured hypergraph")

    @classmethod
    def injective(cls, graph: Hypergraph) -> "Colouring":
        """Every edge its own colour."""
        return cls(graph, tuple(range(len(graph.edges))))

    @classmethod
    def constant(cls, graph: Hypergraph, colour: int = 0) -> "Colouring":
        return cls(graph, (colour,) * len(graph.edges))

    @classmethod
    def from_map(cls, graph: Hypergraph, mapping: dict) -> "Colouring":
        key = {tuple(sorted(e)): c for e, c in mapping.items()}
        try:
            return cls(graph, tuple(key[e] for e in graph.edges))
        except KeyError as exc:
            raise InvalidInput(f"edge {exc.args[0]} has no colour") from None


def check_global_bound(chi: Colouring, mu: float, n: int, k: int) -> bool:
    """True iff every colour class has size at most mu * n^(k-1)."""
    if mu <= 0:
        raise InvalidInput(f"mu must be positive, got {mu}")
    bound = mu * n ** (k - 1)
    return all(size <= bound for size in chi.class_sizes.values())


def is_rainbow(chi: Colouring, edges: Iterable[Iterable[int]]) -> bool:
    """True iff all the given edges have pairwise distinct colours."""
    seen: set[int] = set()
    for e in edges:
        c = chi.colour(e)
        if c in seen:
            return False
        seen.add(c)
    return True


def shares_colour(
    chi: Colouring,
    first: Iterable[Iterable[int]],
    second: Iterable[Iterable[int]],
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """All pairs (e, f) with e in first, f in second, e != f, same colour."""
    second_by_colour: dict[int, list[tuple[int, ...]]] = {}
    for f in second:
        f = tuple(sorted(f))
        second_by_colour.setdefault(chi.colour(f), []).append(f)
    conflicts = []
    for e in first:
        e = tuple(sorted(e))
        for f in second_by_colour.get(chi.colour(e), ()):
            if e != f:
                conflicts.append((e, f))
    return conflicts


def parse_colouring(text: str, graph: Hypergraph) -> Colouring:
    """Parse the .col format: line i colours edge i of the companion graph.

    Blank lines and '#' comments are ignored; a count mismatch is an error.
    """
    colours: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            c = int(line)
        except ValueError:
            raise FormatError(lineno, f"non-integer colour {line!r}")
        if c < 0:
            raise FormatError(lineno, f"colour must be non-negative, got {c}")
        colours.append(c)
    if len(colours) != len(graph.edges):
        raise InvalidInput(
            f"colouring has {len(colours)} entries for {len(graph.edges)} edges"
        )
    return Colouring(graph, tuple(colours))


def format_colouring(chi: Colouring) -> str:
    return "\n".join(str(c) for c in chi.assignment) + "\n"
