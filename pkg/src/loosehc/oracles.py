"""Exhaustive ground-truth searches at desk scale.

Everything here is exact: enumeration and backtracking, never sampling.
Budget-limited searches return explicit tri-state results so that running
out of budget can never masquerade as a proof of absence.
"""

import time
from dataclasses import dataclass, field
from typing import Iterable

from .colouring import Colouring
from .cycles import LooseCycle, LoosePath, TightCycle, validate_tight_cycle
from .graphs import Digraph, PairGraph
from .hypergraph import Hypergraph, InvalidInput
from .rng import stream


@dataclass(frozen=True)
class EnumerationBudget:
    node_limit: int = 50_000_000
    time_limit: float = 300.0
    canonical: bool = True

    def __post_init__(self) -> None:
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise InvalidInput("budget limits must be positive")


@dataclass
class _BudgetClock:
    budget: EnumerationBudget
    nodes: int = 0
    started: float = field(default_factory=time.monotonic)
    exhausted: bool = False

    def tick(self) -> bool:
        """Count a node; True while within budget."""
        if self.exhausted:
            return False
        self.nodes += 1
        if self.nodes > self.budget.node_limit or (
            self.nodes % 4096 == 0
            and time.monotonic() - self.started > self.budget.time_limit
        ):
            self.exhausted = True
            return False
        return True


@dataclass(frozen=True)
class EnumerationResult:
    cycles: tuple[LooseCycle, ...]
    complete: bool
    nodes: int


@dataclass(frozen=True)
class RainbowSearchResult:
    """Tri-state outcome: found / absent / unknown (budget exceeded)."""

    status: str  # "found" | "absent" | "unknown"
    witness: LooseCycle | TightCycle | None = None


def _anchored_walks(
    g: Hypergraph,
    clock: _BudgetClock,
    colour_of=None,
):
    """Generate vertex walks of loose Hamilton cycles, anchored so that the
    first edge is the lexicographic minimum of the cycle's edge set.

    Each cycle is produced once or twice (once per direction); callers
    deduplicate through canonical form.  With colour_of set, any branch that
    repeats a colour is pruned, so only rainbow cycles are generated.
    """
    n, k = g.n, g.k
    count = n // (k - 1)
    for anchor in g.edges:
        anchor_set = set(anchor)
        rest = [e for e in g.edges if e > anchor]
        by_vertex: dict[int, list[tuple[int, ...]]] = {}
        for e in rest:
            for v in e:
                by_vertex.setdefault(v, []).append(e)
        for entry in anchor:
            for exit_ in anchor:
                if entry == exit_:
                    continue
                interior = sorted(anchor_set - {entry, exit_})
                walk = [entry, *interior, exit_]
                used = set(anchor)
                colours = {colour_of(anchor)} if colour_of else None
                yield from _extend_walk(
                    g, by_vertex, walk, used, entry, exit_, 1, count, clock, colours, colour_of
                )
                if clock.exhausted:
                    return


def _extend_walk(
    g, by_vertex, walk, used, entry, current, depth, count, clock, colours, colour_of
):
    if not clock.tick():
        return
    if depth == count - 1:
        for e in by_vertex.get(current, ()):
            e_set = set(e)
            if entry not in e_set:
                continue
            middle = e_set - {current, entry}
            if middle & used:
                continue
            if colour_of is not None:
                c = colour_of(e)
                if c in colours:
                    continue
            yield tuple(walk) + tuple(sorted(middle))
        return
    for e in by_vertex.get(current, ()):
        e_set = set(e)
        others = e_set - {current}
        if (e_set & used) != {current} or entry in e_set:
            continue
        if colour_of is not None:
            c = colour_of(e)
            if c in colours:
                continue
            colours.add(c)
        for nxt in sorted(others):
            interior = sorted(others - {nxt})
            walk.extend(interior)
            walk.append(nxt)
            used |= others
            yield from _extend_walk(
                g, by_vertex, walk, used, entry, nxt, depth + 1, count, clock, colours, colour_of
            )
            used -= others
            del walk[-(len(interior) + 1):]
            if clock.exhausted:
                break
        if colour_of is not None:
            colours.discard(c)
        if clock.exhausted:
            return


def enumerate_loose_hamilton_cycles(
    g: Hypergraph, budget: EnumerationBudget | None = None
) -> EnumerationResult:
    """All distinct loose Hamilton cycles of g, in canonical form."""
    if g.n % (g.k - 1) != 0:
        raise InvalidInput(f"(k-1) = {g.k - 1} must divide n = {g.n}")
    budget = budget or EnumerationBudget()
    clock = _BudgetClock(budget)
    found: set[LooseCycle] = set()
    count = g.n // (g.k - 1)
    if count >= 3 and len(g.edges) >= count:
        for walk in _anchored_walks(g, clock):
            found.add(LooseCycle(walk, g.k))
    cycles = tuple(sorted(found, key=lambda c: c.vertices))
    return EnumerationResult(cycles, complete=not clock.exhausted, nodes=clock.nodes)


def exists_rainbow_loose_hc(
    g: Hypergraph, chi: Colouring, budget: EnumerationBudget | None = None
) -> RainbowSearchResult:
    """First rainbow loose Hamilton cycle in enumeration order, if any."""
    if g.n % (g.k - 1) != 0:
        raise InvalidInput(f"(k-1) = {g.k - 1} must divide n = {g.n}")
    budget = budget or EnumerationBudget()
    clock = _BudgetClock(budget)
    colour_of = chi.colour
    count = g.n // (g.k - 1)
    if count >= 3 and len(g.edges) >= count:
        for walk in _anchored_walks(g, clock, colour_of=colour_of):
            return RainbowSearchResult("found", LooseCycle(walk, g.k))
    return RainbowSearchResult("unknown" if clock.exhausted else "absent")


def find_loose_hamilton_path(
    g: Hypergraph,
    a: int,
    b: int,
    forbidden_pairs: PairGraph | Iterable[Iterable[int]] = (),
) -> LoosePath | None:
    """A spanning loose path from a to b, or definitive absence.

    No chosen hyperedge may contain a forbidden pair of vertices.
    """
    if (g.n - 1) % (g.k - 1) != 0:
        raise InvalidInput(f"no loose path spans {g.n} vertices with k = {g.k}")
    if not (0 <= a < g.n and 0 <= b < g.n) or a == b:
        raise InvalidInput(f"endpoints {a}, {b} must be distinct vertices")
    if not isinstance(forbidden_pairs, PairGraph):
        forbidden_pairs = PairGraph.from_pairs(forbidden_pairs)
    allowed: dict[int, list[tuple[int, ...]]] = {}
    for e in g.edges:
        if forbidden_pairs.contained_pairs(e):
            continue
        for v in e:
            allowed.setdefault(v, []).append(e)
    length = (g.n - 1) // (g.k - 1)

    def extend(walk: list[int], used: set[int], depth: int):
        current = walk[-1]
        last = depth == length - 1
        for e in allowed.get(current, ()):
            e_set = set(e)
            if (e_set & used) != {current}:
                continue
            others = e_set - {current}
            if last:
                if b not in others:
                    continue
                walk.extend(sorted(others - {b}))
                walk.append(b)
                yield tuple(walk)
                del walk[-(len(others)):]
                continue
            if b in others:
                continue
            for nxt in sorted(others):
                interior = sorted(others - {nxt})
                walk.extend(interior)
                walk.append(nxt)
                used |= others
                yield from extend(walk, used, depth + 1)
                used -= others
                del walk[-(len(interior) + 1):]

    for walk in extend([a], {a}, 0):
        return LoosePath(walk, g.k)
    return None


def find_tight_hamilton_cycle(
    g: Hypergraph, chi: Colouring | None = None
) -> TightCycle | None:
    """Exhaustive tight Hamilton cycle search for 3-graphs; with a colouring,
    only rainbow cycles count.  Symmetry is cut by fixing the start vertex
    and the direction."""
    if g.k != 3:
        raise InvalidInput("tight-cycle machinery supports k = 3 only")
    if g.n > 12:
        raise InvalidInput("tight-cycle search is limited to n <= 12")
    if g.n < 3:
        return None
    n = g.n

    def windows_ok(order: list[int], colours: set[int], i: int) -> int | None:
        """Colour of window ending at position i, or None if not an edge or
        a repeated colour (when rainbow mode is on)."""
        window = order[i - 2: i + 1]
        if not g.contains(window):
            return None
        if chi is None:
            return -1
        c = chi.colour(window)
        return None if c in colours else c

    def search(order: list[int], used: set[int], colours: set[int]):
        i = len(order) - 1
        if i >= 2:
            c = windows_ok(order, colours, i)
            if c is None:
                return
            if chi is not None:
                colours.add(c)
        if len(order) == n:
            closing = []
            ok = order[1] < order[-1]  # one direction per cyclic ordering
            if ok:
                for j in range(2):
                    window = [order[(n - 2 + j + d) % n] for d in range(3)]
                    if not g.contains(window):
                        ok = False
                        break
                    if chi is not None:
                        c = chi.colour(window)
                        if c in colours or c in closing:
                            ok = False
                            break
                        closing.append(c)
            if ok:
                yield tuple(order)
        else:
            for v in sorted(set(range(n)) - used):
                order.append(v)
                used.add(v)
                yield from search(order, used, colours)
                used.discard(v)
                order.pop()
        if i >= 2 and chi is not None:
            colours.discard(c)

    for ordering in search([0], {0}, set()):
        result = validate_tight_cycle(g, ordering)
        assert isinstance(result, TightCycle)
        return result
    return None


def exists_rainbow_tight_hc(g: Hypergraph, chi: Colouring) -> RainbowSearchResult:
    """Exhaustive search for a rainbow tight Hamilton cycle (k = 3 only)."""
    witness = find_tight_hamilton_cycle(g, chi)
    if witness is None:
        return RainbowSearchResult("absent")
    return RainbowSearchResult("found", witness)


def uniform_random_hamilton_cycle(
    g: Hypergraph,
    seed: int,
    method: str = "auto",
    budget: EnumerationBudget | None = None,
) -> LooseCycle:
    """A uniformly random loose Hamilton cycle.

    For complete hosts a random vertex permutation already induces a uniform
    cycle (every cycle arises from the same number of orderings), which
    avoids enumerating the whole set.  Otherwise the enumerated canonical
    set is sampled directly.
    """
    if method not in ("auto", "enumerate", "permutation"):
        raise InvalidInput(f"unknown sampling method {method!r}")
    if method == "permutation" or (method == "auto" and g.is_complete()):
        if g.n % (g.k - 1) != 0 or g.n // (g.k - 1) < 3:
            raise InvalidInput("graph has no loose Hamilton cycle")
        gen = stream(seed, "uniform-cycle")
        perm = tuple(int(v) for v in gen.permutation(g.n))
        return LooseCycle(perm, g.k)
    result = enumerate_loose_hamilton_cycles(g, budget)
    if not result.complete:
        raise InvalidInput("enumeration budget exceeded; cannot sample uniformly")
    if not result.cycles:
        raise InvalidInput("graph has no loose Hamilton cycle")
    gen = stream(seed, "uniform-cycle")
    return result.cycles[int(gen.integers(len(result.cycles)))]


def find_hamilton_dicycle(d: Digraph) -> tuple[int, ...] | None:
    """A Hamilton dicycle of d (as a vertex tuple starting at 0), or None.

    Exact backtracking; branches are ordered most-constrained-first.
    """
    n = d.n
    if n == 0:
        return None
    if n == 1:
        return None  # no self-arcs, so no dicycle on one vertex
    outs = d.out_neighbours
    arc_set = d.arcs

    def remaining_out(v: int, used: set[int]) -> int:
        return sum(1 for w in outs[v] if w not in used)

    def search(walk: list[int], used: set[int]):
        current = walk[-1]
        if len(walk) == n:
            if (current, 0) in arc_set:
                yield tuple(walk)
            return
        candidates = [v for v in outs[current] if v not in used]
        candidates.sort(key=lambda v: (remaining_out(v, used), v))
        for v in candidates:
            walk.append(v)
            used.add(v)
            yield from search(walk, used)
            used.discard(v)
            walk.pop()

    for cycle in search([0], {0}):
        return cycle
    return None
