"""Switching-driven local search for a rainbow loose Hamilton cycle.

Start from a random Hamilton cycle; while some colour repeats on the
cycle, wrap one offending edge in an anchored path, sample a splitting
around it, and apply a feasible switching, which scatters the anchor's
vertices across distinct new paths and never creates repeats away from
them.  When the host is too small for the switching geometry (or budgets
run out), the step falls back to redrawing a fresh random cycle.  The
search is a heuristic: exhausting the step budget is a report, not an
error.
"""

from dataclasses import dataclass, field

from .colouring import Colouring, is_rainbow
from .cycles import LooseCycle, increasing_path, validate_loose_cycle
from .hypergraph import Hypergraph, InvalidInput, Parameters
from .oracles import uniform_random_hamilton_cycle
from .rng import child_seed
from .splitting import is_feasible, is_switching
from .switchbuild import PipelineConfig, sample_switching


@dataclass(frozen=True)
class Conflict:
    """Two equal-coloured cycle edges, with the anchored path that would
    cover them in a switching step."""

    colour: int
    first: tuple[int, ...]
    second: tuple[int, ...]
    kind: str  # "adjacent" (edges share a vertex) or "disjoint"
    cyclic_distance: int
    anchor_start: int  # edge position where the covering path begins


def find_conflicts(cycle: LooseCycle, chi: Colouring, path_len: int) -> list[Conflict]:
    """All equal-coloured edge pairs of the cycle, nearest pairs first.

    The covering path starts at the first edge and also covers the second
    when the pair fits within one anchored path.
    """
    positions_by_colour: dict[int, list[int]] = {}
    for pos, e in enumerate(cycle.edge_sequence):
        positions_by_colour.setdefault(chi.colour(e), []).append(pos)
    c = cycle.edge_count
    conflicts = []
    for colour, positions in positions_by_colour.items():
        if len(positions) < 2:
            continue
        for i in range(len(positions)):
            for j in range(i + 1, len(positions)):
                a, b = positions[i], positions[j]
                d = min((b - a) % c, (a - b) % c)
                e, f = cycle.edge_sequence[a], cycle.edge_sequence[b]
                kind = "adjacent" if set(e) & set(f) else "disjoint"
                if (b - a) % c <= path_len - 1:
                    start = a
                elif (a - b) % c <= path_len - 1:
                    start = b
                else:
                    start = a
                conflicts.append(Conflict(colour, e, f, kind, d, start))
    conflicts.sort(key=lambda x: (x.cyclic_distance, x.first, x.second))
    return conflicts


@dataclass
class SearchLog:
    steps: list[dict] = field(default_factory=list)

    def note(self, **kwargs) -> None:
        self.steps.append(kwargs)


@dataclass
class SearchResult:
    success: bool
    cycle: LooseCycle
    steps: int
    restarts: int
    log: SearchLog

    def __bool__(self) -> bool:
        return self.success


def _conflicts_avoiding(cycle: LooseCycle, chi: Colouring, banned: frozenset[int]) -> int:
    """Count equal-coloured pairs among edges disjoint from a vertex set."""
    seen: dict[int, int] = {}
    pairs = 0
    for e in cycle.edge_sequence:
        if banned & set(e):
            continue
        colour = chi.colour(e)
        pairs += seen.get(colour, 0)
        seen[colour] = seen.get(colour, 0) + 1
    return pairs


def find_rainbow_hamilton_cycle(
    g: Hypergraph,
    chi: Colouring,
    params: Parameters,
    seed: int,
    max_steps: int = 500,
    start: LooseCycle | None = None,
    pipeline: PipelineConfig | None = None,
) -> SearchResult:
    """Local search: resolve one conflict per step by a feasible switching,
    falling back to a fresh random Hamilton cycle when no switching can be
    built within budget.  Any returned success is re-validated.
    """
    if g.n % (g.k - 1) != 0:
        raise InvalidInput(f"(k-1) = {g.k - 1} must divide n = {g.n}")
    log = SearchLog()
    cycle = start if start is not None else uniform_random_hamilton_cycle(
        g, child_seed(seed, "search-start")
    )
    restarts = 0
    base_pipeline = pipeline or PipelineConfig(sample_budget=400, partition_tries=10)
    for step in range(max_steps):
        conflicts = find_conflicts(cycle, chi, params.path_len)
        if not conflicts:
            checked = validate_loose_cycle(g, cycle.vertices)
            assert isinstance(checked, LooseCycle)
            assert is_rainbow(chi, cycle.edge_sequence)
            log.note(step=step, action="done", conflicts=0)
            return SearchResult(True, cycle, step, restarts, log)

        target = conflicts[0]
        anchor = increasing_path(
            cycle, cycle.edge_sequence[target.anchor_start], params.path_len
        )
        cfg = PipelineConfig(
            seed=child_seed(seed, "search-step", step),
            sample_budget=base_pipeline.sample_budget,
            partition_budget=base_pipeline.partition_budget,
            partition_tries=base_pipeline.partition_tries,
            claim_budget=base_pipeline.claim_budget,
            structural=base_pipeline.structural,
            require_events=base_pipeline.require_events,
        )
        built = None
        if g.n >= params.split_size * (params.path_len + 1) * (g.k - 1):
            built = sample_switching(g, chi, cycle, anchor, params, cfg)
        if built is None:
            # No switching available: redraw and keep searching.
            restarts += 1
            cycle = uniform_random_hamilton_cycle(
                g, child_seed(seed, "search-restart", restarts)
            )
            log.note(step=step, action="restart", conflicts=len(conflicts))
            continue

        switching = built.switching
        report = is_switching(
            switching.anchor, switching.host, switching.splitting,
            switching.new_cycle, switching.new_splitting, graph=g,
        )
        assert report.ok, f"pipeline produced a non-switching: {report}"
        feasible = is_feasible(switching, chi)
        assert feasible.ok, f"pipeline produced an infeasible switching: {feasible}"
        before = _conflicts_avoiding(cycle, chi, anchor.vertex_set)
        after = _conflicts_avoiding(switching.new_cycle, chi, anchor.vertex_set)
        assert after <= before, "feasible switchings never add conflicts off the anchor"
        log.note(
            step=step, action="switch",
            conflicts=len(conflicts),
            colour=target.colour, kind=target.kind,
        )
        cycle = switching.new_cycle
    return SearchResult(False, cycle, max_steps, restarts, log)
