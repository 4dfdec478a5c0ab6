"""Building feasible switchings part by part.

Given a suitable splitting, a viable partition and its rerouting, each part
is retiled in turn: the part's induced graph is filtered of edges that
repeat a host colour, a conflict graph lifted from the earlier parts'
trimmed path collections rules out pairwise colour collisions, and the
tiling module covers the part by short paths between the rerouting pairs.
Gluing all paths to the untouched stretches of the host yields the new
Hamilton cycle.

The builder asserts its own post-conditions but callers are expected to
re-check the result through the predicate module; nothing is trusted from
construction.
"""

from dataclasses import dataclass

from .colouring import Colouring, is_rainbow, shares_colour
from .cycles import LooseCycle, LoosePath, Violation, validate_loose_cycle
from .graphs import PairGraph
from .hypergraph import Hypergraph, InvalidInput, Parameters, edges_within
from .rng import child_seed
from .sampler import (
    BudgetExhausted,
    accept_suitable,
    build_aux_digraph,
    build_viable_partition,
    find_dicycle,
    sample_splitting,
    sample_transverse_partition,
)
from .splitting import (
    CheckReport,
    Rerouting,
    Splitting,
    Switching,
    TransversePartition,
    host_arcs,
    is_feasible,
    is_switching,
    partition_is_transverse,
    validate_splitting,
)
from .tiling import TilingConfig, TilingInfeasible, TilingRequest, build_path_tiling, validate_path_tiling


@dataclass
class SwitchBuildConfig:
    seed: int = 0
    structural: bool | None = None
    claim_budget: int = 1000
    epsilon: float = 0.2
    threshold: float = 0.0
    j: int = 1
    beta: float = 0.5
    suitability_verified: bool = False


@dataclass
class SwitchBuildResult:
    switching: Switching
    switching_report: CheckReport
    feasibility: CheckReport
    cross_colour_ok: bool   # trimmed collections of distinct parts never share a colour
    union_rainbow: bool     # the union of all trimmed collections is rainbow


def part_labels(splitting: Splitting, partition: TransversePartition) -> list[list[int]]:
    """labels[h][i] is the unique vertex of part h on path i."""
    m = splitting.size
    labels = []
    for part in partition.parts:
        row: list[int | None] = [None] * m
        for v in part:
            row[splitting.path_of[v]] = v
        if any(v is None for v in row):
            raise InvalidInput("each part must meet every path exactly once")
        labels.append(row)
    return labels


def build_conflict_graph(
    splitting: Splitting,
    labels: list[list[int]],
    trimmed_so_far: list[list[tuple[int, ...]]],
    h: int,
    path_len: int,
) -> PairGraph:
    """Lift every vertex pair covered by an earlier part's trimmed edges to
    the current part's labels.  Pairs touching the anchor path never join."""
    k = splitting.host.k
    vertex_path = splitting.path_of
    pairs: set[tuple[int, int]] = set()
    for prior in range(h):
        for e in trimmed_so_far[prior]:
            indices = [vertex_path[v] for v in e]
            assert 0 not in indices, "trimmed edges avoid the anchor's vertex"
            for a in range(len(indices)):
                for b in range(a + 1, len(indices)):
                    u = labels[h][indices[a]]
                    v = labels[h][indices[b]]
                    pairs.add((min(u, v), max(u, v)))
    graph = PairGraph(frozenset(pairs))
    cap = 2 * path_len * k * k
    assert graph.max_degree() <= cap, f"conflict degree {graph.max_degree()} > {cap}"
    return graph


def _filtered_part_edges(
    g: Hypergraph,
    chi: Colouring,
    host_colours: set[int],
    part: frozenset[int],
    anchor_vertex: int,
) -> list[tuple[int, ...]]:
    """Edges of g inside the part, minus those avoiding the anchor's vertex
    that repeat a host colour."""
    kept = []
    for e in edges_within(g, part):
        if anchor_vertex not in e and chi.colour(e) in host_colours:
            continue
        kept.append(e)
    return kept


def _assemble_cycle(
    g: Hypergraph,
    splitting: Splitting,
    new_paths: list[LoosePath],
) -> LooseCycle:
    """Alternate the host's untouched stretches with the new paths."""
    arcs = host_arcs(splitting)
    arc_at: dict[int, tuple[int, ...]] = {}
    for arc in arcs:
        arc_at[arc[0]] = arc
        arc_at[arc[-1]] = arc
    path_at: dict[int, LoosePath] = {}
    for p in new_paths:
        for v in p.endvertices:
            path_at[v] = p

    seq: list[int] = []
    start_arc = arcs[0]
    seq.extend(start_arc)
    current = start_arc[-1]
    for step in range(len(arcs)):
        path = path_at[current]
        walk = path.vertices if path.vertices[0] == current else path.vertices[::-1]
        assert walk[0] == current
        seq.extend(walk[1:])
        current = walk[-1]
        if step < len(arcs) - 1:
            arc = arc_at[current]
            walk = arc if arc[0] == current else arc[::-1]
            assert walk[0] == current
            seq.extend(walk[1:])
            current = walk[-1]
    assert seq[0] == seq[-1] and len(seq) == g.n + 1, "assembly did not close"
    cycle = validate_loose_cycle(g, seq[:-1])
    if isinstance(cycle, Violation):
        raise AssertionError(f"assembled sequence is not a Hamilton cycle: {cycle}")
    return cycle


def build_feasible_switching(
    host: LooseCycle,
    anchor: LoosePath,
    splitting: Splitting,
    partition: TransversePartition,
    rerouting: Rerouting,
    g: Hypergraph,
    chi: Colouring,
    config: SwitchBuildConfig | None = None,
) -> SwitchBuildResult:
    """Construct the new cycle and its bounded splitting from a splitting,
    a viable partition and a rerouting with the per-part pair quota.

    The anchor must be the splitting's first path.  Per-part tilings use
    deterministic child seeds of config.seed, so the build is reproducible.
    Raises TilingInfeasible (naming "part-h:stage") if any part cannot be
    tiled.
    """
    config = config or SwitchBuildConfig()
    if splitting.index_of(anchor) != 0:
        raise InvalidInput("the anchor must be the splitting's path 0")
    if not partition_is_transverse(splitting, partition):
        raise InvalidInput("partition is not transverse")
    m = splitting.size
    t = anchor.length
    part_count = len(partition.parts)
    quota, rem = divmod(m, part_count)
    if rem:
        raise InvalidInput("part count must divide the splitting size")

    pairs_by_part: list[list[tuple[int, int]]] = [[] for _ in range(part_count)]
    for a, b in rerouting.pairs:
        ha, hb = partition.part_of[a], partition.part_of[b]
        if ha != hb:
            raise InvalidInput(f"rerouting pair ({a}, {b}) straddles parts")
        pairs_by_part[ha].append((a, b))
    if any(len(ps) != quota for ps in pairs_by_part):
        raise InvalidInput("rerouting does not meet the per-part pair quota")

    labels = part_labels(splitting, partition)
    host_colours = {chi.colour(e) for e in host.edge_sequence}
    untouched = host.edges_avoiding(splitting.interiors)

    new_paths: list[LoosePath] = []
    trimmed: list[list[tuple[int, ...]]] = []
    cross_ok = True
    for h in range(part_count):
        part = partition.parts[h]
        anchor_vertex = labels[h][0]
        conflict = build_conflict_graph(splitting, labels, trimmed, h, t)
        kept = _filtered_part_edges(g, chi, host_colours, part, anchor_vertex)

        old_ids = tuple(sorted(part))
        to_new = {v: i for i, v in enumerate(old_ids)}
        sub = Hypergraph(len(old_ids), g.k, tuple(
            tuple(to_new[v] for v in e) for e in kept
        ))
        request = TilingRequest(
            sub,
            tuple(tuple(sorted((to_new[a], to_new[b]))) for a, b in pairs_by_part[h]),
            PairGraph.from_pairs(
                (to_new[u], to_new[v]) for u, v in conflict.edges_inside(part)
            ),
            t,
        )
        cfg = TilingConfig(
            seed=child_seed(config.seed, "part-tiling", h),
            claim_budget=config.claim_budget,
            structural=config.structural,
            epsilon=config.epsilon,
            threshold=config.threshold,
            j=config.j,
            beta=config.beta,
        )
        try:
            tiling = build_path_tiling(request, cfg)
        except TilingInfeasible as exc:
            raise TilingInfeasible(f"part-{h}:{exc.stage}", exc.detail) from exc
        report = validate_path_tiling(request, tiling)
        assert report.ok, f"part {h} tiling failed validation: {report}"

        part_paths = [
            LoosePath(tuple(old_ids[v] for v in p.vertices), g.k)
            for p in tiling.paths
        ]
        new_paths.extend(part_paths)
        edges_here = [
            e for p in part_paths for e in p.edges if anchor_vertex not in e
        ]
        # The filter guarantees trimmed edges never repeat a host colour.
        assert all(chi.colour(e) not in host_colours for e in edges_here)
        for prior_edges in trimmed:
            if shares_colour(chi, edges_here, prior_edges):
                cross_ok = False
        trimmed.append(edges_here)

    union_rainbow = is_rainbow(chi, [e for bucket in trimmed for e in bucket])
    if config.suitability_verified:
        assert cross_ok, "suitable splittings never share colours across parts"
        assert union_rainbow, "suitable splittings keep the fresh edges rainbow"

    new_cycle = _assemble_cycle(g, splitting, new_paths)
    new_split = validate_splitting(new_cycle, tuple(new_paths), "bounded", 2 * t)
    if isinstance(new_split, Violation):
        raise AssertionError(f"new paths do not split the new cycle: {new_split}")
    switching = Switching(anchor, host, splitting, new_cycle, new_split)

    switching_report = is_switching(
        anchor, host, splitting, new_cycle, new_split, graph=g
    )
    assert switching_report.ok, f"builder emitted a non-switching: {switching_report}"
    assert new_cycle.edges_avoiding(new_split.interiors) and \
        sorted(new_cycle.edges_avoiding(new_split.interiors)) == sorted(untouched)
    feasibility = is_feasible(switching, chi)
    if config.suitability_verified:
        assert feasibility.ok, f"suitability promised feasibility: {feasibility}"
    return SwitchBuildResult(
        switching, switching_report, feasibility, cross_ok, union_rainbow
    )


@dataclass
class PipelineConfig:
    """Budgets and flags for the end-to-end sampled pipeline."""

    seed: int = 0
    sample_budget: int = 2000
    partition_budget: int = 500
    partition_tries: int = 20
    claim_budget: int = 1000
    structural: bool | None = None   # None: decided by host size (< 50)
    require_events: bool = False     # strict acceptance through the event gate

    def is_structural(self, g: Hypergraph) -> bool:
        return self.structural if self.structural is not None else g.n < 50


def sample_switching(
    g: Hypergraph,
    chi: Colouring,
    host: LooseCycle,
    anchor: LoosePath,
    params: Parameters,
    config: PipelineConfig | None = None,
) -> SwitchBuildResult | None:
    """End-to-end: sample splittings around the anchor, build a viable
    partition with its rerouting, and retile the parts into a switching.

    Returns None when the budgets run out; the caller decides what that
    means (the whole pipeline is a heuristic at desk scale).
    """
    config = config or PipelineConfig()
    structural = config.is_structural(g)
    for trial in range(config.sample_budget):
        sample = sample_splitting(
            host, anchor, params.split_size, params.path_len, config.seed, trial
        )
        if len(sample.all_paths) != params.split_size:
            continue
        if config.require_events:
            outcome = accept_suitable(sample, g, chi, params)
            if not outcome.accepted:
                continue
            splitting = outcome.splitting
        else:
            checked = validate_splitting(
                host, sample.all_paths, "balanced", params.path_len
            )
            if not isinstance(checked, Splitting):
                continue
            splitting = checked

        built = None
        for attempt in range(config.partition_tries):
            try:
                drawn = sample_transverse_partition(
                    splitting, params,
                    seed=child_seed(config.seed, "pipeline-partition", trial * 1000 + attempt),
                    structural=structural,
                    budget=config.partition_budget,
                    g=g,
                )
            except BudgetExhausted:
                break
            dicycle = find_dicycle(build_aux_digraph(drawn.partition, splitting))
            if dicycle is None:
                continue
            swapped, rerouting = build_viable_partition(
                splitting, drawn.partition, dicycle
            )
            try:
                built = build_feasible_switching(
                    host, anchor, splitting, swapped, rerouting, g, chi,
                    SwitchBuildConfig(
                        seed=child_seed(config.seed, "pipeline-build", trial),
                        structural=config.structural,
                        claim_budget=config.claim_budget,
                        epsilon=params.epsilon,
                        threshold=params.threshold,
                        j=params.j,
                        beta=params.beta,
                        suitability_verified=config.require_events,
                    ),
                )
            except TilingInfeasible:
                continue
            break
        if built is not None:
            return built
    return None
