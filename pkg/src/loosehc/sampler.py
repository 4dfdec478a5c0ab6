"""Randomized constructions: edge-sampled splittings, the deterministic
event checkers gating their acceptance, transverse-partition sampling, the
auxiliary digraph whose Hamilton dicycles encode reroutings, and the swap
construction that turns a sampled partition into a viable one.

Randomness is confined to the samplers; every acceptance decision is made
by deterministic scans of the realized sample.
"""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, sqrt

from .colouring import Colouring
from .cycles import LooseCycle, LoosePath, increasing_path, subpath_run
from .graphs import Digraph
from .hypergraph import Hypergraph, InvalidInput, Parameters, edges_within
from .oracles import find_hamilton_dicycle
from .rng import child_seed, stream
from .splitting import (
    CheckReport,
    Rerouting,
    Splitting,
    TransversePartition,
    entry_exit_by_path,
    is_suitable,
    is_viable,
    partition_is_transverse,
    validate_rerouting,
    validate_splitting,
)


class BudgetExhausted(Exception):
    """A resampling loop ran out of attempts; carries the stage name."""

    def __init__(self, stage: str, detail: str):
        super().__init__(f"{stage}: {detail}")
        self.stage = stage


def vertices_close(cycle: LooseCycle, u: int, v: int, path_len: int) -> bool:
    """True iff some edge through u and some edge through v lie on a common
    sub-path of the cycle with at most 2*path_len + 1 edges."""
    c = cycle.edge_count
    for a in cycle.positions_by_vertex[u]:
        for b in cycle.positions_by_vertex[v]:
            d = abs(a - b)
            if min(d, c - d) <= 2 * path_len:
                return True
    return False


def close_pairs_within(cycle: LooseCycle, vertices, path_len: int):
    """All close pairs inside a vertex set (as sorted 2-tuples)."""
    vs = sorted(set(vertices))
    return [
        (u, v) for u, v in combinations(vs, 2)
        if vertices_close(cycle, u, v, path_len)
    ]


def is_spread(cycle: LooseCycle, vertices, path_len: int) -> bool:
    return not close_pairs_within(cycle, vertices, path_len)


@dataclass(frozen=True)
class SampledSplitting:
    """An anchored path plus the paths grown from an edge sample."""

    cycle: LooseCycle
    anchor: LoosePath
    sampled_positions: tuple[int, ...]
    paths: tuple[LoosePath, ...]
    edge_prob: float

    @property
    def all_paths(self) -> tuple[LoosePath, ...]:
        """All paths with the anchor at index 0 and the rest following the
        host's cyclic order from the anchor's position.  (The rerouting
        machinery reads index i+1 as "the next path around the cycle".)"""
        run = subpath_run(self.cycle, self.anchor)
        start = run[0] if run is not None else 0
        c = self.cycle.edge_count
        order = sorted(
            range(len(self.paths)),
            key=lambda i: (self.sampled_positions[i] - start) % c,
        )
        return (self.anchor, *(self.paths[i] for i in order))

    @property
    def sampled_vertices(self) -> frozenset[int]:
        return frozenset(v for p in self.paths for v in p.vertices)

    @property
    def vertices(self) -> frozenset[int]:
        return self.sampled_vertices | self.anchor.vertex_set


def sample_splitting(
    cycle: LooseCycle,
    anchor: LoosePath,
    path_count: int,
    path_len: int,
    seed: int,
    trial: int = 0,
) -> SampledSplitting:
    """Bernoulli-sample the cycle's edges with probability
    (path_count-1)*(k-1)/n and grow a forward path of the given length
    from each sampled edge.  Deterministic given (seed, trial)."""
    n, k = cycle.n, cycle.k
    p = (path_count - 1) * (k - 1) / n
    if p > 1:
        raise InvalidInput(f"edge probability {p} exceeds 1")
    gen = stream(seed, "edge-sample", trial)
    draws = gen.random(cycle.edge_count)
    positions = tuple(i for i in range(cycle.edge_count) if draws[i] < p)
    paths = tuple(
        increasing_path(cycle, cycle.edge_sequence[i], path_len) for i in positions
    )
    return SampledSplitting(cycle, anchor, positions, paths, p)


@dataclass
class EventReport:
    flags: dict[str, bool]
    witnesses: dict[str, object] = field(default_factory=dict)

    @property
    def any(self) -> bool:
        return any(self.flags.values())


def check_events(
    sample: SampledSplitting,
    g: Hypergraph,
    chi: Colouring,
    *,
    epsilon: float,
    path_count: int,
    j: int = 1,
    threshold: float = 0.0,
    widen_to_all_transverse: bool = False,
) -> EventReport:
    """Deterministic checkers for the five rejection events of a sample.

    heavy-colour-set: some spread (k-1)-set in the sampled vertices lies in
    at least epsilon*m/4 edges (within the whole sample) that repeat a host
    colour.  spread-colour-pair: two equal-coloured edges meeting in at
    most one vertex whose union is spread inside the sampled vertices.
    almost-spread-colour-pair: the disjoint variant with exactly one close
    pair in the union.  low-sample-degree: the sample's induced j-degree
    falls below (threshold + 3*epsilon/4) * M^(k-j).  close-paths: two
    distinct paths carry close vertices.

    With widen_to_all_transverse the first event scans transverse sets
    instead of spread ones (a stricter desk-scale variant).
    """
    cycle, t = sample.cycle, sample.anchor.length
    k, m = g.k, path_count
    flags: dict[str, bool] = {}
    witnesses: dict[str, object] = {}
    sampled = sorted(sample.sampled_vertices)
    everything = sorted(sample.vertices)
    host_colours = {chi.colour(e) for e in cycle.edge_sequence}

    path_index: dict[int, int] = {}
    for i, path in enumerate(sample.all_paths):
        for v in path.vertices:
            path_index.setdefault(v, i)

    def scan_sets():
        for s in combinations(sampled, k - 1):
            if widen_to_all_transverse:
                if len({path_index[v] for v in s}) == len(s):
                    yield s
            elif is_spread(cycle, s, t):
                yield s

    flags["heavy-colour-set"] = False
    allowance = epsilon * m / 4
    for s in scan_sets():
        count = 0
        for v in everything:
            if v in s:
                continue
            e = tuple(sorted((*s, v)))
            if e in g.edge_set and chi.colour(e) in host_colours:
                count += 1
        if count >= allowance:
            flags["heavy-colour-set"] = True
            witnesses["heavy-colour-set"] = {"set": s, "count": count}
            break

    by_colour: dict[int, list[tuple[int, ...]]] = {}
    for e in edges_within(g, sampled):
        by_colour.setdefault(chi.colour(e), []).append(e)
    flags["spread-colour-pair"] = False
    flags["almost-spread-colour-pair"] = False
    for colour, edges in by_colour.items():
        if len(edges) < 2:
            continue
        for e, f in combinations(edges, 2):
            cut = len(set(e) & set(f))
            if cut > 1:
                continue
            union = set(e) | set(f)
            close = close_pairs_within(cycle, union, t)
            if not close and not flags["spread-colour-pair"]:
                flags["spread-colour-pair"] = True
                witnesses["spread-colour-pair"] = {"colour": colour, "pair": (e, f)}
            if cut == 0 and len(close) == 1 and not flags["almost-spread-colour-pair"]:
                flags["almost-spread-colour-pair"] = True
                witnesses["almost-spread-colour-pair"] = {"colour": colour, "pair": (e, f)}
        if flags["spread-colour-pair"] and flags["almost-spread-colour-pair"]:
            break

    part_count = t * (k - 1) + 1
    sample_vertex_target = part_count * m
    bound = (threshold + 3 * epsilon / 4) * sample_vertex_target ** (k - j)
    inside_edges = edges_within(g, everything)
    flags["low-sample-degree"] = False
    for s in combinations(everything, j):
        deg = sum(1 for e in inside_edges if set(s) <= set(e))
        if deg < bound:
            flags["low-sample-degree"] = True
            witnesses["low-sample-degree"] = {"set": s, "degree": deg, "bound": bound}
            break

    flags["close-paths"] = False
    paths = sample.all_paths
    for i, j2 in combinations(range(len(paths)), 2):
        stop = False
        for u in paths[i].vertices:
            for v in paths[j2].vertices:
                if vertices_close(cycle, u, v, t):
                    flags["close-paths"] = True
                    witnesses["close-paths"] = {"paths": (i, j2), "pair": (u, v)}
                    stop = True
                    break
            if stop:
                break
        if stop:
            break

    return EventReport(flags, witnesses)


@dataclass
class AcceptanceResult:
    accepted: bool
    reasons: list[str]
    events: EventReport | None = None
    splitting: Splitting | None = None

    def __bool__(self) -> bool:
        return self.accepted


def accept_suitable(
    sample: SampledSplitting,
    g: Hypergraph,
    chi: Colouring,
    params: Parameters,
) -> AcceptanceResult:
    """Accept a sample iff it is a balanced splitting of the right size and
    none of the rejection events fire.  Acceptance implies suitability for
    the anchor, which is asserted rather than trusted."""
    reasons: list[str] = []
    if len(sample.all_paths) != params.split_size:
        reasons.append(f"size: {len(sample.all_paths)} paths, want {params.split_size}")
        return AcceptanceResult(False, reasons)
    checked = validate_splitting(
        sample.cycle, sample.all_paths, "balanced", params.path_len
    )
    if not isinstance(checked, Splitting):
        reasons.append(f"invalid-splitting: {checked}")
        return AcceptanceResult(False, reasons)
    events = check_events(
        sample, g, chi,
        epsilon=params.epsilon,
        path_count=params.split_size,
        j=params.j,
        threshold=params.threshold,
    )
    if events.any:
        reasons.extend(name for name, hit in events.flags.items() if hit)
        return AcceptanceResult(False, reasons, events)
    suitable = is_suitable(checked, sample.anchor, chi, g, params.epsilon)
    assert suitable.ok, f"accepted sample must be suitable: {suitable}"
    return AcceptanceResult(True, [], events, checked)


@dataclass
class PartitionSample:
    partition: TransversePartition
    report: CheckReport
    attempts: int


def _draw_transverse_partition(
    splitting: Splitting, gen
) -> TransversePartition:
    """The sequential uniform process: each round takes one unused vertex
    from every path; the last part collects the leftovers."""
    remaining = [list(p.vertices) for p in splitting.paths]
    t_rounds = len(splitting.paths[0].vertices) - 1
    parts: list[set[int]] = []
    for _ in range(t_rounds):
        part: set[int] = set()
        for bucket in remaining:
            idx = int(gen.integers(len(bucket)))
            part.add(bucket.pop(idx))
        parts.append(part)
    parts.append({bucket[0] for bucket in remaining})
    return TransversePartition(tuple(frozenset(p) for p in parts))


def partition_conditions(
    splitting: Splitting,
    partition: TransversePartition,
    params: Parameters,
    g: Hypergraph | None,
    structural: bool,
) -> CheckReport:
    """Acceptance conditions for a sampled transverse partition.

    exit-quota: every part holds exactly pairs_per_part path exits.
    entry-bound: no part holds more than beta*m path entries.
    relative-degree: every j-set of the splitting vertices keeps degree
    (threshold + 5*epsilon/8) * m^(k-j) into every part.
    Structural mode gates on exit-quota alone.
    """
    entries, exits = entry_exit_by_path(splitting)
    conditions: dict[str, bool] = {}
    witnesses: dict[str, object] = {}
    m = splitting.size
    exit_set = set(exits)
    entry_set = set(entries)

    quota = params.pairs_per_part
    conditions["exit-quota"] = all(
        len(part & exit_set) == quota for part in partition.parts
    )
    if not structural:
        cap = params.beta * m
        conditions["entry-bound"] = all(
            len(part & entry_set) <= cap for part in partition.parts
        )
        bound = (params.threshold + 5 * params.epsilon / 8) * m ** (g.k - params.j)
        degree_ok = True
        for s in combinations(sorted(splitting.vertex_set), params.j):
            for h, part in enumerate(partition.parts):
                target = part - set(s)
                count = 0
                for e in g.by_vertex[min(s)]:
                    e_set = set(e)
                    if set(s) <= e_set and (e_set - set(s)) <= target:
                        count += 1
                if count < bound:
                    degree_ok = False
                    witnesses["relative-degree"] = {"set": s, "part": h, "degree": count}
                    break
            if not degree_ok:
                break
        conditions["relative-degree"] = degree_ok
    return CheckReport(all(conditions.values()), conditions, witnesses)


def sample_transverse_partition(
    splitting: Splitting,
    params: Parameters,
    seed: int,
    structural: bool = True,
    budget: int = 1000,
    g: Hypergraph | None = None,
) -> PartitionSample:
    """Resample uniform transverse partitions until the conditions hold."""
    if splitting.size != params.split_size:
        raise InvalidInput(
            f"splitting has {splitting.size} paths, parameters say {params.split_size}"
        )
    if not structural and g is None:
        raise InvalidInput("strict mode needs the host hypergraph")
    for attempt in range(budget):
        gen = stream(seed, "transverse-partition", attempt)
        partition = _draw_transverse_partition(splitting, gen)
        report = partition_conditions(splitting, partition, params, g, structural)
        if report.ok:
            return PartitionSample(partition, report, attempt + 1)
    raise BudgetExhausted(
        "transverse-partition", f"no acceptable partition in {budget} attempts"
    )


def build_aux_digraph(
    partition: TransversePartition, splitting: Splitting
) -> Digraph:
    """Arc i -> i' iff the exit of path i and the exit of path i'-1 live in
    different parts.  (i -> i+1 never appears: that compares an exit with
    itself.)"""
    from .splitting import paths_in_cyclic_order

    if not paths_in_cyclic_order(splitting):
        raise InvalidInput("paths must be indexed in cyclic order around the host")
    m = splitting.size
    _, exits = entry_exit_by_path(splitting)
    part_of = partition.part_of
    arcs = [
        (i, ip)
        for i in range(m)
        for ip in range(m)
        if i != ip and part_of[exits[i]] != part_of[exits[(ip - 1) % m]]
    ]
    return Digraph.from_arcs(m, arcs)


def find_dicycle(d: Digraph) -> tuple[int, ...] | None:
    """Exact Hamilton dicycle search (shared backtracking engine)."""
    return find_hamilton_dicycle(d)


def build_viable_partition(
    splitting: Splitting,
    partition: TransversePartition,
    dicycle: tuple[int, ...],
) -> tuple[TransversePartition, Rerouting]:
    """Turn a sampled partition plus a Hamilton dicycle into a rerouting
    and the swapped partition that hosts it.

    The rerouting pairs the entry of path i with the exit of path i'-1
    along each arc i -> i'.  For each i the entry is then swapped with the
    unique vertex of path i sitting in the pair's target part, so every
    pair ends up inside one part, exactly quota-many per part.
    """
    from .splitting import paths_in_cyclic_order

    m = splitting.size
    if sorted(dicycle) != list(range(m)):
        raise InvalidInput("dicycle must span all path indices")
    if not paths_in_cyclic_order(splitting):
        raise InvalidInput("paths must be indexed in cyclic order around the host")
    entries, exits = entry_exit_by_path(splitting)
    part_count = len(partition.parts)
    quota, rem = divmod(m, part_count)
    if rem:
        raise InvalidInput("part count must divide the splitting size")
    exit_counts = [
        len(part & set(exits)) for part in partition.parts
    ]
    if any(c != quota for c in exit_counts):
        raise InvalidInput("partition does not hold the exit quota")

    successor = {dicycle[i]: dicycle[(i + 1) % m] for i in range(m)}
    part_of = dict(partition.part_of)
    pairs = []
    for i in range(m):
        ip = successor[i]
        partner = exits[(ip - 1) % m]
        pairs.append(tuple(sorted((entries[i], partner))))
        target = part_of[partner]
        assert part_of[exits[i]] != target, "dicycle arc breaks the digraph rule"
        inside = [v for v in splitting.paths[i].vertices if part_of[v] == target]
        assert len(inside) == 1, "transversality guarantees a unique swap vertex"
        w = inside[0]
        assert w != exits[i]
        part_of[entries[i]], part_of[w] = part_of[w], part_of[entries[i]]

    new_parts = [set() for _ in range(part_count)]
    for v, h in part_of.items():
        new_parts[h].add(v)
    swapped = TransversePartition(tuple(frozenset(p) for p in new_parts))
    assert partition_is_transverse(splitting, swapped)

    per_part = [0] * part_count
    for a, b in pairs:
        ha = swapped.part_of[a]
        assert ha == swapped.part_of[b], "pair split across parts"
        per_part[ha] += 1
    assert all(c == quota for c in per_part)

    rerouting = validate_rerouting(splitting, pairs)
    assert isinstance(rerouting, Rerouting), f"swap construction broke: {rerouting}"

    entry_set = set(entries)
    for old, new in zip(partition.parts, swapped.parts):
        assert len(old - new) <= len(old & entry_set) + quota
    return swapped, rerouting


@dataclass(frozen=True)
class FractionEstimate:
    successes: int
    trials: int
    rate: float
    interval: tuple[float, float]
    records: tuple[dict, ...]


def wilson_interval(successes: int, trials: int, z: float = 1.959964) -> tuple[float, float]:
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, centre - half), min(1.0, centre + half))


def _estimate_trial(args) -> dict:
    g, chi, cycle, anchor, params, seed, trial, structural, partition_budget = args
    sample = sample_splitting(
        cycle, anchor, params.split_size, params.path_len, seed, trial
    )
    record: dict = {"trial": trial, "sampled_edges": len(sample.sampled_positions)}
    outcome = accept_suitable(sample, g, chi, params)
    record["accepted"] = outcome.accepted
    record["reasons"] = outcome.reasons
    if outcome.events is not None:
        record["events"] = dict(outcome.events.flags)
    record["viable"] = False
    if outcome.accepted:
        try:
            drawn = sample_transverse_partition(
                outcome.splitting, params,
                seed=child_seed(seed, "estimate-partition", trial),
                structural=structural, budget=partition_budget, g=g,
            )
        except BudgetExhausted:
            record["partition"] = "budget-exhausted"
            return record
        digraph = build_aux_digraph(drawn.partition, outcome.splitting)
        dicycle = find_dicycle(digraph)
        if dicycle is None:
            record["partition"] = "no-dicycle"
            return record
        swapped, rerouting = build_viable_partition(
            outcome.splitting, drawn.partition, dicycle
        )
        verdict = is_viable(
            outcome.splitting, swapped, g,
            epsilon=params.epsilon,
            pairs_per_part=params.pairs_per_part,
            threshold=params.threshold,
            j=params.j,
        )
        record["viable"] = bool(verdict.ok)
        record["viable_conditions"] = dict(verdict.conditions)
    return record


def estimate_suitable_fraction(
    g: Hypergraph,
    chi: Colouring,
    cycle: LooseCycle,
    anchor: LoosePath,
    params: Parameters,
    trials: int,
    seed: int,
    structural: bool = True,
    partition_budget: int = 200,
    jobs: int = 1,
) -> FractionEstimate:
    """Monte-Carlo fraction of samples that are accepted as suitable and
    admit a viable partition, with a 95% Wilson interval.

    Trials own independent streams, so results are identical for any job
    count; records are merged in trial order.
    """
    if trials < 1:
        raise InvalidInput("need at least one trial")
    args = [
        (g, chi, cycle, anchor, params, seed, trial, structural, partition_budget)
        for trial in range(trials)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_estimate_trial, args, chunksize=64))
    else:
        records = [_estimate_trial(a) for a in args]
    successes = sum(1 for r in records if r["accepted"] and r["viable"])
    return FractionEstimate(
        successes=successes,
        trials=trials,
        rate=successes / trials,
        interval=wilson_interval(successes, trials),
        records=tuple(records),
    )


@dataclass(frozen=True)
class BinomialHit:
    trials: int
    prob_hit: Fraction
    mean: int
    bound: float
    passes: bool
    in_regime: bool


def exact_binomial_hit(n: int, p) -> BinomialHit:
    """Exact probability that a binomial(n, p) variable equals its mean,
    compared against 1/(4*sqrt(mean)) in exact arithmetic.

    p may be a Fraction, a string like "1/20" or "0.05", or a float (which
    is read through its decimal representation).  The mean n*p must be a
    positive integer; means above sqrt(n) are computed but flagged as
    outside the regime.
    """
    if isinstance(p, float):
        p = Fraction(str(p))
    else:
        p = Fraction(p)
    if not 0 < p <= 1:
        raise InvalidInput(f"p must lie in (0, 1], got {p}")
    mean_frac = n * p
    if mean_frac.denominator != 1:
        raise InvalidInput(f"n*p = {mean_frac} is not an integer")
    lam = int(mean_frac)
    if lam < 1:
        raise InvalidInput("the bound is undefined for a zero mean")
    prob = comb(n, lam) * p ** lam * (1 - p) ** (n - lam)
    # prob >= 1/(4*sqrt(lam))  <=>  16 * lam * prob^2 >= 1, exactly.
    passes = 16 * lam * prob * prob >= 1
    return BinomialHit(
        trials=n,
        prob_hit=prob,
        mean=lam,
        bound=1 / (4 * sqrt(lam)),
        passes=passes,
        in_regime=lam * lam <= n,
    )
