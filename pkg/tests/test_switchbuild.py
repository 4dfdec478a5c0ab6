import pytest

from loosehc.colouring import Colouring
from loosehc.cycles import increasing_path, validate_loose_cycle
from loosehc.hypergraph import Hypergraph, InvalidInput, Parameters
from loosehc.splitting import (
    Splitting,
    TransversePartition,
    is_feasible,
    is_switching,
    validate_splitting,
)
from loosehc.switchbuild import (
    PipelineConfig,
    SwitchBuildConfig,
    build_conflict_graph,
    build_feasible_switching,
    part_labels,
    sample_switching,
)


def desk_params(**overrides):
    base = dict(k=3, j=1, path_len=1, pairs_per_part=1,
                epsilon=0.2, mu=0.05, gamma=0.01, beta=0.5, threshold=0.0)
    base.update(overrides)
    return Parameters(**base)


def splitting_n12():
    g = Hypergraph.complete(12, 3)
    cycle = validate_loose_cycle(g, range(12))
    paths = tuple(
        increasing_path(cycle, cycle.edge_sequence[p], 1) for p in (0, 2, 4)
    )
    s = validate_splitting(cycle, paths, "balanced", 1)
    assert isinstance(s, Splitting)
    return g, cycle, s


def viable_n12(s):
    partition = TransversePartition((
        frozenset({1, 4, 10}),
        frozenset({2, 5, 8}),
        frozenset({0, 6, 9}),
    ))
    from loosehc.splitting import Rerouting, validate_rerouting

    rerouting = validate_rerouting(s, [(4, 10), (2, 8), (0, 6)])
    assert isinstance(rerouting, Rerouting)
    return partition, rerouting


def test_part_labels_bijection():
    _, _, s = splitting_n12()
    partition, _ = viable_n12(s)
    labels = part_labels(s, partition)
    assert labels[0] == [1, 4, 10]
    assert labels[2] == [0, 6, 9]


def test_build_conflict_graph_first_part_empty():
    _, _, s = splitting_n12()
    partition, _ = viable_n12(s)
    labels = part_labels(s, partition)
    assert build_conflict_graph(s, labels, [], 0, 1).edges == frozenset()


def test_build_conflict_graph_lifts_pairs():
    g = Hypergraph.complete(24, 3)
    cycle = validate_loose_cycle(g, range(24))
    paths = tuple(
        increasing_path(cycle, cycle.edge_sequence[p], 1)
        for p in (0, 2, 4, 6, 8, 10)
    )
    s = validate_splitting(cycle, paths, "balanced", 1)
    assert isinstance(s, Splitting)
    # Path i covers [4i, 4i+2]. Parts: one vertex per path.
    parts = (
        frozenset({0, 4, 8, 12, 16, 20}),
        frozenset({1, 5, 9, 13, 17, 21}),
        frozenset({2, 6, 10, 14, 18, 22}),
    )
    partition = TransversePartition(parts)
    labels = part_labels(s, partition)
    # A previous trimmed edge through the vertices of paths 3, 5 at part 0
    trimmed = [[(12, 16, 20)]]
    lifted = build_conflict_graph(s, labels, trimmed, 1, 1)
    assert lifted.edges == frozenset({(13, 17), (13, 21), (17, 21)})


def test_build_feasible_switching_injective():
    g, cycle, s = splitting_n12()
    partition, rerouting = viable_n12(s)
    chi = Colouring.injective(g)
    result = build_feasible_switching(
        cycle, s.paths[0], s, partition, rerouting, g, chi,
        SwitchBuildConfig(seed=1),
    )
    # Independent re-checks through the predicate module.
    sw = result.switching
    report = is_switching(sw.anchor, sw.host, sw.splitting,
                          sw.new_cycle, sw.new_splitting, graph=g)
    assert report.ok, str(report)
    assert is_feasible(sw, chi).ok
    assert result.cross_colour_ok and result.union_rainbow
    # New splitting paths live inside single parts.
    for p in sw.new_splitting.paths:
        assert len({partition.part_of[v] for v in p.vertices}) == 1


def test_build_feasible_switching_rejects_misplaced_anchor():
    g, cycle, s = splitting_n12()
    partition, rerouting = viable_n12(s)
    chi = Colouring.injective(g)
    with pytest.raises(InvalidInput):
        build_feasible_switching(
            cycle, s.paths[1], s, partition, rerouting, g, chi
        )


def test_part_filter_definition():
    from loosehc.switchbuild import _filtered_part_edges

    g = Hypergraph.complete(12, 3)
    cycle = validate_loose_cycle(g, range(12))
    assignment = list(range(len(g.edges)))
    idx = {e: i for i, e in enumerate(g.edges)}
    host_edge = cycle.edge_sequence[1]
    poisoned = (4, 8, 10)    # inside the part, avoids the anchor's vertex
    protected = (3, 4, 6)    # inside the part, through the anchor's vertex
    assignment[idx[poisoned]] = assignment[idx[host_edge]]
    assignment[idx[protected]] = assignment[idx[host_edge]]
    chi = Colouring(g, tuple(assignment))
    host_colours = {chi.colour(e) for e in cycle.edge_sequence}
    part = frozenset({3, 4, 6, 8, 9, 10})
    kept = _filtered_part_edges(g, chi, host_colours, part, anchor_vertex=3)
    assert poisoned not in kept
    assert protected in kept          # edges through the anchor's vertex stay
    assert (4, 6, 9) in kept          # clean edges stay


def test_anchor_coloured_like_host_still_feasible():
    # Colouring a kept edge through the anchor's vertex with a host colour
    # must not break the build: feasibility only constrains fresh edges
    # outside the anchor.
    g, cycle, s = splitting_n12()
    partition, rerouting = viable_n12(s)
    assignment = list(range(len(g.edges)))
    idx = {e: i for i, e in enumerate(g.edges)}
    assignment[idx[(1, 4, 10)]] = assignment[idx[cycle.edge_sequence[1]]]
    chi = Colouring(g, tuple(assignment))
    result = build_feasible_switching(
        cycle, s.paths[0], s, partition, rerouting, g, chi,
        SwitchBuildConfig(seed=2),
    )
    assert is_feasible(result.switching, chi).ok


def test_is_feasible_failure_witnesses():
    # Recolour fresh edges of a built switching to create both failure
    # modes: an internal repeat and a collision with an untouched edge.
    g, cycle, s = splitting_n12()
    partition, rerouting = viable_n12(s)
    result = build_feasible_switching(
        cycle, s.paths[0], s, partition, rerouting, g, chi := Colouring.injective(g),
        SwitchBuildConfig(seed=1),
    )
    sw = result.switching
    fresh = [
        e for e in sw.new_cycle.edge_sequence
        if set(e) <= (sw.new_splitting.vertex_set - sw.anchor.vertex_set)
    ]
    untouched = sw.host.edges_avoiding(sw.splitting.interiors)
    idx = {e: i for i, e in enumerate(g.edges)}
    if len(fresh) >= 2:
        assignment = list(range(len(g.edges)))
        assignment[idx[fresh[0]]] = assignment[idx[fresh[1]]]
        bad = Colouring(g, tuple(assignment))
        verdict = is_feasible(sw, bad)
        assert not verdict.ok
        assert verdict.conditions["internal-rainbow"] is False
        assert verdict.witnesses["internal-rainbow"]
    if fresh:
        assignment = list(range(len(g.edges)))
        assignment[idx[fresh[0]]] = assignment[idx[untouched[0]]]
        bad = Colouring(g, tuple(assignment))
        verdict = is_feasible(sw, bad)
        assert not verdict.ok
        assert verdict.conditions["no-outside-collision"] is False
        assert verdict.witnesses["no-outside-collision"]


def test_check_report_serialization():
    g, cycle, s = splitting_n12()
    report = is_switching(s.paths[0], cycle, s, cycle, s)
    text = str(report)
    assert "ok=False" in text
    assert "condition=anchor-transverse FAIL" in text


def test_sample_switching_end_to_end():
    g = Hypergraph.complete(12, 3)
    cycle = validate_loose_cycle(g, range(12))
    chi = Colouring.injective(g)
    params = desk_params()
    anchor = increasing_path(cycle, cycle.edge_sequence[0], 1)
    result = sample_switching(g, chi, cycle, anchor, params,
                              PipelineConfig(seed=3))
    assert result is not None
    sw = result.switching
    assert is_switching(sw.anchor, sw.host, sw.splitting, sw.new_cycle,
                        sw.new_splitting, graph=g).ok
    assert is_feasible(sw, chi).ok


def test_sample_switching_deterministic():
    g = Hypergraph.complete(12, 3)
    cycle = validate_loose_cycle(g, range(12))
    chi = Colouring.injective(g)
    params = desk_params()
    anchor = increasing_path(cycle, cycle.edge_sequence[0], 1)
    first = sample_switching(g, chi, cycle, anchor, params, PipelineConfig(seed=3))
    second = sample_switching(g, chi, cycle, anchor, params, PipelineConfig(seed=3))
    assert first.switching.new_cycle == second.switching.new_cycle
    assert [p.vertices for p in first.switching.new_splitting.paths] == \
        [p.vertices for p in second.switching.new_splitting.paths]


def test_sample_switching_impossible_geometry_returns_none():
    # n = 10 cannot host three disjoint single-edge paths at all.
    g = Hypergraph.complete(10, 3)
    cycle = validate_loose_cycle(g, range(10))
    chi = Colouring.injective(g)
    params = desk_params()
    anchor = increasing_path(cycle, cycle.edge_sequence[0], 1)
    result = sample_switching(g, chi, cycle, anchor, params,
                              PipelineConfig(seed=1, sample_budget=300))
    assert result is None
