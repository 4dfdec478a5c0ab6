from itertools import combinations

import pytest

from loosehc.colouring import Colouring
from loosehc.cycles import LooseCycle, LoosePath, Violation, increasing_path, validate_loose_cycle
from loosehc.hypergraph import Hypergraph, InvalidInput
from loosehc.splitting import (
    Rerouting,
    Splitting,
    TransversePartition,
    host_arcs,
    is_suitable,
    is_switching,
    is_transverse,
    is_viable,
    partition_is_transverse,
    rerouting_cycle_count,
    same_path,
    validate_rerouting,
    validate_splitting,
)


def h8():
    g = Hypergraph.from_edges(8, 3, [(0, 1, 2), (2, 3, 4), (4, 5, 6), (0, 6, 7)])
    cycle = validate_loose_cycle(g, range(8))
    assert isinstance(cycle, LooseCycle)
    return cycle


def h8_split():
    cycle = h8()
    paths = (LoosePath((0, 1, 2), 3), LoosePath((4, 5, 6), 3))
    s = validate_splitting(cycle, paths, "balanced", 1)
    assert isinstance(s, Splitting)
    return s


def test_validate_splitting_examples():
    cycle = h8()
    ok = validate_splitting(
        cycle, (LoosePath((0, 1, 2), 3), LoosePath((4, 5, 6), 3)), "balanced", 1
    )
    assert isinstance(ok, Splitting)

    wrong_len = validate_splitting(
        cycle, (LoosePath((0, 1, 2), 3), LoosePath((4, 5, 6), 3)), "balanced", 2
    )
    assert isinstance(wrong_len, Violation) and wrong_len.kind == "length"

    overlap = validate_splitting(
        cycle, (LoosePath((0, 1, 2), 3), LoosePath((2, 3, 4), 3)), "balanced", 1
    )
    assert isinstance(overlap, Violation) and overlap.kind == "overlap"

    foreign = validate_splitting(
        cycle, (LoosePath((1, 2, 3), 3),), "balanced", 1
    )
    assert isinstance(foreign, Violation) and foreign.kind == "non-subpath"


def test_splitting_derived_sets():
    s = h8_split()
    assert s.vertex_set == {0, 1, 2, 4, 5, 6}
    assert s.endvertices == {0, 2, 4, 6}
    assert s.interiors == {1, 5}
    assert s.path_of[5] == 1


def test_is_transverse():
    s = h8_split()
    assert is_transverse(s, {0, 4}) is True
    assert is_transverse(s, {0, 2}) is False
    assert is_transverse(s, set()) is True
    with pytest.raises(InvalidInput):
        is_transverse(s, {0, 3})


def test_host_arcs():
    s = h8_split()
    arcs = {tuple(a) for a in host_arcs(s)}
    assert arcs == {(2, 3, 4), (6, 7, 0)}


def test_validate_rerouting_h8_pairings():
    s = h8_split()
    identity = validate_rerouting(s, [(0, 2), (4, 6)])
    assert isinstance(identity, Rerouting)
    cross = validate_rerouting(s, [(0, 4), (2, 6)])
    assert isinstance(cross, Rerouting)
    bad = validate_rerouting(s, [(2, 4), (0, 6)])
    assert isinstance(bad, Violation) and bad.kind == "multiple-cycles"

    not_pairing = validate_rerouting(s, [(0, 2), (4, 5)])
    assert isinstance(not_pairing, Violation) and not_pairing.kind == "not-a-pairing"


def test_rerouting_agrees_with_union_find_on_h8():
    s = h8_split()
    endpoints = sorted(s.endvertices)
    seen = set()
    for a_partner in endpoints[1:]:
        rest = [v for v in endpoints[1:] if v != a_partner]
        pairing = [(endpoints[0], a_partner), tuple(rest)]
        key = frozenset(frozenset(p) for p in pairing)
        if key in seen:
            continue
        seen.add(key)
        traversal = validate_rerouting(s, pairing)
        assert isinstance(traversal, Rerouting) == (rerouting_cycle_count(s, pairing) == 1)


def all_balanced_splittings(cycle, length, count):
    """Every count-path splitting of the cycle into length-`length` runs."""
    c = cycle.edge_count
    out = []
    for starts in combinations(range(c), count):
        paths = []
        ok = True
        for p in starts:
            for q in starts:
                if p != q and (q - p) % c <= length:
                    ok = False
        if not ok:
            continue
        paths = [increasing_path(cycle, cycle.edge_sequence[p], length) for p in starts]
        s = validate_splitting(cycle, paths, "balanced", length)
        if isinstance(s, Splitting):
            out.append(s)
    return out


def test_rerouting_traversal_vs_union_find_bigger_host():
    g = Hypergraph.complete(12, 3)
    cycle = validate_loose_cycle(g, range(12))
    for s in all_balanced_splittings(cycle, 1, 3):
        endpoints = sorted(s.endvertices)
        for pairing in _perfect_matchings(endpoints):
            traversal = validate_rerouting(s, pairing)
            count = rerouting_cycle_count(s, pairing)
            assert isinstance(traversal, Rerouting) == (count == 1)


def _perfect_matchings(items):
    if not items:
        yield []
        return
    first = items[0]
    for i in range(1, len(items)):
        rest = items[1:i] + items[i + 1:]
        for sub in _perfect_matchings(rest):
            yield [(first, items[i])] + sub


def identity_pairs(splitting):
    return [tuple(sorted(p.endvertices)) for p in splitting.paths]


def test_identity_pairing_always_validates():
    g = Hypergraph.complete(12, 3)
    cycle = validate_loose_cycle(g, range(12))
    for count in (1, 2, 3):
        for s in all_balanced_splittings(cycle, 1, count):
            assert isinstance(validate_rerouting(s, identity_pairs(s)), Rerouting)


def test_is_switching_identity_fails_anchor_condition():
    s = h8_split()
    anchor = s.paths[0]
    report = is_switching(anchor, s.host, s, s.host, s)
    assert not report.ok
    assert report.conditions["shape"] is True
    assert report.conditions["anchor-transverse"] is False
    assert report.conditions["outside-unchanged"] is True


def test_is_switching_detects_outside_change():
    g = Hypergraph.complete(8, 3)
    cycle = validate_loose_cycle(g, range(8))
    paths = (LoosePath((0, 1, 2), 3), LoosePath((4, 5, 6), 3))
    s = validate_splitting(cycle, paths, "balanced", 1)
    # Swap vertices 3 and 7: both changed edges avoid the interiors {1, 5}.
    other = validate_loose_cycle(g, (0, 1, 2, 7, 4, 5, 6, 3))
    assert isinstance(other, LooseCycle)
    s2 = validate_splitting(other, paths, "balanced", 1)
    assert isinstance(s2, Splitting)
    report = is_switching(s.paths[0], cycle, s, other, s2, graph=g)
    assert not report.ok
    assert report.conditions["outside-unchanged"] is False


def test_is_suitable_injective_reduces_to_host_edge_count():
    g = Hypergraph.complete(14, 3)
    cycle = validate_loose_cycle(g, range(14))
    paths = tuple(
        increasing_path(cycle, cycle.edge_sequence[p], 1) for p in (0, 2, 4)
    )
    s = validate_splitting(cycle, paths, "balanced", 1)
    assert isinstance(s, Splitting)
    report = is_suitable(s, s.paths[0], Colouring.injective(g), g, epsilon=0.2)
    assert report.ok, str(report)


def test_is_suitable_detects_adjacent_repeat():
    # The union of the offending pair has 2k-1 = 5 vertices, so it needs 5
    # distinct non-anchor paths; use a splitting of size 6.
    g = Hypergraph.complete(24, 3)
    cycle = validate_loose_cycle(g, range(24))
    paths = tuple(
        increasing_path(cycle, cycle.edge_sequence[p], 1)
        for p in (0, 2, 4, 6, 8, 10)
    )
    s = validate_splitting(cycle, paths, "balanced", 1)
    assert isinstance(s, Splitting)
    # Path i covers the run [4i, 4i+2]; e and f share only vertex 4 and
    # their union meets paths 1..5 once each.
    e, f = (4, 8, 12), (4, 16, 20)
    assignment = list(range(len(g.edges)))
    idx = {edge: i for i, edge in enumerate(g.edges)}
    assignment[idx[f]] = assignment[idx[e]]
    chi = Colouring(g, tuple(assignment))
    report = is_suitable(s, s.paths[0], chi, g, epsilon=0.2)
    assert not report.ok
    assert report.conditions["adjacent-repeat"] is False


def test_is_suitable_detects_disjoint_repeat_without_support():
    g = Hypergraph.complete(26, 3)
    cycle = validate_loose_cycle(g, range(26))
    # Path i sits at edge position 2i and covers the vertex run [4i, 4i+2].
    paths = tuple(
        increasing_path(cycle, cycle.edge_sequence[p], 1)
        for p in (0, 2, 4, 6, 8, 10)
    )
    s = validate_splitting(cycle, paths, "balanced", 1)
    assert isinstance(s, Splitting)
    e = (4, 8, 12)    # meets paths 1, 2, 3
    f = (13, 16, 20)  # meets paths 3, 4, 5: exactly one common path
    assignment = list(range(len(g.edges)))
    idx = {edge: i for i, edge in enumerate(g.edges)}
    assignment[idx[f]] = assignment[idx[e]]
    chi = Colouring(g, tuple(assignment))
    report = is_suitable(s, s.paths[0], chi, g, epsilon=0.2)
    assert not report.ok, str(report)
    assert report.conditions["disjoint-repeat-support"] is False


def test_is_viable_on_complete_host():
    g = Hypergraph.complete(12, 3)
    cycle = validate_loose_cycle(g, range(12))
    paths = tuple(
        increasing_path(cycle, cycle.edge_sequence[p], 1) for p in (0, 2, 4)
    )
    s = validate_splitting(cycle, paths, "balanced", 1)
    assert isinstance(s, Splitting)
    # Transverse partition of the 9 splitting vertices into 3 parts; runs
    # are [0,2], [4,6], [8,10].  Each part holds one entry/exit pair:
    # {4,10}, {2,8}, {0,6}.
    partition = TransversePartition((
        frozenset({1, 4, 10}),
        frozenset({2, 5, 8}),
        frozenset({0, 6, 9}),
    ))
    assert partition_is_transverse(s, partition)
    report = is_viable(s, partition, g, epsilon=0.2, pairs_per_part=1,
                       threshold=0.0, j=1)
    assert report.ok, str(report)
    rerouting = report.witnesses["pair-quota"]
    per_part = [0, 0, 0]
    for a, b in rerouting.pairs:
        ha = partition.part_of[a]
        assert ha == partition.part_of[b]
        per_part[ha] += 1
    assert per_part == [1, 1, 1]


def test_is_viable_fails_on_quota():
    g = Hypergraph.complete(12, 3)
    cycle = validate_loose_cycle(g, range(12))
    paths = tuple(
        increasing_path(cycle, cycle.edge_sequence[p], 1) for p in (0, 2, 4)
    )
    s = validate_splitting(cycle, paths, "balanced", 1)
    # Put both endpoints of no pair in one part: a partition whose parts
    # cannot host any rerouting pair quota.  Parts split endpoint/interior:
    partition = TransversePartition((
        frozenset({0, 4, 8}),    # entries
        frozenset({1, 5, 9}),    # interiors
        frozenset({2, 6, 10}),   # exits
    ))
    # entries and exits never share a part, so no within-part pairing exists
    report = is_viable(s, partition, g, epsilon=0.2, pairs_per_part=1,
                       threshold=0.0, j=1)
    assert not report.ok
    assert report.conditions["pair-quota"] is False


def test_is_viable_fails_on_degree():
    g = Hypergraph.complete(12, 3)
    # remove all edges inside one prospective part
    banned = {(1, 5, 9)}
    g2 = Hypergraph.from_edges(12, 3, [e for e in g.edges if e not in banned])
    cycle = validate_loose_cycle(g2, range(12))
    paths = tuple(
        increasing_path(cycle, cycle.edge_sequence[p], 1) for p in (0, 2, 4)
    )
    s = validate_splitting(cycle, paths, "balanced", 1)
    partition = TransversePartition((
        frozenset({0, 4, 8}),
        frozenset({1, 5, 9}),
        frozenset({2, 6, 10}),
    ))
    report = is_viable(s, partition, g2, epsilon=0.2, pairs_per_part=1,
                       threshold=0.0, j=1)
    assert report.conditions["part-degree"] is False


def test_same_path_ignores_direction():
    assert same_path(LoosePath((0, 1, 2), 3), LoosePath((2, 1, 0), 3))
    assert not same_path(LoosePath((0, 1, 2), 3), LoosePath((0, 2, 1), 3))
