from collections import Counter
from itertools import combinations

import pytest

from loosehc.colouring import check_global_bound, is_rainbow
from loosehc.constructions import (
    first_prefix_colouring,
    pair_colour_id,
    prefix_colour_id,
    tight_counterexample,
)
from loosehc.cycles import TightCycle, validate_tight_cycle
from loosehc.hypergraph import InvalidInput, min_j_degree
from loosehc.oracles import (
    enumerate_loose_hamilton_cycles,
    exists_rainbow_loose_hc,
    exists_rainbow_tight_hc,
    find_tight_hamilton_cycle,
)


def test_tight_counterexample_n6():
    g, chi = tight_counterexample(6)
    assert len(g.edges) == 12
    assert sorted(chi.class_sizes.values()) == [4, 4, 4]
    assert min_j_degree(g, 2) == 2


def test_tight_counterexample_n9():
    g, chi = tight_counterexample(9)
    assert min_j_degree(g, 2) == 4  # = 2 * (n/3 - 1)
    assert max(chi.class_sizes.values()) == 6
    assert max(chi.class_sizes.values()) <= 9


def test_tight_counterexample_colour_well_defined():
    g, chi = tight_counterexample(9)
    # no triple inside a single part is an edge, so each edge has exactly
    # one same-part pair
    part_of = [v // 3 for v in range(9)]
    for e in g.edges:
        parts = [part_of[v] for v in e]
        assert sorted(Counter(parts).values()) == [1, 2]


def test_tight_counterexample_has_tight_cycle_at_n6():
    g, _ = tight_counterexample(6)
    assert isinstance(validate_tight_cycle(g, range(6)), TightCycle)
    assert find_tight_hamilton_cycle(g) is not None


def test_tight_counterexample_no_tight_cycle_at_n9():
    # Exhaustively verified: with three odd parts the run structure of a
    # tight cycle is impossible, so the n = 9 instance has no tight
    # Hamilton cycle whatsoever (rainbow or not).
    g, _ = tight_counterexample(9)
    assert find_tight_hamilton_cycle(g) is None


def test_tight_counterexample_rainbow_absence():
    for n in (6, 9):
        g, chi = tight_counterexample(n)
        assert exists_rainbow_tight_hc(g, chi).status == "absent"


def test_tight_counterexample_loose_view_n6():
    # Exploratory record (computed by exhaustive enumeration): the n = 6
    # instance has 16 loose Hamilton cycles, and all of them are rainbow
    # under the pair colouring.
    g, chi = tight_counterexample(6)
    cycles = enumerate_loose_hamilton_cycles(g).cycles
    assert len(cycles) == 16
    assert exists_rainbow_loose_hc(g, chi).status == "found"
    assert all(is_rainbow(chi, c.edge_sequence) for c in cycles)


def test_tight_counterexample_rejects_small_n():
    with pytest.raises(InvalidInput):
        tight_counterexample(5)


def test_prefix_colouring_examples():
    chi = first_prefix_colouring(8, 3)
    assert chi.colour((2, 5, 7)) == prefix_colour_id((2, 5))
    assert chi.class_sizes[prefix_colour_id((0, 1))] == 6  # n - 2
    assert check_global_bound(chi, (8 - 3 + 1) / 8 ** 2 + 1e-9, 8, 3)


def test_prefix_colouring_every_k4_has_repeat():
    chi = first_prefix_colouring(8, 3)
    for quad in combinations(range(8), 4):
        triples = list(combinations(quad, 3))
        colours = [chi.colour(t) for t in triples]
        assert len(set(colours)) < len(colours)


def test_prefix_colouring_loose_cycles_rainbow():
    chi = first_prefix_colouring(8, 3)
    g = chi.graph
    for cycle in enumerate_loose_hamilton_cycles(g).cycles:
        assert is_rainbow(chi, cycle.edge_sequence)


def test_prefix_colouring_rejects_k2():
    with pytest.raises(InvalidInput):
        first_prefix_colouring(6, 2)


def test_pair_colour_id_is_injective():
    seen = {pair_colour_id(u, v) for u, v in combinations(range(20), 2)}
    assert len(seen) == len(list(combinations(range(20), 2)))
