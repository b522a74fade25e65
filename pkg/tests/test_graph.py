import pytest

from bfds.core import (ArbitraryPermutation, Asynchronous,
                       EnumerationTooLargeError, Fixed, Individual, Parallel,
                       StructureError, System, config_from_str, execute, neg,
                       pos, successors)
from bfds.graph import ConfigGraph, build_graph, edge_exists, reachable_set
from bfds.randsys import random_system
from bfds.reductions import build_cyclic_connected

from conftest import seeded_rng


def identity_system(n):
    return System(n, 1, tuple((pos(i),) for i in range(1, n + 1)),
                  Fixed(), Parallel())


def test_build_graph_identity():
    g = build_graph(identity_system(1))
    assert g.arcs(0).keys() == {0}
    assert g.arcs(1).keys() == {1}


def test_build_graph_negation_cycles():
    sys = System(2, 1, ((neg(1),), (neg(2),)), Fixed(), Parallel())
    g = build_graph(sys)
    assert g.arcs(config_from_str("00")).keys() == {config_from_str("11")}
    assert g.arcs(config_from_str("01")).keys() == {config_from_str("10")}


def test_graph_matches_successors():
    rng = seeded_rng(31)
    for _ in range(10):
        sys = random_system(rng, 3, 2, "parallel", "individual")
        g = build_graph(sys)
        for c in range(8):
            direct = successors(sys, c)
            assert set(g.arcs(c)) == set(direct)
            for d, arc in g.arcs(c).items():
                assert arc.count == len(direct[d])


def test_deterministic_out_degree_one():
    rng = seeded_rng(37)
    for _ in range(10):
        sys = random_system(rng, 4, 2, "parallel", "fixed")
        g = build_graph(sys)
        assert all(len(g.arcs(c)) == 1 for c in g.all_configs())


def test_state_cap():
    with pytest.raises(EnumerationTooLargeError):
        build_graph(identity_system(4), state_cap=8)


def test_frontier_mode_rejects_global_queries():
    g = ConfigGraph(identity_system(3))
    with pytest.raises(StructureError):
        g.all_configs()


def test_reachable_set_basics():
    sys = identity_system(3)
    c = config_from_str("010")
    assert reachable_set(sys, c, 0) == {c}
    assert reachable_set(sys, c, 10) == {c}


def test_reachable_set_monotone_and_stabilizes():
    rng = seeded_rng(41)
    for _ in range(10):
        sys = random_system(rng, 3, 2, "parallel", "coordinated")
        c = rng.randrange(8)
        prev = set()
        for bound in range(0, 9):
            cur = reachable_set(sys, c, bound)
            assert prev <= cur
            prev = cur
        assert reachable_set(sys, c, 8) == reachable_set(sys, c, 100)


def test_reachable_set_cyclic_generator():
    sys = build_cyclic_connected(3)
    for c in range(8):
        assert reachable_set(sys, c, 1 << 3) == set(range(8))


def test_edge_exists_identity_and_swap():
    ident = identity_system(2)
    c, d = config_from_str("01"), config_from_str("10")
    assert edge_exists(ident, c, c) is not None
    assert edge_exists(ident, c, d) is None
    swap_arb = System(2, 1, ((pos(2),), (pos(1),)), Fixed(), ArbitraryPermutation())
    witness = edge_exists(swap_arb, c, config_from_str("11"))
    assert witness is not None
    assert execute(swap_arb, c, witness) == config_from_str("11")


def test_edge_exists_matches_successors():
    rng = seeded_rng(43)
    for _ in range(12):
        schedule = rng.choice(("parallel", "fixed-permutation",
                               "arbitrary-permutation", "asynchronous"))
        selection = rng.choice(("fixed", "coordinated", "individual"))
        sys = random_system(rng, 3, 2, schedule, selection)
        for c in range(8):
            succ = set(successors(sys, c))
            for d in range(8):
                witness = edge_exists(sys, c, d)
                assert (witness is not None) == (d in succ)
                if witness is not None:
                    assert execute(sys, c, witness) == d
