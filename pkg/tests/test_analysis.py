import pytest

from bfds.analysis import (count_complete_fixed_points, count_fixed_points,
                           count_gardens, count_predecessors,
                           count_simple_cycles_global,
                           count_simple_cycles_through, count_simple_paths,
                           count_subsequent, gardens_of_eden, has_fixed_point,
                           is_complete_fixed_point, is_cycle_point,
                           is_fixed_point, is_garden_of_eden,
                           max_simple_cycle_len, max_simple_path_len,
                           min_cycle_len, min_path_len, path_intersection,
                           reachable_any, reachable_within, t_garden_of_eden,
                           tail_length)
from bfds.core import (ArbitraryPermutation, Fixed, Parallel,
                       ResourceBudgetError, System, config_from_str, const,
                       neg, pos)
from bfds.graph import ConfigGraph, build_graph
from bfds.randsys import random_system

from conftest import RhoOracle, seeded_rng


def identity_system(n):
    return System(n, 1, tuple((pos(i),) for i in range(1, n + 1)),
                  Fixed(), Parallel())


def const0_system():
    return System(2, 1, ((const(0),), (const(0),)), Fixed(), Parallel())


def tail_system():
    # 1-node: x <- 0 gives the pure tail 1 -> 0 -> 0
    return System(1, 1, ((const(0),),), Fixed(), Parallel())


def test_reachability_examples():
    g = build_graph(identity_system(2))
    c, d = config_from_str("01"), config_from_str("10")
    assert reachable_any(g, c, c) == [c, c]
    assert reachable_any(g, c, d) is None
    assert reachable_within(g, c, c, 1) is not None
    assert min_path_len(g, c, c) == 1


def test_path_intersection():
    g = build_graph(identity_system(2))
    c, d = config_from_str("01"), config_from_str("10")
    assert path_intersection(g, c, c)
    assert not path_intersection(g, c, d)
    swap = build_graph(System(2, 1, ((pos(2),), (pos(1),)), Fixed(), Parallel()))
    assert path_intersection(swap, c, d)


def test_tail_length():
    g = build_graph(identity_system(3))
    for c in range(8):
        assert tail_length(g, c) == 0
    tg = build_graph(tail_system())
    assert tail_length(tg, 1) == 1
    assert tail_length(tg, 0) == 0


def test_predecessors_and_gardens():
    g = build_graph(identity_system(2))
    c = config_from_str("01")
    assert not is_garden_of_eden(g, c)
    assert count_predecessors(g, c) == 1
    gc = build_graph(const0_system())
    assert count_predecessors(gc, 0) == 4
    assert is_garden_of_eden(gc, config_from_str("11"))
    assert count_gardens(gc) == 3
    assert gardens_of_eden(gc) == [1, 2, 3]


def test_t_garden_of_eden():
    gc = build_graph(const0_system())
    # every garden maps straight to 00
    assert t_garden_of_eden(gc, 0, 1)
    assert t_garden_of_eden(gc, 0, 2)  # 00 -> 00 keeps the walk going
    assert not t_garden_of_eden(gc, config_from_str("10"), 1)


def test_cycles():
    g = build_graph(identity_system(2))
    c = config_from_str("01")
    assert is_cycle_point(g, c)
    assert min_cycle_len(g, c) == 1
    assert count_simple_cycles_through(g, c) == 1
    neg2 = build_graph(System(2, 1, ((neg(1),), (neg(2),)), Fixed(), Parallel()))
    assert min_cycle_len(neg2, 0) == 2
    assert count_simple_cycles_global(neg2) == 2
    tg = build_graph(tail_system())
    assert not is_cycle_point(tg, 1)
    assert min_cycle_len(tg, 1) is None


def test_fixed_points():
    g = build_graph(identity_system(2))
    assert count_fixed_points(g) == 4
    assert count_complete_fixed_points(g) == 4
    assert all(is_complete_fixed_point(g, c) for c in range(4))
    gc = build_graph(const0_system())
    assert is_fixed_point(gc, 0)
    assert not is_complete_fixed_point(gc, config_from_str("11"))
    assert has_fixed_point(gc)


def test_count_subsequent():
    g = build_graph(identity_system(2))
    assert count_subsequent(g, 0) == 1
    arb = ConfigGraph(System(2, 1, ((pos(2),), (pos(1),)),
                             Fixed(), ArbitraryPermutation()))
    assert count_subsequent(arb, config_from_str("01")) == 2


def test_count_simple_paths():
    g = build_graph(identity_system(2))
    c, d = config_from_str("01"), config_from_str("10")
    assert count_simple_paths(g, c, c) == 1
    assert count_simple_paths(g, c, d) == 0


def test_dfs_budget_is_loud():
    sys = System(4, 1, tuple((neg(i),) for i in range(1, 5)), Fixed(), Parallel())
    g = build_graph(sys)
    with pytest.raises(ResourceBudgetError):
        count_simple_cycles_global(g, budget=2)


def test_max_simple_path_monotone_vs_min():
    rng = seeded_rng(53)
    for _ in range(10):
        sys = random_system(rng, 3, 2, "parallel", "coordinated")
        g = build_graph(sys)
        for c in range(8):
            for d in range(8):
                lo = min_path_len(g, c, d)
                hi = max_simple_path_len(g, c, d)
                assert (lo is None) == (hi is None)
                if lo is not None:
                    assert lo <= hi
                paths = count_simple_paths(g, c, d)
                if c != d:
                    assert (paths >= 1) == (lo is not None)


def test_solvers_agree_with_rho_oracle():
    rng = seeded_rng(59)
    for _ in range(15):
        sys = random_system(rng, 4, 1, "parallel", "fixed")
        oracle = RhoOracle(sys)
        g = build_graph(sys)
        assert count_fixed_points(g) == len(oracle.fixed_points())
        assert count_complete_fixed_points(g) == len(oracle.fixed_points())
        assert gardens_of_eden(g) == oracle.gardens()
        assert count_simple_cycles_global(g) == oracle.count_cycles()
        for c in range(16):
            assert tail_length(g, c) == oracle.tail[c]
            assert is_cycle_point(g, c) == (c in oracle.on_cycle)
            if c in oracle.on_cycle:
                assert min_cycle_len(g, c) == oracle.cycle_len[c]
            assert count_predecessors(g, c) == len(oracle.preds[c])
