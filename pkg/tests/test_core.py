import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bfds.core import (Action, ArbitraryPermutation, Asynchronous, Coordinated,
                       EnumerationTooLargeError, Fixed, FixedPermutation,
                       Individual, Parallel, ParallelStep, PermutationList,
                       SemiCoordinated, SequentialStep, AsyncStep,
                       SelectionError, StructureError, System,
                       action_space_size, and_, async_plan_count, config_bits,
                       config_from_str, config_to_str, const, enumerate_actions,
                       execute, iter_async_plans, neg, or_, pos, step_async,
                       step_parallel, step_sequential, successor_arcs,
                       successor_set, successors, table)
from bfds.randsys import random_system

from conftest import seeded_rng


def swap_system(schedule=None, selection=None):
    return System(2, 1, ((pos(2),), (pos(1),)),
                  selection or Fixed(), schedule or Parallel())


def identity_system(n, schedule=None, selection=None):
    return System(n, 1, tuple((pos(i),) for i in range(1, n + 1)),
                  selection or Fixed(), schedule or Parallel())


# ------------------------------------------------------------------
# configurations and function evaluation

def test_config_string_round_trip():
    assert config_from_str("0101") == 0b1010
    assert config_to_str(config_from_str("0101"), 4) == "0101"
    with pytest.raises(StructureError):
        config_from_str("012")


def test_eval_basic_kinds():
    c = config_from_str("01")
    assert pos(2).evaluate(c) == 1
    assert neg(1).evaluate(c) == 1
    assert or_(1, 2, 3).evaluate(config_from_str("000")) == 0
    assert and_(1, 2).evaluate(config_from_str("11")) == 1
    assert const(1).evaluate(0) == 1
    # table index: first source is the least significant position
    xor = table((1, 2), (0, 1, 1, 0))
    assert [xor.evaluate(config_from_str(s)) for s in ("00", "01", "10", "11")] \
        == [0, 1, 1, 0]


def test_function_validation():
    with pytest.raises(StructureError):
        pos(3).validate(2)
    with pytest.raises(StructureError):
        or_().validate(2)
    with pytest.raises(StructureError):
        table((1, 2), (0, 1)).validate(2)
    with pytest.raises(StructureError):
        table(tuple(range(1, 10)), (0,) * 512).validate(12)  # fan-in over bound


def test_system_validation():
    with pytest.raises(StructureError):
        System(2, 1, ((pos(1),),), Fixed(), Parallel())  # grid too small
    with pytest.raises(StructureError):
        System(2, 1, ((pos(1),), (pos(3),)), Fixed(), Parallel())
    with pytest.raises(StructureError):
        swap_system(schedule=FixedPermutation((1, 1)))
    with pytest.raises(StructureError):
        swap_system(selection=SemiCoordinated(((1,),)))  # does not cover node 2


# ------------------------------------------------------------------
# step semantics

def test_parallel_swap():
    sys = swap_system()
    assert step_parallel(sys, config_from_str("01"), (1, 1)) == config_from_str("10")


def test_parallel_identity():
    sys = identity_system(3)
    for c in range(8):
        assert step_parallel(sys, c, (1, 1, 1)) == c


def test_parallel_all_or():
    sys = System(3, 1, tuple((or_(1, 2, 3),) for _ in range(3)), Fixed(), Parallel())
    assert step_parallel(sys, config_from_str("100"), (1,) * 3) == config_from_str("111")
    assert step_parallel(sys, 0, (1,) * 3) == 0


def test_sequential_order_matters():
    sys = swap_system(schedule=ArbitraryPermutation())
    c = config_from_str("01")
    assert step_sequential(sys, c, (1, 1), (1, 2)) == config_from_str("11")
    assert step_sequential(sys, c, (1, 1), (2, 1)) == config_from_str("00")


def test_async_plan_semantics():
    sys = swap_system(schedule=Asynchronous(), selection=Individual())
    c = config_from_str("01")
    assert step_async(sys, c, (1, 1), ()) == c
    assert step_async(sys, c, (1, 1), ((1, 2),)) == step_parallel(sys, c, (1, 1))
    assert step_async(sys, c, (1, 1), ((1,), (2,))) \
        == step_sequential(sys, c, (1, 1), (1, 2))
    with pytest.raises(StructureError):
        step_async(sys, c, (1, 1), ((1,), (1,)))


def test_selection_checks():
    sys = swap_system(selection=Coordinated())
    with pytest.raises(SelectionError):
        step_parallel(sys, 0, (1, 2))
    semi = System(3, 2, tuple((pos(i), neg(i)) for i in range(1, 4)),
                  SemiCoordinated(((1, 2), (3,))), Parallel())
    with pytest.raises(SelectionError):
        step_parallel(semi, 0, (1, 2, 1))
    assert step_parallel(semi, 0, (2, 2, 1)) == config_from_str("110")


# ------------------------------------------------------------------
# action enumeration

def test_action_counts():
    assert action_space_size(swap_system()) == 1
    ind = System(2, 2, ((pos(1), neg(1)), (pos(2), neg(2))),
                 Individual(), Parallel())
    assert action_space_size(ind) == 4
    arb = identity_system(3, schedule=ArbitraryPermutation())
    assert action_space_size(arb) == 6
    assert [async_plan_count(n) for n in range(5)] == [1, 2, 6, 26, 150]


def test_async_plans_distinct_and_complete():
    plans = list(iter_async_plans(3))
    assert len(plans) == len(set(plans)) == async_plan_count(3)
    for plan in plans:
        flat = [u for g in plan for u in g]
        assert len(flat) == len(set(flat))


def test_enumeration_cap():
    arb = identity_system(6, schedule=ArbitraryPermutation())
    with pytest.raises(EnumerationTooLargeError):
        list(enumerate_actions(arb, cap=100))


def test_successors_spec_examples():
    ident = identity_system(2)
    c = config_from_str("01")
    assert set(successors(ident, c)) == {c}
    sw = swap_system()
    assert set(successors(sw, c)) == {config_from_str("10")}
    arb = swap_system(schedule=ArbitraryPermutation())
    succ = successors(arb, c)
    assert set(succ) == {config_from_str("11"), config_from_str("00")}
    assert all(len(v) == 1 for v in succ.values())


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_successor_arcs_match_enumeration(data):
    rng = seeded_rng(data.draw(st.integers(0, 10 ** 6)))
    n = data.draw(st.integers(1, 4))
    k = data.draw(st.integers(1, 2))
    schedule = data.draw(st.sampled_from(
        ("parallel", "fixed-permutation", "permutation-list",
         "arbitrary-permutation", "asynchronous")))
    selection = data.draw(st.sampled_from(
        ("fixed", "coordinated", "individual", "semi-coordinated")))
    sys = random_system(rng, n, k, schedule, selection)
    if action_space_size(sys) > 1 << 13:
        return
    c = data.draw(st.integers(0, (1 << n) - 1))
    brute = successors(sys, c)
    arcs = successor_arcs(sys, c)
    assert set(brute) == set(arcs) == successor_set(sys, c)
    total = 0
    for d, (count, witness) in arcs.items():
        assert len(brute[d]) == count
        assert execute(sys, c, witness) == d
        total += count
    assert total == action_space_size(sys)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_async_identities(data):
    rng = seeded_rng(data.draw(st.integers(0, 10 ** 6)))
    n = data.draw(st.integers(1, 5))
    k = data.draw(st.integers(1, 2))
    sys = random_system(rng, n, k, "asynchronous", "individual")
    c = data.draw(st.integers(0, (1 << n) - 1))
    J = tuple(data.draw(st.integers(1, k)) for _ in range(n))
    pi = tuple(data.draw(st.permutations(range(1, n + 1))))
    assert step_async(sys, c, J, tuple((u,) for u in pi)) \
        == step_sequential(sys, c, J, pi)
    assert step_async(sys, c, J, (tuple(range(1, n + 1)),)) \
        == step_parallel(sys, c, J)


def test_fixed_parallel_is_deterministic():
    rng = seeded_rng(17)
    for _ in range(20):
        sys = random_system(rng, 4, 2, "parallel", "fixed")
        for c in range(16):
            assert len(successor_set(sys, c)) == 1


def test_coordinated_subset_of_individual():
    rng = seeded_rng(23)
    for _ in range(20):
        sys = random_system(rng, 4, 2, "parallel", "coordinated")
        ind = sys.with_selection(Individual())
        for c in range(16):
            assert successor_set(sys, c) <= successor_set(ind, c)
