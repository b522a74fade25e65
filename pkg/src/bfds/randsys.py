"""Seeded random system generation for cross-checking and experiments."""

from __future__ import annotations

import random

from .core import (ArbitraryPermutation, Asynchronous, Coordinated, Fixed,
                   FixedPermutation, Individual, Parallel, PermutationList,
                   SemiCoordinated, System, and_, const, neg, or_, pos, table)

FUNCTION_KINDS = ("pos", "neg", "or", "and", "table", "const")

SCHEDULE_NAMES = ("parallel", "fixed-permutation", "permutation-list",
                  "arbitrary-permutation", "asynchronous")

SELECTION_NAMES = ("fixed", "coordinated", "individual", "semi-coordinated")


def random_function(rng: random.Random, n: int, kinds=FUNCTION_KINDS,
                    max_fanin: int = 3):
    kind = rng.choice(kinds)
    if kind == "const":
        return const(rng.randint(0, 1))
    if kind == "pos":
        return pos(rng.randint(1, n))
    if kind == "neg":
        return neg(rng.randint(1, n))
    width = rng.randint(1, min(max_fanin, n))
    srcs = sorted(rng.sample(range(1, n + 1), width))
    if kind == "or":
        return or_(*srcs)
    if kind == "and":
        return and_(*srcs)
    return table(srcs, [rng.randint(0, 1) for _ in range(1 << width)])


def random_permutation(rng: random.Random, n: int) -> tuple:
    order = list(range(1, n + 1))
    rng.shuffle(order)
    return tuple(order)


def random_selection(rng: random.Random, n: int, name: str):
    if name == "fixed":
        return Fixed()
    if name == "coordinated":
        return Coordinated()
    if name == "individual":
        return Individual()
    nodes = list(range(1, n + 1))
    rng.shuffle(nodes)
    blocks = []
    while nodes:
        size = rng.randint(1, len(nodes))
        blocks.append(tuple(sorted(nodes[:size])))
        nodes = nodes[size:]
    return SemiCoordinated(tuple(blocks))


def random_schedule(rng: random.Random, n: int, name: str, max_list: int = 2):
    if name == "parallel":
        return Parallel()
    if name == "fixed-permutation":
        return FixedPermutation(random_permutation(rng, n))
    if name == "permutation-list":
        count = rng.randint(1, max_list)
        return PermutationList(tuple(random_permutation(rng, n)
                                     for _ in range(count)))
    if name == "arbitrary-permutation":
        return ArbitraryPermutation()
    return Asynchronous()


def random_system(rng: random.Random, n: int, k: int,
                  schedule: str = "parallel", selection: str = "fixed",
                  kinds=FUNCTION_KINDS, max_fanin: int = 3) -> System:
    grid = tuple(tuple(random_function(rng, n, kinds, max_fanin)
                       for _ in range(k))
                 for _ in range(n))
    return System(n, k, grid,
                  random_selection(rng, n, selection),
                  random_schedule(rng, n, schedule))


def random_unary_system(rng: random.Random, n: int, k: int,
                        schedule: str = "parallel", selection: str = "fixed",
                        positive_only: bool = False,
                        allow_self_negation: bool = True) -> System:
    def unary():
        s = rng.randint(1, n)
        if positive_only or rng.random() < 0.5:
            return pos(s)
        f = neg(s)
        return f

    grid = []
    for i in range(1, n + 1):
        row = []
        for _ in range(k):
            f = unary()
            while not allow_self_negation and f.kind == "neg" and f.srcs == (i,):
                f = unary()
            row.append(f)
        grid.append(tuple(row))
    return System(n, k, tuple(grid),
                  random_selection(rng, n, selection),
                  random_schedule(rng, n, schedule))
