"""Robust reachability and permutation-existence solvers.

Robustness is the adversarial game: for every permissible update sequence
there must exist a function selection that keeps the system on course.
The one-step test runs in polynomial time for bounded-fan-in functions
plus unbounded OR/AND; everything else falls back to explicit alternation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from heapq import heapify, heappop, heappush

from .core import (AND, CONST, NEG, OR, POS, TABLE, ArbitraryPermutation,
                   Coordinated, Fixed, Individual, ModelMismatchError,
                   PermutationList, ResourceBudgetError, System,
                   iter_selections, step_sequential,
                   _sequential_individual_set)


def _permissible_sequences(sys: System):
    sch = sys.schedule
    if isinstance(sch, ArbitraryPermutation):
        return itertools.permutations(range(1, sys.n + 1))
    if isinstance(sch, PermutationList):
        return iter(sch.pis)
    raise ModelMismatchError(
        "robustness needs an arbitrary-permutation or permutation-list schedule")


def _sequence_successors(sys: System, c: int, pi) -> set:
    if isinstance(sys.selection, Individual):
        return _sequential_individual_set(sys, c, pi, 1 << 22)
    return {step_sequential(sys, c, J, pi) for J in iter_selections(sys)}


def robust_reach_bruteforce(sys: System, c: int, d: int, t: int,
                            budget: int = 1 << 22) -> bool:
    """Explicit alternation: forall sequence, exists selection, recurse.

    t = 0 demands c == d.
    """
    memo: dict = {}
    spent = [0]

    def rec(state: int, steps: int) -> bool:
        if steps == 0:
            return state == d
        key = (state, steps)
        hit = memo.get(key)
        if hit is not None:
            return hit
        spent[0] += 1
        if spent[0] > budget:
            raise ResourceBudgetError(f"robustness budget {budget} exceeded")
        ok = True
        for pi in _permissible_sequences(sys):
            if not any(rec(nxt, steps - 1)
                       for nxt in _sequence_successors(sys, state, pi)):
                ok = False
                break
        memo[key] = ok
        return ok

    return rec(c, t)


# ------------------------------------------------------------------
# polynomial one-step robustness test

def one_step_failure_pairs(sys: System, c: int, d: int) -> dict:
    """Per node z, the witness family W_z of (before, after) variable pairs.

    A pair (S, T) means: any sequence updating S before z and T after z
    derails node z (or an earlier node) whatever functions are selected.
    The transition is robust iff every W_z is empty.
    """
    if not isinstance(sys.schedule, ArbitraryPermutation):
        raise ModelMismatchError("the fast test needs the arbitrary-permutation schedule")
    if not isinstance(sys.selection, (Individual, Fixed)):
        raise ModelMismatchError("the fast test needs individual function selection")
    n = sys.n
    changed = [s for s in range(1, n + 1) if ((c ^ d) >> (s - 1)) & 1]
    out = {}
    for z in range(1, n + 1):
        beta = (d >> (z - 1)) & 1
        gens_per_choice = []
        safe = False
        for f in sys.functions[z - 1]:
            gens = _choice_generators(f, z, c, d, beta)
            if gens == "safe":
                safe = True
                break
            if gens == "drop":
                continue
            gens_per_choice.append(gens)
        if safe:
            out[z] = []
            continue
        pairs = []
        for combo in itertools.product(*gens_per_choice):
            s_all = frozenset().union(*(s for s, _ in combo)) if combo else frozenset()
            t_all = frozenset().union(*(t for _, t in combo)) if combo else frozenset()
            if not (s_all & t_all):
                pairs.append((s_all, t_all))
        out[z] = pairs
    return out


def _choice_generators(f, z: int, c: int, d: int, beta: int):
    """Generator pairs for one candidate function, or "safe"/"drop".

    "safe": the choice produces the target bit whatever the order, so the
    node can never be the first failure.  "drop": the choice can never
    produce the target bit.
    """
    volatile = sorted({s for s in f.srcs
                       if s != z and ((c ^ d) >> (s - 1)) & 1})
    if f.kind in (OR, AND):
        neutral = 0 if f.kind == OR else 1
        fixed_vals = [(c >> (s - 1)) & 1 for s in f.srcs
                      if s == z or not ((c ^ d) >> (s - 1)) & 1]
        decided = any(v != neutral for v in fixed_vals)
        forced = 1 - neutral if decided else None
        if decided:
            return "safe" if forced == beta else "drop"
        if not volatile:
            return "safe" if neutral == beta else "drop"
        ones = frozenset(s for s in volatile if (c >> (s - 1)) & 1)
        zeros = frozenset(s for s in volatile if not (c >> (s - 1)) & 1)
        if f.kind == OR:
            if beta == 1:
                # fails only when every input reads 0: the 1-to-0 sources
                # already updated, the 0-to-1 sources not yet
                return [(ones, zeros)]
            return ([(frozenset(), frozenset((s,))) for s in sorted(ones)]
                    + [(frozenset((t,)), frozenset()) for t in sorted(zeros)])
        if beta == 0:
            # AND fails to 1 only when every input reads 1
            return [(zeros, ones)]
        return ([(frozenset(), frozenset((s,))) for s in sorted(zeros)]
                + [(frozenset((t,)), frozenset()) for t in sorted(ones)])
    if f.kind in (POS, NEG, CONST, TABLE):
        gens = []
        hits = 0
        total = 0
        for bits in itertools.product((0, 1), repeat=len(volatile)):
            total += 1
            state = c
            before = []
            after = []
            for s, use_d in zip(volatile, bits):
                if use_d:
                    before.append(s)
                    bit = 1 << (s - 1)
                    state = (state | bit) if (d >> (s - 1)) & 1 else (state & ~bit)
                else:
                    after.append(s)
            if f.evaluate(state) == beta:
                hits += 1
            else:
                gens.append((frozenset(before), frozenset(after)))
        if hits == total:
            return "safe"
        if hits == 0:
            return "drop"
        return gens
    raise ModelMismatchError(f"unsupported function kind {f.kind}")


def robust_one_step_fast(sys: System, c: int, d: int) -> bool:
    """Polynomial one-step robustness for bounded fan-in plus OR/AND."""
    pairs = one_step_failure_pairs(sys, c, d)
    return all(not w for w in pairs.values())


def robust_one_step(sys: System, c: int, d: int) -> bool:
    """Dispatcher: fast test when the model allows it, else brute force."""
    try:
        return robust_one_step_fast(sys, c, d)
    except ModelMismatchError:
        return robust_reach_bruteforce(sys, c, d, 1)


# ------------------------------------------------------------------
# permutation existence: one-choice unary systems

def _topological_witness(n: int, edges: set):
    """Smallest-index-first topological order, or None on a cycle."""
    adjacency = {u: set() for u in range(1, n + 1)}
    indeg = {u: 0 for u in range(1, n + 1)}
    for u, v in edges:
        if v not in adjacency[u]:
            adjacency[u].add(v)
            indeg[v] += 1
    heap = [u for u in range(1, n + 1) if indeg[u] == 0]
    heapify(heap)
    order = []
    while heap:
        u = heappop(heap)
        order.append(u)
        for v in sorted(adjacency[u]):
            indeg[v] -= 1
            if indeg[v] == 0:
                heappush(heap, v)
    return tuple(order) if len(order) == n else None


def perm_exists_1choice_unary(sys: System, c: int, d: int):
    """Ordering-constraint analysis; returns a witness permutation or None.

    Each node yields either an impossibility, no constraint, or one
    before/after requirement; a permutation exists iff the requirement
    digraph is acyclic.
    """
    if sys.k != 1:
        raise ModelMismatchError("need a 1-choice system")
    if not isinstance(sys.schedule, ArbitraryPermutation):
        raise ModelMismatchError("need the arbitrary-permutation schedule")
    n = sys.n
    edges = set()
    for i in range(1, n + 1):
        f = sys.function(i, 1)
        if f.kind not in (POS, NEG):
            raise ModelMismatchError(f"node {i} is {f.kind}, need unary functions")
        j = f.srcs[0]
        ci = (c >> (i - 1)) & 1
        di = (d >> (i - 1)) & 1
        cj = (c >> (j - 1)) & 1
        dj = (d >> (j - 1)) & 1
        produces = (lambda v: v) if f.kind == POS else (lambda v: 1 - v)
        if i == j:
            if produces(ci) != di:
                return None
            continue
        if cj == dj:
            if produces(cj) != di:
                return None
            continue
        if produces(dj) == di:
            edges.add((j, i))   # read the updated source
        else:
            edges.add((i, j))   # read the source before it changes
    pi = _topological_witness(n, edges)
    if pi is None:
        return None
    assert step_sequential(sys, c, (1,) * n, pi) == d
    return pi


def perm_exists_coordinated(sys: System, c: int, d: int):
    """Try each column as a 1-choice system; return (permutation, column)."""
    if not isinstance(sys.selection, (Coordinated, Fixed)):
        raise ModelMismatchError("need coordinated (or fixed) selection")
    if not isinstance(sys.schedule, ArbitraryPermutation):
        raise ModelMismatchError("need the arbitrary-permutation schedule")
    for j in range(1, sys.k + 1):
        column = System(sys.n, 1,
                        tuple((row[j - 1],) for row in sys.functions),
                        Fixed(), ArbitraryPermutation())
        pi = perm_exists_1choice_unary(column, c, d)
        if pi is not None:
            return pi, j
    return None


def perm_exists_bruteforce(sys: System, c: int, d: int):
    """Oracle: try all n! sequences with greedy per-position selection.

    Greedy is exact for individual (and one-choice) selection because the
    state at every position is forced by the target.
    """
    n, k = sys.n, sys.k
    coordinated = isinstance(sys.selection, Coordinated)
    fixed = isinstance(sys.selection, Fixed)
    for pi in itertools.permutations(range(1, n + 1)):
        if coordinated or fixed:
            for j in range(1, 2 if fixed else k + 1):
                if step_sequential(sys, c, (j,) * n, pi) == d:
                    return pi, (j,) * n
            continue
        state = c
        J = [1] * n
        ok = True
        for u in pi:
            want = (d >> (u - 1)) & 1
            for j in range(1, k + 1):
                if sys.functions[u - 1][j - 1].evaluate(state) == want:
                    J[u - 1] = j
                    break
            else:
                ok = False
                break
            bit = 1 << (u - 1)
            state = (state | bit) if want else (state & ~bit)
        if ok:
            return pi, tuple(J)
    return None


# ------------------------------------------------------------------
# permutation existence: individual selection over positive-unary systems

@dataclass(frozen=True)
class LabeledArc:
    src: int
    dst: int
    label: int


def perm_exists_individual_search(sys: System, c: int, d: int,
                                  budget: int = 1 << 16):
    """Constraint-digraph search for positive-unary individual systems.

    After pruning always-satisfiable nodes, the residue asks for one arc
    per surviving label such that the chosen arcs induce no cycle; the
    stratification of an acyclic choice yields the witness permutation.
    Worst-case exponential in the residue size, hence budget-capped.
    """
    if not isinstance(sys.selection, Individual):
        raise ModelMismatchError("need individual selection")
    if not isinstance(sys.schedule, ArbitraryPermutation):
        raise ModelMismatchError("need the arbitrary-permutation schedule")
    n = sys.n
    for row in sys.functions:
        for f in row:
            if f.kind != POS:
                raise ModelMismatchError("need positive-unary functions only")

    bit = lambda cfg, u: (cfg >> (u - 1)) & 1
    volatile = {u for u in range(1, n + 1) if bit(c, u) != bit(d, u)}
    chosen: dict = {}

    pre_block: list = []
    post_block: list = []
    anywhere: list = []
    residue: list = []
    for i in range(1, n + 1):
        srcs = [f.srcs[0] for f in sys.functions[i - 1]]
        stable_match = next((l for l in srcs
                             if l not in volatile and bit(c, l) == bit(d, i)), None)
        if stable_match is not None:
            # satisfiable at any position; volatile ones are already part
            # of the stratified block
            chosen[i] = srcs.index(stable_match) + 1
            if i not in volatile:
                anywhere.append(i)
            continue
        usable = [l for l in srcs if l in volatile and l != i]
        if not usable:
            return None
        if i not in volatile:
            l = usable[0]
            chosen[i] = srcs.index(l) + 1
            if bit(d, i) == bit(c, l):
                pre_block.append(i)
            else:
                post_block.append(i)
        else:
            residue.append((i, srcs, usable))

    arcs_by_label: dict = {}
    for i, srcs, usable in residue:
        arcs = []
        for l in usable:
            choice = srcs.index(l) + 1
            if bit(d, i) == bit(c, l):
                arcs.append((LabeledArc(i, l, i), choice))
            else:
                arcs.append((LabeledArc(l, i, i), choice))
        arcs_by_label[i] = arcs

    digraph_nodes = sorted(volatile)
    labels = sorted(arcs_by_label)
    spent = [0]

    def has_cycle(adjacency) -> bool:
        seen: dict = {}

        def visit(u: int) -> bool:
            seen[u] = 1
            for v in adjacency.get(u, ()):
                state = seen.get(v)
                if state == 1:
                    return True
                if state is None and visit(v):
                    return True
            seen[u] = 2
            return False

        return any(seen.get(u) is None and visit(u) for u in adjacency)

    def search(idx: int, selected: list):
        spent[0] += 1
        if spent[0] > budget:
            raise ResourceBudgetError(f"arc-selection budget {budget} exceeded")
        if idx == len(labels):
            return list(selected)
        for arc, choice in arcs_by_label[labels[idx]]:
            selected.append((arc, choice))
            adjacency: dict = {}
            for a, _ in selected:
                adjacency.setdefault(a.src, []).append(a.dst)
            if not has_cycle(adjacency):
                hit = search(idx + 1, selected)
                if hit is not None:
                    return hit
            selected.pop()
        return None

    selected = search(0, [])
    if selected is None:
        return None

    for arc, choice in selected:
        chosen[arc.label] = choice
    arc_edges = {(a.src, a.dst) for a, _ in selected}
    sub_index = {u: p for p, u in enumerate(digraph_nodes, start=1)}
    topo_local = _topological_witness(
        len(digraph_nodes),
        {(sub_index[u], sub_index[v]) for u, v in arc_edges})
    assert topo_local is not None
    topo = [digraph_nodes[p - 1] for p in topo_local]

    pi = tuple(sorted(pre_block) + topo + sorted(post_block) + sorted(anywhere))
    J = tuple(chosen.get(i, 1) for i in range(1, n + 1))
    assert step_sequential(sys, c, J, pi) == d
    return pi, J
