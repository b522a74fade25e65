"""Multi-choice Boolean network systems and their exact one-step semantics.

An (n, k) system has n Boolean nodes, each with k candidate update
functions.  A step resolves two kinds of uncertainty: which function each
node uses (the selection scheme) and when nodes fire (the update
schedule).  Configurations are bit-packed ints: node i lives at bit i-1,
and node 1 is the leftmost character in the string form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterator, Optional


class BfdsError(Exception):
    """Base class for all library errors."""


class StructureError(BfdsError):
    """A type invariant is violated (bad index, malformed grid, ...)."""


class SelectionError(BfdsError):
    """A function selection is not permissible for the system."""


class ModelMismatchError(BfdsError):
    """An operation was applied to a system outside its input model."""


class EnumerationTooLargeError(BfdsError):
    """The action space exceeds the caller-supplied cap."""


class ResourceBudgetError(BfdsError):
    """An exact search exceeded its node/state budget."""


# ------------------------------------------------------------------
# configurations

def config_from_str(s: str) -> int:
    if not s or any(ch not in "01" for ch in s):
        raise StructureError(f"configuration string must be nonempty over 0/1, got {s!r}")
    return int(s[::-1], 2)


def config_to_str(c: int, n: int) -> str:
    return format(c, f"0{n}b")[::-1]


def config_from_bits(bits) -> int:
    c = 0
    for i, b in enumerate(bits):
        if b not in (0, 1):
            raise StructureError("configuration bits must be 0/1")
        c |= b << i
    return c


def config_bits(c: int, n: int) -> tuple:
    return tuple((c >> i) & 1 for i in range(n))


def get_bit(c: int, node: int) -> int:
    return (c >> (node - 1)) & 1


def all_configs(n: int) -> range:
    return range(1 << n)


# ------------------------------------------------------------------
# node functions

CONST, POS, NEG, OR, AND, TABLE = "const", "pos", "neg", "or", "and", "table"

DEFAULT_TABLE_FANIN = 8


@dataclass(frozen=True)
class NodeFunction:
    """One candidate update function; reads `srcs` (1-based node indices)."""

    kind: str
    srcs: tuple = ()
    table: tuple = ()
    bit: int = 0

    def validate(self, n: int, fanin_bound: int = DEFAULT_TABLE_FANIN) -> None:
        if self.kind not in (CONST, POS, NEG, OR, AND, TABLE):
            raise StructureError(f"unknown function kind {self.kind!r}")
        for s in self.srcs:
            if not 1 <= s <= n:
                raise StructureError(f"source index {s} outside [1, {n}]")
        if self.kind == CONST:
            if self.bit not in (0, 1) or self.srcs:
                raise StructureError("const takes a single 0/1 output and no sources")
        elif self.kind in (POS, NEG):
            if len(self.srcs) != 1:
                raise StructureError(f"{self.kind} is unary, got {len(self.srcs)} sources")
        elif self.kind in (OR, AND):
            if not self.srcs:
                raise StructureError(f"{self.kind} needs a nonempty source list")
        else:
            q = len(self.srcs)
            if q > fanin_bound:
                raise StructureError(f"table fan-in {q} exceeds bound {fanin_bound}")
            if len(self.table) != (1 << q):
                raise StructureError(f"table needs {1 << q} output bits, got {len(self.table)}")
            if any(b not in (0, 1) for b in self.table):
                raise StructureError("table outputs must be 0/1")

    def evaluate(self, c: int) -> int:
        kind = self.kind
        if kind == POS:
            return (c >> (self.srcs[0] - 1)) & 1
        if kind == NEG:
            return 1 - ((c >> (self.srcs[0] - 1)) & 1)
        if kind == OR:
            for s in self.srcs:
                if (c >> (s - 1)) & 1:
                    return 1
            return 0
        if kind == AND:
            for s in self.srcs:
                if not (c >> (s - 1)) & 1:
                    return 0
            return 1
        if kind == CONST:
            return self.bit
        idx = 0
        for r, s in enumerate(self.srcs):
            idx |= ((c >> (s - 1)) & 1) << r
        return self.table[idx]

    def remap(self, mapping) -> "NodeFunction":
        """Same function with every source pushed through `mapping`."""
        return NodeFunction(self.kind, tuple(mapping[s] for s in self.srcs),
                            self.table, self.bit)

    def is_identity_on(self, node: int) -> bool:
        """True when the function always equals node's own current value."""
        if self.srcs != (node,):
            return False
        if self.kind == POS:
            return True
        if self.kind == OR or self.kind == AND:
            return True
        if self.kind == TABLE:
            return self.table == (0, 1)
        return False


def const(bit: int) -> NodeFunction:
    return NodeFunction(CONST, (), (), bit)


def pos(src: int) -> NodeFunction:
    return NodeFunction(POS, (src,))


def neg(src: int) -> NodeFunction:
    return NodeFunction(NEG, (src,))


def or_(*srcs: int) -> NodeFunction:
    return NodeFunction(OR, tuple(srcs))


def and_(*srcs: int) -> NodeFunction:
    return NodeFunction(AND, tuple(srcs))


def table(srcs, outputs) -> NodeFunction:
    return NodeFunction(TABLE, tuple(srcs), tuple(outputs))


# ------------------------------------------------------------------
# selection schemes and update schedules

@dataclass(frozen=True)
class Fixed:
    pass


@dataclass(frozen=True)
class Coordinated:
    pass


@dataclass(frozen=True)
class Individual:
    pass


@dataclass(frozen=True)
class SemiCoordinated:
    blocks: tuple  # tuple of tuples of node indices

    def validate(self, n: int) -> None:
        seen = set()
        for block in self.blocks:
            if not block:
                raise StructureError("semi-coordinated blocks must be nonempty")
            for i in block:
                if not 1 <= i <= n:
                    raise StructureError(f"block index {i} outside [1, {n}]")
                if i in seen:
                    raise StructureError(f"node {i} appears in two blocks")
                seen.add(i)
        if len(seen) != n:
            raise StructureError("semi-coordinated blocks must cover every node")


@dataclass(frozen=True)
class Parallel:
    pass


@dataclass(frozen=True)
class FixedPermutation:
    pi: tuple


@dataclass(frozen=True)
class PermutationList:
    pis: tuple  # tuple of permutations, length >= 1


@dataclass(frozen=True)
class ArbitraryPermutation:
    pass


@dataclass(frozen=True)
class Asynchronous:
    pass


def check_permutation(pi, n: int) -> None:
    if sorted(pi) != list(range(1, n + 1)):
        raise StructureError(f"{pi} is not a permutation of [1, {n}]")


@dataclass(frozen=True)
class System:
    """An (n, k) multi-choice system: functions[i-1][j-1] = f_{i,j}."""

    n: int
    k: int
    functions: tuple  # n rows of k NodeFunctions
    selection: object
    schedule: object
    table_fanin_bound: int = DEFAULT_TABLE_FANIN

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise StructureError("need n >= 1 and k >= 1")
        if len(self.functions) != self.n or any(len(row) != self.k for row in self.functions):
            raise StructureError(f"function grid must be {self.n} x {self.k}")
        for row in self.functions:
            for f in row:
                f.validate(self.n, self.table_fanin_bound)
        sel, sch = self.selection, self.schedule
        if isinstance(sel, SemiCoordinated):
            sel.validate(self.n)
        elif not isinstance(sel, (Fixed, Coordinated, Individual)):
            raise StructureError(f"unknown selection scheme {sel!r}")
        if isinstance(sch, FixedPermutation):
            check_permutation(sch.pi, self.n)
        elif isinstance(sch, PermutationList):
            if not sch.pis:
                raise StructureError("permutation list must be nonempty")
            for pi in sch.pis:
                check_permutation(pi, self.n)
        elif not isinstance(sch, (Parallel, ArbitraryPermutation, Asynchronous)):
            raise StructureError(f"unknown update schedule {sch!r}")

    def function(self, i: int, j: int) -> NodeFunction:
        return self.functions[i - 1][j - 1]

    def with_schedule(self, schedule) -> "System":
        return System(self.n, self.k, self.functions, self.selection, schedule,
                      self.table_fanin_bound)

    def with_selection(self, selection) -> "System":
        return System(self.n, self.k, self.functions, selection, self.schedule,
                      self.table_fanin_bound)


# ------------------------------------------------------------------
# one-step semantics

def check_selection(sys: System, J) -> None:
    if len(J) != sys.n or any(not 1 <= j <= sys.k for j in J):
        raise SelectionError(f"selection {J} is not in [1, {sys.k}]^{sys.n}")
    sel = sys.selection
    if isinstance(sel, Fixed):
        if any(j != 1 for j in J):
            raise SelectionError("fixed selection must be the all-ones sequence")
    elif isinstance(sel, Coordinated):
        if len(set(J)) > 1:
            raise SelectionError("coordinated selection must use one shared index")
    elif isinstance(sel, SemiCoordinated):
        for block in sel.blocks:
            if len({J[i - 1] for i in block}) > 1:
                raise SelectionError(f"selection not constant on block {block}")


def step_parallel(sys: System, c: int, J) -> int:
    check_selection(sys, J)
    rows = sys.functions
    out = 0
    for i in range(sys.n):
        if rows[i][J[i] - 1].evaluate(c):
            out |= 1 << i
    return out


def step_sequential(sys: System, c: int, J, pi) -> int:
    check_selection(sys, J)
    rows = sys.functions
    state = c
    for u in pi:
        bit = 1 << (u - 1)
        if rows[u - 1][J[u - 1] - 1].evaluate(state):
            state |= bit
        else:
            state &= ~bit
    return state


def step_async(sys: System, c: int, J, plan) -> int:
    """Groups fire in sequence; within a group nodes fire concurrently.

    Nodes outside the plan keep their state.  Groups must be pairwise
    disjoint.
    """
    check_selection(sys, J)
    rows = sys.functions
    seen = set()
    for group in plan:
        if not group:
            raise StructureError("async plan groups must be nonempty")
        for u in group:
            if u in seen:
                raise StructureError(f"node {u} appears in two plan groups")
            seen.add(u)
    state = c
    for group in plan:
        entry = state
        for u in group:
            bit = 1 << (u - 1)
            if rows[u - 1][J[u - 1] - 1].evaluate(entry):
                state |= bit
            else:
                state &= ~bit
    return state


# ------------------------------------------------------------------
# actions: a fully resolved step choice

@dataclass(frozen=True)
class ParallelStep:
    pass


@dataclass(frozen=True)
class SequentialStep:
    pi: tuple


@dataclass(frozen=True)
class AsyncStep:
    plan: tuple  # ordered tuple of tuples (disjoint, nonempty groups)


@dataclass(frozen=True)
class Action:
    selection: tuple
    realization: object


def execute(sys: System, c: int, action: Action) -> int:
    r = action.realization
    if isinstance(r, ParallelStep):
        return step_parallel(sys, c, action.selection)
    if isinstance(r, SequentialStep):
        return step_sequential(sys, c, action.selection, r.pi)
    return step_async(sys, c, action.selection, r.plan)


def _fubini(r: int) -> int:
    # number of ordered set partitions of an r-set
    a = [1] * (r + 1)
    for m in range(1, r + 1):
        a[m] = sum(math.comb(m, i) * a[m - i] for i in range(1, m + 1))
    return a[r]


def async_plan_count(n: int) -> int:
    return sum(math.comb(n, r) * _fubini(r) for r in range(n + 1))


def selection_count(sys: System) -> int:
    sel = sys.selection
    if isinstance(sel, Fixed):
        return 1
    if isinstance(sel, Coordinated):
        return sys.k
    if isinstance(sel, Individual):
        return sys.k ** sys.n
    return sys.k ** len(sel.blocks)


def realization_count(sys: System) -> int:
    sch = sys.schedule
    if isinstance(sch, (Parallel, FixedPermutation)):
        return 1
    if isinstance(sch, PermutationList):
        return len(sch.pis)
    if isinstance(sch, ArbitraryPermutation):
        return math.factorial(sys.n)
    return async_plan_count(sys.n)


def action_space_size(sys: System) -> int:
    return selection_count(sys) * realization_count(sys)


def iter_selections(sys: System) -> Iterator[tuple]:
    sel = sys.selection
    n, k = sys.n, sys.k
    if isinstance(sel, Fixed):
        yield (1,) * n
    elif isinstance(sel, Coordinated):
        for j in range(1, k + 1):
            yield (j,) * n
    elif isinstance(sel, Individual):
        for J in itertools.product(range(1, k + 1), repeat=n):
            yield J
    else:
        blocks = sel.blocks
        for choice in itertools.product(range(1, k + 1), repeat=len(blocks)):
            J = [0] * n
            for block, j in zip(blocks, choice):
                for i in block:
                    J[i - 1] = j
            yield tuple(J)


def _ordered_partitions(items: tuple) -> Iterator[tuple]:
    # all ways to split `items` into an ordered sequence of disjoint
    # nonempty groups; groups are emitted sorted internally
    if not items:
        yield ()
        return
    for r in range(1, len(items) + 1):
        for first in itertools.combinations(items, r):
            taken = set(first)
            remaining = tuple(x for x in items if x not in taken)
            for tail in _ordered_partitions(remaining):
                yield (first,) + tail


def iter_async_plans(n: int) -> Iterator[tuple]:
    """Every ordered-disjoint-group plan over [n], the empty plan first."""
    nodes = tuple(range(1, n + 1))
    yield ()
    for r in range(1, n + 1):
        for subset in itertools.combinations(nodes, r):
            yield from _ordered_partitions(subset)


def iter_realizations(sys: System) -> Iterator[object]:
    sch = sys.schedule
    if isinstance(sch, Parallel):
        yield ParallelStep()
    elif isinstance(sch, FixedPermutation):
        yield SequentialStep(sch.pi)
    elif isinstance(sch, PermutationList):
        for pi in sch.pis:
            yield SequentialStep(pi)
    elif isinstance(sch, ArbitraryPermutation):
        for pi in itertools.permutations(range(1, sys.n + 1)):
            yield SequentialStep(pi)
    else:
        for plan in iter_async_plans(sys.n):
            yield AsyncStep(plan)


DEFAULT_ACTION_CAP = 1 << 20


def enumerate_actions(sys: System, cap: int = DEFAULT_ACTION_CAP) -> Iterator[Action]:
    """Yield every permissible action exactly once (selection x realization).

    Raises EnumerationTooLargeError up front when the space exceeds `cap`.
    """
    total = action_space_size(sys)
    if total > cap:
        raise EnumerationTooLargeError(
            f"action space has {total} actions, cap is {cap}")
    for realization in iter_realizations(sys):
        for J in iter_selections(sys):
            yield Action(J, realization)


def successors(sys: System, c: int, cap: int = DEFAULT_ACTION_CAP) -> dict:
    """Map each one-step image of c to the full list of actions achieving it."""
    out: dict = {}
    for action in enumerate_actions(sys, cap):
        d = execute(sys, c, action)
        out.setdefault(d, []).append(action)
    return out


# ------------------------------------------------------------------
# efficient successor machinery (no selection enumeration for the
# individual scheme; used by graph construction and the solvers)

def _node_value_choices(sys: System, state: int, i: int):
    """Distinct next values of node i with their choice multiplicity."""
    counts = {}
    for f in sys.functions[i - 1]:
        v = f.evaluate(state)
        counts[v] = counts.get(v, 0) + 1
    return counts


def _parallel_individual_arcs(sys: System, c: int, state_cap: int) -> dict:
    partial = {0: 1}
    for i in range(1, sys.n + 1):
        counts = _node_value_choices(sys, c, i)
        nxt = {}
        shift = i - 1
        for prefix, cnt in partial.items():
            for v, m in counts.items():
                nxt[prefix | (v << shift)] = nxt.get(prefix | (v << shift), 0) + cnt * m
        if len(nxt) > state_cap:
            raise EnumerationTooLargeError(
                f"successor set exceeds cap {state_cap}")
        partial = nxt
    return partial


def _sequential_individual_arcs(sys: System, c: int, pi, state_cap: int) -> dict:
    partial = {c: 1}
    for u in pi:
        nxt = {}
        bit = 1 << (u - 1)
        for state, cnt in partial.items():
            counts = _node_value_choices(sys, state, u)
            for v, m in counts.items():
                s2 = (state | bit) if v else (state & ~bit)
                nxt[s2] = nxt.get(s2, 0) + cnt * m
        if len(nxt) > state_cap:
            raise EnumerationTooLargeError(
                f"successor set exceeds cap {state_cap}")
        partial = nxt
    return partial


def _async_plan_individual_arcs(sys: System, c: int, plan, state_cap: int) -> dict:
    touched = sum(len(g) for g in plan)
    free = sys.k ** (sys.n - touched)
    partial = {c: 1}
    for group in plan:
        nxt = {}
        for state, cnt in partial.items():
            # concurrent sub-step: every member reads the group's entry state
            grown = {state: cnt}
            for u in group:
                counts = _node_value_choices(sys, state, u)
                bit = 1 << (u - 1)
                step = {}
                for s2, c2 in grown.items():
                    for v, m in counts.items():
                        s3 = (s2 | bit) if v else (s2 & ~bit)
                        step[s3] = step.get(s3, 0) + c2 * m
                grown = step
            for s2, c2 in grown.items():
                nxt[s2] = nxt.get(s2, 0) + c2
        if len(nxt) > state_cap:
            raise EnumerationTooLargeError(
                f"successor set exceeds cap {state_cap}")
        partial = nxt
    return {d: cnt * free for d, cnt in partial.items()}


def _merge_arcs(total: dict, part: dict, witness_maker) -> None:
    for d, cnt in part.items():
        if d in total:
            total[d] = (total[d][0] + cnt, total[d][1])
        else:
            total[d] = (cnt, witness_maker(d))


def _individual_witness(sys: System, c: int, d: int, realization) -> Action:
    """Reconstruct one selection producing d under the given realization."""
    n = sys.n
    J = [0] * n

    def choose(state: int, u: int) -> None:
        want = (d >> (u - 1)) & 1
        for j in range(1, sys.k + 1):
            if sys.functions[u - 1][j - 1].evaluate(state) == want:
                J[u - 1] = j
                return
        raise BfdsError("witness reconstruction failed")  # pragma: no cover

    if isinstance(realization, ParallelStep):
        for u in range(1, n + 1):
            choose(c, u)
    elif isinstance(realization, SequentialStep):
        state = c
        for u in realization.pi:
            choose(state, u)
            bit = 1 << (u - 1)
            state = (state | bit) if (d >> (u - 1)) & 1 else (state & ~bit)
    else:
        state = c
        for group in realization.plan:
            entry = state
            for u in group:
                choose(entry, u)
                bit = 1 << (u - 1)
                state = (state | bit) if (d >> (u - 1)) & 1 else (state & ~bit)
        for u in range(1, n + 1):
            if J[u - 1] == 0:
                J[u - 1] = 1
    return Action(tuple(J), realization)


DEFAULT_STATE_CAP = 1 << 22


def successor_arcs(sys: System, c: int, state_cap: int = DEFAULT_STATE_CAP,
                   realization_cap: int = DEFAULT_ACTION_CAP) -> dict:
    """Map each one-step image of c to (action count, one witness action).

    Equivalent to aggregating `successors`, but the individual selection
    scheme is counted with per-node products instead of k^n enumeration.
    """
    if realization_count(sys) > realization_cap:
        raise EnumerationTooLargeError(
            f"{realization_count(sys)} realizations exceed cap {realization_cap}")
    total: dict = {}
    individual = isinstance(sys.selection, Individual)
    for realization in iter_realizations(sys):
        if individual:
            if isinstance(realization, ParallelStep):
                part = _parallel_individual_arcs(sys, c, state_cap)
            elif isinstance(realization, SequentialStep):
                part = _sequential_individual_arcs(sys, c, realization.pi, state_cap)
            else:
                part = _async_plan_individual_arcs(sys, c, realization.plan, state_cap)
            _merge_arcs(total, part,
                        lambda d, r=realization: _individual_witness(sys, c, d, r))
        else:
            for J in iter_selections(sys):
                d = execute(sys, c, Action(J, realization))
                if d in total:
                    total[d] = (total[d][0] + 1, total[d][1])
                else:
                    total[d] = (1, Action(J, realization))
        if len(total) > state_cap:
            raise EnumerationTooLargeError(f"successor set exceeds cap {state_cap}")
    return total


def successor_set(sys: System, c: int, state_cap: int = DEFAULT_STATE_CAP,
                  realization_cap: int = DEFAULT_ACTION_CAP) -> set:
    """The set of one-step images of c (no labels; fastest route)."""
    if realization_count(sys) > realization_cap:
        raise EnumerationTooLargeError(
            f"{realization_count(sys)} realizations exceed cap {realization_cap}")
    out: set = set()
    individual = isinstance(sys.selection, Individual)
    for realization in iter_realizations(sys):
        if individual:
            if isinstance(realization, ParallelStep):
                part = _parallel_individual_set(sys, c, state_cap)
            elif isinstance(realization, SequentialStep):
                part = _sequential_individual_set(sys, c, realization.pi, state_cap)
            else:
                part = _async_plan_individual_set(sys, c, realization.plan, state_cap)
            out |= part
        else:
            for J in iter_selections(sys):
                out.add(execute(sys, c, Action(J, realization)))
        if len(out) > state_cap:
            raise EnumerationTooLargeError(f"successor set exceeds cap {state_cap}")
    return out


def _node_values(sys: System, state: int, i: int) -> set:
    return {f.evaluate(state) for f in sys.functions[i - 1]}


def _parallel_individual_set(sys: System, c: int, state_cap: int) -> set:
    partial = {0}
    for i in range(1, sys.n + 1):
        vals = _node_values(sys, c, i)
        shift = i - 1
        if vals == {0}:
            continue
        if vals == {1}:
            partial = {p | (1 << shift) for p in partial}
            continue
        partial = {p | (v << shift) for p in partial for v in vals}
        if len(partial) > state_cap:
            raise EnumerationTooLargeError(f"successor set exceeds cap {state_cap}")
    return partial


def _sequential_individual_set(sys: System, c: int, pi, state_cap: int) -> set:
    partial = {c}
    for u in pi:
        bit = 1 << (u - 1)
        nxt = set()
        for state in partial:
            for v in _node_values(sys, state, u):
                nxt.add((state | bit) if v else (state & ~bit))
        if len(nxt) > state_cap:
            raise EnumerationTooLargeError(f"successor set exceeds cap {state_cap}")
        partial = nxt
    return partial


def _async_plan_individual_set(sys: System, c: int, plan, state_cap: int) -> set:
    partial = {c}
    for group in plan:
        nxt = set()
        for state in partial:
            grown = {state}
            for u in group:
                bit = 1 << (u - 1)
                step = set()
                for s2 in grown:
                    for v in _node_values(sys, state, u):
                        step.add((s2 | bit) if v else (s2 & ~bit))
                grown = step
            nxt |= grown
        if len(nxt) > state_cap:
            raise EnumerationTooLargeError(f"successor set exceeds cap {state_cap}")
        partial = nxt
    return partial
