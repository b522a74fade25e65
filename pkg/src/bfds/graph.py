"""Labeled configuration graphs: explicit materialization and frontier search."""

from __future__ import annotations

from dataclasses import dataclass

from .core import (Action, EnumerationTooLargeError, ParallelStep,
                   SequentialStep, AsyncStep, Fixed, Asynchronous,
                   Individual, System, StructureError,
                   execute, iter_realizations,
                   successor_arcs, successor_set, DEFAULT_STATE_CAP,
                   DEFAULT_ACTION_CAP)


@dataclass
class Arc:
    count: int
    witness: Action


class ConfigGraph:
    """Directed graph on all 2^n configurations of a system.

    Explicit mode stores every arc with its label count and one witness
    action; frontier mode memoizes successor sets on demand and never
    materializes the full graph.
    """

    def __init__(self, sys: System, mode: str = "frontier",
                 state_cap: int = DEFAULT_STATE_CAP):
        self.sys = sys
        self.n = sys.n
        self.mode = mode
        self.state_cap = state_cap
        self._succ: dict = {}
        self._arcs: dict = {}

    def succ(self, c: int) -> set:
        s = self._succ.get(c)
        if s is None:
            s = frozenset(successor_set(self.sys, c, self.state_cap))
            self._succ[c] = s
        return s

    def arcs(self, c: int) -> dict:
        a = self._arcs.get(c)
        if a is None:
            a = {d: Arc(cnt, w) for d, (cnt, w)
                 in successor_arcs(self.sys, c, self.state_cap).items()}
            self._arcs[c] = a
            self._succ[c] = frozenset(a)
        return a

    def all_configs(self) -> range:
        if self.mode != "explicit":
            raise StructureError("global queries need an explicit graph")
        return range(1 << self.n)


def build_graph(sys: System, state_cap: int = DEFAULT_STATE_CAP) -> ConfigGraph:
    """Materialize the full labeled configuration graph (2^n <= state_cap)."""
    if (1 << sys.n) > state_cap:
        raise EnumerationTooLargeError(
            f"2^{sys.n} configurations exceed state cap {state_cap}")
    g = ConfigGraph(sys, mode="explicit", state_cap=state_cap)
    for c in range(1 << sys.n):
        g.arcs(c)
    return g


def reachable_set(sys: System, start: int, step_bound: int,
                  state_cap: int = DEFAULT_STATE_CAP) -> set:
    """Configurations reachable from start in at most step_bound steps."""
    seen = {start}
    frontier = [start]
    steps = 0
    while frontier and steps < step_bound:
        nxt = []
        for c in frontier:
            for d in successor_set(sys, c, state_cap):
                if d not in seen:
                    seen.add(d)
                    nxt.append(d)
                    if len(seen) > state_cap:
                        raise EnumerationTooLargeError(
                            f"reachable set exceeds cap {state_cap}")
        frontier = nxt
        steps += 1
    return seen


def bfs_distances(graph: ConfigGraph, start: int) -> dict:
    """Shortest nontrivial path lengths (>= 1 step) from start.

    start itself only gets a distance when some cycle returns to it.
    """
    dist: dict = {}
    frontier = sorted(graph.succ(start))
    d = 1
    while frontier:
        nxt = []
        for c in frontier:
            if c not in dist:
                dist[c] = d
                nxt.append(c)
        frontier = sorted({e for c in nxt for e in graph.succ(c)} - dist.keys())
        d += 1
    return dist


def edge_exists(sys: System, c: int, d: int,
                realization_cap: int = DEFAULT_ACTION_CAP):
    """Return a witness Action mapping c to d in one step, or None.

    Exhausts the realization space; the selection side is resolved
    greedily per node, which is exact because every node writes its own
    coordinate exactly once.
    """
    from .core import realization_count
    if realization_count(sys) > realization_cap:
        raise EnumerationTooLargeError("realization space exceeds cap")

    if isinstance(sys.schedule, Asynchronous):
        return _async_edge_witness(sys, c, d)

    for realization in iter_realizations(sys):
        action = _greedy_action(sys, c, d, realization)
        if action is not None:
            return action
    return None


def _options(sys: System, state: int, u: int):
    for j in range(1, sys.k + 1):
        yield j, sys.functions[u - 1][j - 1].evaluate(state)


def _greedy_action(sys: System, c: int, d: int, realization):
    """One action with this realization mapping c to d, or None.

    Greedy per node is complete for Fixed/Individual selection; for the
    coordinated-style schemes all shared indices are tried instead.
    """
    sel = sys.selection
    if isinstance(sel, Individual) or isinstance(sel, Fixed):
        J = _greedy_selection(sys, c, d, realization)
        return None if J is None else Action(J, realization)
    # coordinated and semi-coordinated: enumerate the (small) selection space
    from .core import iter_selections
    for J in iter_selections(sys):
        if execute(sys, c, Action(J, realization)) == d:
            return Action(J, realization)
    return None


def _greedy_selection(sys: System, c: int, d: int, realization):
    n, k = sys.n, sys.k
    fixed = not isinstance(sys.selection, Individual)
    J = [0] * n

    def pick(state: int, u: int) -> bool:
        want = (d >> (u - 1)) & 1
        js = (1,) if fixed else range(1, k + 1)
        for j in js:
            if sys.functions[u - 1][j - 1].evaluate(state) == want:
                J[u - 1] = j
                return True
        return False

    if isinstance(realization, ParallelStep):
        for u in range(1, n + 1):
            if not pick(c, u):
                return None
    elif isinstance(realization, SequentialStep):
        state = c
        for u in realization.pi:
            if not pick(state, u):
                return None
            bit = 1 << (u - 1)
            state = (state | bit) if (d >> (u - 1)) & 1 else (state & ~bit)
    else:  # AsyncStep
        touched = set()
        state = c
        for group in realization.plan:
            entry = state
            for u in group:
                touched.add(u)
                if not pick(entry, u):
                    return None
                bit = 1 << (u - 1)
                state = (state | bit) if (d >> (u - 1)) & 1 else (state & ~bit)
        for u in range(1, n + 1):
            if u not in touched:
                if ((c ^ d) >> (u - 1)) & 1:
                    return None
                if J[u - 1] == 0:
                    J[u - 1] = 1
    return tuple(J)


def _async_edge_witness(sys: System, c: int, d: int):
    """Async search restricted to plans over the changed nodes.

    Updating a node to its unchanged value never affects any later read,
    so a transition is realizable iff it is realizable by a plan whose
    groups partition exactly the set of changed nodes.
    """
    changed = tuple(u for u in range(1, sys.n + 1) if ((c ^ d) >> (u - 1)) & 1)
    if not changed:
        # the empty plan realizes every self-loop
        return Action((1,) * sys.n, AsyncStep(()))
    from .core import _ordered_partitions, iter_selections, Coordinated, SemiCoordinated
    coordinated_like = isinstance(sys.selection, (Coordinated, SemiCoordinated))
    for plan in _ordered_partitions(changed):
        realization = AsyncStep(plan)
        if coordinated_like:
            for J in iter_selections(sys):
                if execute(sys, c, Action(J, realization)) == d:
                    return Action(J, realization)
        else:
            action = _greedy_action(sys, c, d, realization)
            if action is not None:
                return action
    return None
