"""Exact desk-scale solvers for structural questions on configuration graphs.

Path and cycle counting treat a path as a configuration sequence, so
parallel arcs achieved by several actions count once.  Everything here is
exact; the worst-case-exponential searches carry an explicit expansion
budget and raise ResourceBudgetError instead of approximating.
"""

from __future__ import annotations

from .core import ResourceBudgetError
from .graph import ConfigGraph, bfs_distances

DEFAULT_DFS_BUDGET = 1 << 16


# ------------------------------------------------------------------
# reachability family

def reachable_any(graph: ConfigGraph, c: int, d: int):
    """Shortest nontrivial path (length >= 1) from c to d, or None.

    With c == d this asks whether some cycle returns to c.
    """
    return shortest_path(graph, c, d)


def shortest_path(graph: ConfigGraph, c: int, d: int, bound: int | None = None):
    """BFS witness path c -> d of length >= 1 (at most `bound`), or None."""
    parents = {}
    frontier = [c]
    depth = 0
    seen = set()
    while frontier:
        depth += 1
        if bound is not None and depth > bound:
            return None
        nxt = []
        for u in frontier:
            for v in sorted(graph.succ(u)):
                if v == d:
                    path = [u]
                    while path[-1] != c:
                        path.append(parents[path[-1]])
                    path.reverse()
                    path.append(d)
                    return path
                if v not in seen:
                    seen.add(v)
                    parents[v] = u
                    nxt.append(v)
        frontier = nxt
    return None


def reachable_within(graph: ConfigGraph, c: int, d: int, t: int):
    """Witness path of length in [1, t], or None."""
    return shortest_path(graph, c, d, bound=t)


def min_path_len(graph: ConfigGraph, c: int, d: int):
    path = shortest_path(graph, c, d)
    return None if path is None else len(path) - 1


def max_simple_path_len(graph: ConfigGraph, c: int, d: int,
                        budget: int = DEFAULT_DFS_BUDGET):
    """Length of the longest simple path from c to d, or None if none exists.

    For c == d this is the longest simple cycle through c.
    """
    best = -1
    spent = 0

    def dfs(u: int, visited: set, length: int):
        nonlocal best, spent
        spent += 1
        if spent > budget:
            raise ResourceBudgetError(f"DFS budget {budget} exceeded")
        for v in sorted(graph.succ(u)):
            if v == d:
                if length + 1 > best:
                    best = length + 1
            if v != d and v not in visited and v != c:
                visited.add(v)
                dfs(v, visited, length + 1)
                visited.discard(v)

    dfs(c, {c}, 0)
    return None if best < 0 else best


def path_intersection(graph: ConfigGraph, c: int, d: int) -> bool:
    """Whether some path from c (>= 0 steps) meets some path from d."""
    from_c = {c} | set(bfs_distances(graph, c))
    if d in from_c:
        return True
    frontier = [d]
    seen = {d}
    while frontier:
        nxt = []
        for u in frontier:
            for v in graph.succ(u):
                if v in from_c:
                    return True
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return False


# ------------------------------------------------------------------
# cycle structure

def _reachable_closure(graph: ConfigGraph, c: int) -> set:
    seen = {c}
    frontier = [c]
    while frontier:
        nxt = []
        for u in frontier:
            for v in graph.succ(u):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return seen


def cycle_configs(graph: ConfigGraph, within: set | None = None) -> set:
    """All configurations lying on some cycle (Tarjan over the given set)."""
    nodes = within if within is not None else set(graph.all_configs())
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = set()
    counter = [0]

    def strongconnect(v0: int):
        work = [(v0, iter(sorted(n for n in graph.succ(v0) if n in nodes)))]
        index[v0] = low[v0] = counter[0]
        counter[0] += 1
        stack.append(v0)
        on_stack.add(v0)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(n for n in graph.succ(w) if n in nodes))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1:
                    out.update(comp)
                elif comp[0] in graph.succ(comp[0]):
                    out.add(comp[0])

    for v in sorted(nodes):
        if v not in index:
            strongconnect(v)
    return out


def tail_length(graph: ConfigGraph, c: int) -> int:
    """Shortest distance (>= 0) from c to any configuration on a cycle."""
    closure = _reachable_closure(graph, c)
    on_cycle = cycle_configs(graph, within=closure)
    dist = 0
    frontier = [c]
    seen = {c}
    while frontier:
        if any(u in on_cycle for u in frontier):
            return dist
        nxt = []
        for u in frontier:
            for v in graph.succ(u):
                if v not in seen:
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
        dist += 1
    raise AssertionError("every configuration reaches a cycle")  # pragma: no cover


def is_cycle_point(graph: ConfigGraph, c: int) -> bool:
    return c in bfs_distances(graph, c)


def min_cycle_len(graph: ConfigGraph, c: int):
    """Length of the shortest cycle through c, or None."""
    return bfs_distances(graph, c).get(c)


def max_simple_cycle_len(graph: ConfigGraph, c: int,
                         budget: int = DEFAULT_DFS_BUDGET):
    return max_simple_path_len(graph, c, c, budget=budget)


def count_simple_cycles_through(graph: ConfigGraph, c: int,
                                budget: int = DEFAULT_DFS_BUDGET) -> int:
    return count_simple_paths(graph, c, c, budget=budget)


# ------------------------------------------------------------------
# predecessors and gardens of Eden

def predecessor_map(graph: ConfigGraph) -> dict:
    preds: dict = {c: set() for c in graph.all_configs()}
    for c in graph.all_configs():
        for d in graph.succ(c):
            preds[d].add(c)
    return preds


def count_predecessors(graph: ConfigGraph, c: int) -> int:
    return sum(1 for e in graph.all_configs() if c in graph.succ(e))


def is_garden_of_eden(graph: ConfigGraph, c: int) -> bool:
    return count_predecessors(graph, c) == 0


def gardens_of_eden(graph: ConfigGraph) -> list:
    preds = predecessor_map(graph)
    return sorted(c for c, p in preds.items() if not p)


def count_gardens(graph: ConfigGraph) -> int:
    return len(gardens_of_eden(graph))


def t_garden_of_eden(graph: ConfigGraph, c: int, t: int) -> bool:
    """Whether some Garden of Eden reaches c by a walk of length exactly t."""
    layer = set(gardens_of_eden(graph))
    if t == 0:
        return c in layer
    for _ in range(t):
        layer = {v for u in layer for v in graph.succ(u)}
        if not layer:
            return False
    return c in layer


# ------------------------------------------------------------------
# fixed points

def is_fixed_point(graph: ConfigGraph, c: int) -> bool:
    return c in graph.succ(c)


def is_complete_fixed_point(graph: ConfigGraph, c: int) -> bool:
    """Every permissible action maps c back to itself."""
    return graph.succ(c) == frozenset((c,))


def fixed_points(graph: ConfigGraph) -> list:
    return sorted(c for c in graph.all_configs() if is_fixed_point(graph, c))


def complete_fixed_points(graph: ConfigGraph) -> list:
    return sorted(c for c in graph.all_configs()
                  if is_complete_fixed_point(graph, c))


def has_fixed_point(graph: ConfigGraph) -> bool:
    return bool(fixed_points(graph))


def has_complete_fixed_point(graph: ConfigGraph) -> bool:
    return bool(complete_fixed_points(graph))


def count_fixed_points(graph: ConfigGraph) -> int:
    return len(fixed_points(graph))


def count_complete_fixed_points(graph: ConfigGraph) -> int:
    return len(complete_fixed_points(graph))


# ------------------------------------------------------------------
# counting

def count_subsequent(graph: ConfigGraph, c: int) -> int:
    return len(graph.succ(c))


def count_simple_paths(graph: ConfigGraph, c: int, d: int,
                       budget: int = DEFAULT_DFS_BUDGET) -> int:
    """Number of simple paths c -> d (length >= 1, distinct interior nodes).

    With c == d this counts the simple cycles through c.
    """
    count = 0
    spent = 0

    def dfs(u: int, visited: set):
        nonlocal count, spent
        spent += 1
        if spent > budget:
            raise ResourceBudgetError(f"DFS budget {budget} exceeded")
        for v in sorted(graph.succ(u)):
            if v == d:
                count += 1
            if v != d and v not in visited and v != c:
                visited.add(v)
                dfs(v, visited)
                visited.discard(v)

    dfs(c, {c})
    return count


def count_simple_cycles_global(graph: ConfigGraph,
                               budget: int = DEFAULT_DFS_BUDGET) -> int:
    """Number of distinct simple cycles in the whole graph.

    Each cycle is counted once, anchored at its smallest configuration.
    """
    total = 0
    spent = 0

    def dfs(anchor: int, u: int, visited: set):
        nonlocal total, spent
        spent += 1
        if spent > budget:
            raise ResourceBudgetError(f"DFS budget {budget} exceeded")
        for v in sorted(graph.succ(u)):
            if v == anchor:
                total += 1
            elif v > anchor and v not in visited:
                visited.add(v)
                dfs(anchor, v, visited)
                visited.discard(v)

    for anchor in graph.all_configs():
        dfs(anchor, anchor, {anchor})
    return total
