"""Cross-model simulations with constructive embeddings.

Each transform consumes a system in one schedule/selection model and emits
an equivalent system in another, together with an injective configuration
mapping.  `verify_embedding` checks the mapping exhaustively at desk scale:
nontrivial-path existence must agree on every source pair, and the
worst-case ratio of shortest nontrivial path lengths is measured exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import (ArbitraryPermutation, Asynchronous, Coordinated, Fixed,
                   FixedPermutation, Individual, ModelMismatchError,
                   NodeFunction, Parallel, PermutationList, SemiCoordinated,
                   System, pos, DEFAULT_STATE_CAP)
from .graph import ConfigGraph, bfs_distances


# ------------------------------------------------------------------
# embeddings as computable rules

@dataclass(frozen=True)
class Embedding:
    """Injective map from source to target configurations.

    `rule`/`params` name a computable mapping; a nonempty `target_rule`
    makes the embedding split: designated start configurations map through
    the source rule and designated end configurations through the target
    rule (they may differ, as the k-to-3 construction requires).
    """

    rule: str
    params: tuple = ()
    target_rule: str = ""
    target_params: tuple = ()

    def map_source(self, c: int) -> int:
        return _RULES[self.rule](self.params, c)

    def map_target(self, c: int) -> int:
        if not self.target_rule:
            return self.map_source(c)
        return _RULES[self.target_rule](self.target_params, c)

    @property
    def split(self) -> bool:
        return bool(self.target_rule)


def _rule_identity(params, c: int) -> int:
    return c


def _rule_double(params, c: int) -> int:
    (n,) = params
    return c | (c << n)


def _rule_double_flip(params, c: int) -> int:
    (n,) = params
    mask = (1 << n) - 1
    return c | ((~c & mask) << n)


def _rule_grid_onehot(params, c: int) -> int:
    # rows 1..n+1 all hold c; one-hot first column in each of k rows; z = 0
    n, k = params
    out = 0
    for row in range(n + 1):
        out |= c << (row * n)
    base = n * (n + 1)
    for j in range(k):
        out |= 1 << (base + j * (n + 1))
    return out


def _rule_grid_onehot_list(params, c: int) -> int:
    n, k, L = params
    out = 0
    for row in range(n + 1):
        out |= c << (row * n)
    base = n * (n + 1)
    for j in range(k * L):
        out |= 1 << (base + j * (n + 1))
    return out


def _rule_copies_aux(params, c: int) -> int:
    # k copies of c followed by three auxiliary bits
    n, k, y1, y2, y3 = params
    out = 0
    for j in range(k):
        out |= c << (j * n)
    aux = k * n
    out |= y1 << aux
    out |= y2 << (aux + 1)
    out |= y3 << (aux + 2)
    return out


def _rule_first_copy_aux(params, c: int) -> int:
    # c in the first copy, zeros elsewhere, three auxiliary bits
    n, k, y1, y2, y3 = params
    aux = k * n
    return c | (y1 << aux) | (y2 << (aux + 1)) | (y3 << (aux + 2))


_RULES = {
    "identity": _rule_identity,
    "double": _rule_double,
    "double-flip": _rule_double_flip,
    "grid-onehot": _rule_grid_onehot,
    "grid-onehot-list": _rule_grid_onehot_list,
    "copies-aux": _rule_copies_aux,
    "first-copy-aux": _rule_first_copy_aux,
}


@dataclass(frozen=True)
class TransformResult:
    system: System
    embedding: Embedding
    claimed_expansion: Fraction


# ------------------------------------------------------------------
# asynchronous <-> parallel (individual selection)

def async_to_parallel(sys: System) -> TransformResult:
    """Append an identity choice so parallel steps can leave nodes alone.

    One asynchronous step with m groups becomes m parallel steps, so the
    expansion rate is at most n.
    """
    if not isinstance(sys.schedule, Asynchronous) or not isinstance(sys.selection, Individual):
        raise ModelMismatchError("input must be asynchronous with individual selection")
    grid = tuple(row + (pos(i),) for i, row in enumerate(sys.functions, start=1))
    out = System(sys.n, sys.k + 1, grid, Individual(), Parallel())
    return TransformResult(out, Embedding("identity"), Fraction(sys.n))


def parallel_to_async(sys: System) -> TransformResult:
    """Drop one identity choice per node and let the schedule supply it."""
    if not isinstance(sys.schedule, Parallel) or not isinstance(sys.selection, Individual):
        raise ModelMismatchError("input must be parallel with individual selection")
    if sys.k < 2:
        raise ModelMismatchError("need at least two choices to drop the identity")
    grid = []
    for i, row in enumerate(sys.functions, start=1):
        drop = next((j for j, f in enumerate(row) if f.is_identity_on(i)), None)
        if drop is None:
            raise ModelMismatchError(f"node {i} has no identity choice")
        grid.append(tuple(f for j, f in enumerate(row) if j != drop))
    out = System(sys.n, sys.k - 1, grid, Individual(), Asynchronous())
    return TransformResult(out, Embedding("identity"), Fraction(1))


# ------------------------------------------------------------------
# parallel -> sequential (shadow copy)

def parallel_to_sequential(sys: System) -> TransformResult:
    """Shadow copy: nodes n+1..2n compute the step, nodes 1..n copy it back.

    The fixed update order [n+1..2n, 1..n] makes every shadow read the
    pre-step state, so one target step simulates one source step exactly
    (expansion 1) under the doubling map c -> c.c.
    """
    if not isinstance(sys.schedule, Parallel):
        raise ModelMismatchError("input must use the parallel schedule")
    n, k = sys.n, sys.k
    grid = []
    for i in range(1, n + 1):
        grid.append(tuple(pos(i + n) for _ in range(k)))
    for i in range(1, n + 1):
        grid.append(tuple(sys.function(i, j) for j in range(1, k + 1)))
    pi = tuple(range(n + 1, 2 * n + 1)) + tuple(range(1, n + 1))
    selection = _widen_selection(sys.selection, n)
    out = System(2 * n, k, tuple(grid), selection, FixedPermutation(pi))
    return TransformResult(out, Embedding("double", (n,)), Fraction(1))


def _widen_selection(selection, n: int):
    """Extend a selection scheme over [n] to the doubled node set [2n]."""
    if isinstance(selection, SemiCoordinated):
        blocks = tuple(tuple(sorted(block + tuple(i + n for i in block)))
                       for block in selection.blocks)
        return SemiCoordinated(blocks)
    return selection


# ------------------------------------------------------------------
# fixed permutation -> parallel (pipeline grid)

def _grid_indexer(n: int, k_rows: int):
    def v(row: int, col: int) -> int:   # row in [n+1], col in [n]
        return (row - 1) * n + col

    def a(row: int, col: int) -> int:   # row in [k_rows], col in [n+1]
        return n * (n + 1) + (row - 1) * (n + 1) + col

    z = n * (n + 1) + k_rows * (n + 1) + 1
    return v, a, z


def _pipeline_choice(sys: System, pi, j: int, a_row: int, n: int, k_rows: int):
    """The G choice: advance the systolic pipeline one stage, shift one a-row."""
    v, a, z = _grid_indexer(n, k_rows)
    funcs = {}
    for i in range(1, n + 1):
        funcs[v(1, i)] = pos(v(1, i))
    for step in range(1, n + 1):
        target_col = pi[step - 1]
        mapping = {s: v(step, s) for s in range(1, n + 1)}
        for i in range(1, n + 1):
            if i == target_col:
                funcs[v(step + 1, i)] = sys.function(target_col, j).remap(mapping)
            else:
                funcs[v(step + 1, i)] = pos(v(step, i))
    for row in range(1, k_rows + 1):
        if row == a_row:
            funcs[a(row, 1)] = pos(z)
            for col in range(1, n + 1):
                funcs[a(row, col + 1)] = pos(a(row, col))
        else:
            for col in range(1, n + 2):
                funcs[a(row, col)] = pos(a(row, col))
    funcs[z] = pos(z)
    return funcs


def _collapse_choice(a_row: int, n: int, k_rows: int):
    """The H choice: copy the finished row everywhere, restore the a-row."""
    v, a, z = _grid_indexer(n, k_rows)
    funcs = {}
    for row in range(1, n + 1):
        for i in range(1, n + 1):
            funcs[v(row, i)] = pos(v(n + 1, i))
    for i in range(1, n + 1):
        funcs[v(n + 1, i)] = pos(v(n + 1, i))
    for row in range(1, k_rows + 1):
        if row == a_row:
            funcs[a(row, 1)] = pos(a(row, n + 1))
        else:
            funcs[a(row, 1)] = pos(a(row, 1))
        for col in range(2, n + 2):
            funcs[a(row, col)] = pos(z)
    funcs[z] = pos(z)
    return funcs


def _assemble(choice_maps, total: int) -> tuple:
    grid = []
    for i in range(1, total + 1):
        grid.append(tuple(cm[i] for cm in choice_maps))
    return tuple(grid)


def sequential_to_parallel(sys: System) -> TransformResult:
    """Pipeline grid: n+1 rows stage the sequential computation; per-choice
    one-hot counters force exactly n pipeline advances before a collapse.

    Expansion rate n+1: one source step per (n advances + 1 collapse).
    """
    if not isinstance(sys.schedule, FixedPermutation) or not isinstance(sys.selection, Coordinated):
        raise ModelMismatchError("input must be fixed-permutation with coordinated selection")
    n, k = sys.n, sys.k
    pi = sys.schedule.pi
    choice_maps = [_pipeline_choice(sys, pi, j, j, n, k) for j in range(1, k + 1)]
    choice_maps += [_collapse_choice(j, n, k) for j in range(1, k + 1)]
    total = n * (n + 1) + k * (n + 1) + 1
    out = System(total, 2 * k, _assemble(choice_maps, total), Coordinated(), Parallel())
    return TransformResult(out, Embedding("grid-onehot", (n, k)), Fraction(n + 1))


def permlist_to_parallel(sys: System) -> TransformResult:
    """Permutation-list version: one pipeline/counter row pair per (j, perm)."""
    if not isinstance(sys.schedule, PermutationList) or not isinstance(sys.selection, Coordinated):
        raise ModelMismatchError("input must be permutation-list with coordinated selection")
    n, k = sys.n, sys.k
    pis = sys.schedule.pis
    L = len(pis)
    rows = k * L
    choice_maps = []
    for j in range(1, k + 1):
        for lam in range(1, L + 1):
            a_row = (j - 1) * L + lam
            choice_maps.append(_pipeline_choice(sys, pis[lam - 1], j, a_row, n, rows))
    for j in range(1, k + 1):
        for lam in range(1, L + 1):
            a_row = (j - 1) * L + lam
            choice_maps.append(_collapse_choice(a_row, n, rows))
    total = n * (n + 1) + rows * (n + 1) + 1
    out = System(total, 2 * k * L, _assemble(choice_maps, total), Coordinated(), Parallel())
    return TransformResult(out, Embedding("grid-onehot-list", (n, k, L)), Fraction(n + 1))


# ------------------------------------------------------------------
# k choices -> 3 choices (coordinated)

def kchoice_to_3choice(sys: System) -> TransformResult:
    """Three choices suffice: apply-all, rotate-copies, collapse-to-first.

    Copy j always holds some composition of source steps applied to the
    start; the auxiliary bits force the collapse to be the final step.
    Expansion rate at most k+1.
    """
    if not isinstance(sys.selection, Coordinated):
        raise ModelMismatchError("input must use coordinated selection")
    sch = sys.schedule
    if not isinstance(sch, (Parallel, FixedPermutation, PermutationList)):
        raise ModelMismatchError(
            "input schedule must be parallel, fixed-permutation, or permutation-list")
    n, k = sys.n, sys.k
    y1, y2, y3 = k * n + 1, k * n + 2, k * n + 3
    parallel = isinstance(sch, Parallel)

    def w(j: int, i: int) -> int:
        return (j - 1) * n + i

    apply_all = {}
    rotate = {}
    collapse = {}
    for j in range(1, k + 1):
        mapping = {s: w(j, s) for s in range(1, n + 1)}
        prev = j - 1 if j > 1 else k
        for i in range(1, n + 1):
            apply_all[w(j, i)] = sys.function(i, j).remap(mapping)
            rotate[w(j, i)] = pos(w(prev, i))
            collapse[w(j, i)] = pos(w(1, i)) if j == 1 else pos(y1)
    if parallel:
        for m in (apply_all, rotate):
            m[y1] = pos(y1)
            m[y2] = pos(y2)
            m[y3] = pos(y2)
        collapse[y1] = pos(y1)
        collapse[y2] = pos(y1)
        collapse[y3] = pos(y2)
        src_aux, tgt_aux = (0, 1, 1), (0, 0, 1)
    else:
        # sequential auxiliaries: updated last, reading earlier aux writes
        for m in (apply_all, rotate):
            m[y1] = pos(y3)
            m[y2] = pos(y2)
            m[y3] = pos(y3)
        collapse[y1] = pos(y2)
        collapse[y2] = pos(y3)
        collapse[y3] = pos(y3)
        src_aux, tgt_aux = (0, 1, 0), (1, 0, 0)

    total = k * n + 3
    grid = _assemble([apply_all, rotate, collapse], total)
    if parallel:
        schedule = Parallel()
    else:
        def widen(pi):
            return tuple((j - 1) * n + pi[i - 1]
                         for j in range(1, k + 1) for i in range(1, n + 1)) + (y1, y2, y3)
        if isinstance(sch, FixedPermutation):
            schedule = FixedPermutation(widen(sch.pi))
        else:
            schedule = PermutationList(tuple(widen(pi) for pi in sch.pis))
    out = System(total, 3, grid, Coordinated(), schedule)
    emb = Embedding("copies-aux", (n, k) + src_aux,
                    "first-copy-aux", (n, k) + tgt_aux)
    return TransformResult(out, emb, Fraction(k + 1))


# ------------------------------------------------------------------
# negation elimination (unary systems)

def eliminate_negation(sys: System) -> TransformResult:
    """Doubled system over c.~c: negations become reads of the shadow half."""
    sch = sys.schedule
    if not isinstance(sch, (Parallel, FixedPermutation, PermutationList)):
        raise ModelMismatchError(
            "input schedule must be parallel, fixed-permutation, or permutation-list")
    n, k = sys.n, sys.k
    grid = [[None] * k for _ in range(2 * n)]
    for i in range(1, n + 1):
        for j in range(1, k + 1):
            f = sys.function(i, j)
            if f.kind == "pos":
                src = f.srcs[0]
                grid[i - 1][j - 1] = pos(src)
                grid[i + n - 1][j - 1] = pos(src + n)
            elif f.kind == "neg":
                src = f.srcs[0]
                grid[i - 1][j - 1] = pos(src + n)
                grid[i + n - 1][j - 1] = pos(src)
            else:
                raise ModelMismatchError(
                    f"node {i} choice {j} is {f.kind}, only unary functions allowed")
    grid = tuple(tuple(row) for row in grid)

    def widen(pi):
        out = []
        for u in pi:
            out.append(u)
            out.append(u + n)
        return tuple(out)

    if isinstance(sch, Parallel):
        schedule = Parallel()
    elif isinstance(sch, FixedPermutation):
        schedule = FixedPermutation(widen(sch.pi))
    else:
        schedule = PermutationList(tuple(widen(pi) for pi in sch.pis))
    selection = _widen_selection(sys.selection, n)
    out = System(2 * n, k, grid, selection, schedule)
    return TransformResult(out, Embedding("double-flip", (n,)), Fraction(1))


# ------------------------------------------------------------------
# verification

@dataclass
class EmbeddingReport:
    is_embedding: bool
    expansion: Fraction | None
    counterexample: tuple | None = None  # (a, b, detail)


def verify_embedding(source: System, target: System, embedding: Embedding,
                     length_bound: int | None = None,
                     state_cap: int = DEFAULT_STATE_CAP) -> EmbeddingReport:
    """Exhaustively check Def-style embedding conditions over all source pairs.

    For every source pair (a, b): a nontrivial path a -> b must exist iff a
    nontrivial path exists between the mapped configurations.  For split
    embeddings the source side also accepts the empty path when a == b.
    The expansion is the max ratio of shortest nontrivial path lengths over
    pairs where both sides are finite (a != b for split embeddings).
    """
    sg = ConfigGraph(source, state_cap=state_cap)
    tg = ConfigGraph(target, state_cap=state_cap)
    configs = list(range(1 << source.n))

    target_dist = {}
    for a in configs:
        dist = _bounded_distances(tg, embedding.map_source(a), length_bound)
        target_dist[a] = dist

    expansion = None
    for a in configs:
        sdist = _bounded_distances(sg, a, length_bound)
        for b in configs:
            ds = sdist.get(b)
            dt = target_dist[a].get(embedding.map_target(b))
            if embedding.split:
                source_ok = (a == b) or ds is not None
                if source_ok != (dt is not None):
                    return EmbeddingReport(False, None, (a, b, "path existence differs"))
                if a != b and ds is not None:
                    ratio = Fraction(dt, ds)
                    if expansion is None or ratio > expansion:
                        expansion = ratio
            else:
                if (ds is None) != (dt is None):
                    return EmbeddingReport(False, None, (a, b, "path existence differs"))
                if ds is not None:
                    ratio = Fraction(dt, ds)
                    if expansion is None or ratio > expansion:
                        expansion = ratio
    return EmbeddingReport(True, expansion, None)


def _bounded_distances(graph: ConfigGraph, start: int, bound: int | None) -> dict:
    if bound is None:
        return bfs_distances(graph, start)
    dist: dict = {}
    frontier = sorted(graph.succ(start))
    d = 1
    while frontier and d <= bound:
        nxt = []
        for c in frontier:
            if c not in dist:
                dist[c] = d
                nxt.append(c)
        frontier = sorted({e for c in nxt for e in graph.succ(c)} - dist.keys())
        d += 1
    return dist


TRANSFORMS = {
    "async-to-parallel": async_to_parallel,
    "parallel-to-async": parallel_to_async,
    "parallel-to-sequential": parallel_to_sequential,
    "sequential-to-parallel": sequential_to_parallel,
    "permlist-to-parallel": permlist_to_parallel,
    "k-to-3": kchoice_to_3choice,
    "eliminate-negation": eliminate_negation,
}
