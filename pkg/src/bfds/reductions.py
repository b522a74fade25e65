"""Generators compiling CNF formulas and graph pairs into reachability
instances, special-system builders, and an end-to-end correctness harness.

Every generator emits a ReductionInstance bundling the system with explicit
start/target configurations and the decision horizon; `verify_reduction`
replays the instance with generic reachability machinery and compares the
verdict against direct formula/graph enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import (Coordinated, EnumerationTooLargeError, Individual,
                   ModelMismatchError, Parallel, PermutationList,
                   StructureError, System, config_from_bits, neg,
                   or_, pos, successor_set, DEFAULT_STATE_CAP)
from .fileformat import SimpleGraph


# ------------------------------------------------------------------
# CNF formulas

@dataclass(frozen=True)
class CnfFormula:
    nvars: int
    clauses: tuple  # tuples of nonzero literals (positive or negative ints)

    def check_width(self, width: int) -> None:
        for clause in self.clauses:
            if len(clause) != width:
                raise StructureError(
                    f"clause {clause} has width {len(clause)}, need {width}")

    def evaluate(self, assignment: int) -> bool:
        """Assignment packs variable v at bit v-1."""
        for clause in self.clauses:
            if not any(((assignment >> (abs(l) - 1)) & 1) == (l > 0) for l in clause):
                return False
        return True

    def satisfying_assignments(self) -> list:
        return [a for a in range(1 << self.nvars) if self.evaluate(a)]

    def is_satisfiable(self) -> bool:
        return any(self.evaluate(a) for a in range(1 << self.nvars))

    def model_count(self) -> int:
        return len(self.satisfying_assignments())


def solve_2sat(nvars: int, clauses) -> bool:
    """SCC-based 2SAT over clauses of one or two literals."""
    # literal encoding: 2*(v-1) for x_v, 2*(v-1)+1 for ~x_v
    def enc(lit: int) -> int:
        return 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)

    nlits = 2 * nvars
    adj = [[] for _ in range(nlits)]
    for clause in clauses:
        if len(clause) == 1:
            (a,) = clause
            adj[enc(-a)].append(enc(a))
        else:
            a, b = clause
            adj[enc(-a)].append(enc(b))
            adj[enc(-b)].append(enc(a))

    index = [0] * nlits
    low = [0] * nlits
    comp = [-1] * nlits
    on_stack = [False] * nlits
    stack = []
    counter = [1]
    ncomp = [0]

    def strongconnect(v0: int):
        work = [(v0, 0)]
        index[v0] = low[v0] = counter[0]
        counter[0] += 1
        stack.append(v0)
        on_stack[v0] = True
        while work:
            v, ptr = work.pop()
            advanced = False
            while ptr < len(adj[v]):
                w = adj[v][ptr]
                ptr += 1
                if index[w] == 0:
                    work.append((v, ptr))
                    index[w] = low[w] = counter[0]
                    counter[0] += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp[0]
                    if w == v:
                        break
                ncomp[0] += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    for v in range(nlits):
        if index[v] == 0:
            strongconnect(v)
    return all(comp[2 * v] != comp[2 * v + 1] for v in range(nvars))


# ------------------------------------------------------------------
# reduction instances

@dataclass(frozen=True)
class ReductionInstance:
    system: System
    start: int
    target: int
    horizon: int | None  # None = unbounded
    permutations: tuple = ()  # schedule artifacts worth reporting


# ------------------------------------------------------------------
# the four-level unary gadget family

def _literal_node(lit: int, b_node) -> int:
    v = abs(lit)
    return b_node(v, 1 if lit > 0 else 0)


def _t3_layout(n: int, m: int):
    a0, a1 = 1, 2

    def b(i, s):
        return 2 + 2 * (i - 1) + s + 1

    def c(i, s):
        return 2 + 2 * n + 2 * (i - 1) + s + 1

    def alpha(j):
        return 2 + 4 * n + j

    def beta(j):
        return 2 + 4 * n + m + j

    def d(i, s):
        return 2 + 4 * n + 2 * m + 2 * (i - 1) + s + 1

    def gamma(j):
        return 2 + 6 * n + 2 * m + j

    total = 2 + 6 * n + 3 * m
    return a0, a1, b, c, alpha, beta, d, gamma, total


def reduce_3sat_unary_t3(formula: CnfFormula) -> ReductionInstance:
    """Four-level copy gadget: 3-step reachability iff the 3CNF is satisfiable.

    Level 2 holds a candidate assignment after one step; levels 3 and 4
    check per-variable consistency (c, d pairs) and per-clause satisfaction
    (alpha/beta feeding gamma).
    """
    formula.check_width(3)
    n, m = formula.nvars, len(formula.clauses)
    a0, a1, b, c, alpha, beta, d, gamma, total = _t3_layout(n, m)
    funcs: dict = {a0: (pos(a0), pos(a0)), a1: (pos(a1), pos(a1))}
    for i in range(1, n + 1):
        for s in (0, 1):
            funcs[b(i, s)] = (pos(a0), pos(a1))
            funcs[c(i, s)] = (pos(b(i, 0)), pos(b(i, 1)))
            funcs[d(i, s)] = (pos(c(i, s)), pos(c(i, s)))
    for j, clause in enumerate(formula.clauses, start=1):
        l1, l2, l3 = clause
        funcs[alpha(j)] = (pos(_literal_node(l1, b)), pos(_literal_node(l2, b)))
        funcs[beta(j)] = (pos(_literal_node(l2, b)), pos(_literal_node(l3, b)))
        funcs[gamma(j)] = (pos(alpha(j)), pos(beta(j)))
    grid = tuple(funcs[i] for i in range(1, total + 1))
    sys = System(total, 2, grid, Individual(), Parallel())
    start = 1 << (a1 - 1)
    target = 1 << (a1 - 1)
    for i in range(1, n + 1):
        target |= 1 << (d(i, 1) - 1)
    for j in range(1, m + 1):
        target |= 1 << (gamma(j) - 1)
    return ReductionInstance(sys, start, target, 3)


def reduce_2sat_t2(formula: CnfFormula) -> ReductionInstance:
    """Two-level variant for 2CNF: 2-step reachability iff satisfiable."""
    formula.check_width(2)
    n, m = formula.nvars, len(formula.clauses)
    a0, a1 = 1, 2

    def b(i, s):
        return 2 + 2 * (i - 1) + s + 1

    def c(i, s):
        return 2 + 2 * n + 2 * (i - 1) + s + 1

    def alpha(j):
        return 2 + 4 * n + j

    total = 2 + 4 * n + m
    funcs = {a0: (pos(a0), pos(a0)), a1: (pos(a1), pos(a1))}
    for i in range(1, n + 1):
        for s in (0, 1):
            funcs[b(i, s)] = (pos(a0), pos(a1))
            funcs[c(i, s)] = (pos(b(i, 0)), pos(b(i, 1)))
    for j, clause in enumerate(formula.clauses, start=1):
        l1, l2 = clause
        funcs[alpha(j)] = (pos(_literal_node(l1, b)), pos(_literal_node(l2, b)))
    grid = tuple(funcs[i] for i in range(1, total + 1))
    sys = System(total, 2, grid, Individual(), Parallel())
    start = 1 << (a1 - 1)
    target = 1 << (a1 - 1)
    for i in range(1, n + 1):
        target |= 1 << (c(i, 1) - 1)
    for j in range(1, m + 1):
        target |= 1 << (alpha(j) - 1)
    return ReductionInstance(sys, start, target, 2)


def reduce_3sat_k3_t2(formula: CnfFormula) -> ReductionInstance:
    """Three choices let clause nodes read their literals directly (t = 2)."""
    formula.check_width(3)
    n, m = formula.nvars, len(formula.clauses)
    a0, a1 = 1, 2

    def b(i, s):
        return 2 + 2 * (i - 1) + s + 1

    def c(i, s):
        return 2 + 2 * n + 2 * (i - 1) + s + 1

    def gamma(j):
        return 2 + 4 * n + j

    total = 2 + 4 * n + m
    funcs = {a0: (pos(a0),) * 3, a1: (pos(a1),) * 3}
    for i in range(1, n + 1):
        for s in (0, 1):
            funcs[b(i, s)] = (pos(a0), pos(a1), pos(a0))
            funcs[c(i, s)] = (pos(b(i, 0)), pos(b(i, 1)), pos(b(i, 0)))
    for j, clause in enumerate(formula.clauses, start=1):
        funcs[gamma(j)] = tuple(pos(_literal_node(l, b)) for l in clause)
    grid = tuple(funcs[i] for i in range(1, total + 1))
    sys = System(total, 3, grid, Individual(), Parallel())
    start = 1 << (a1 - 1)
    target = 1 << (a1 - 1)
    for i in range(1, n + 1):
        target |= 1 << (c(i, 1) - 1)
    for j in range(1, m + 1):
        target |= 1 << (gamma(j) - 1)
    return ReductionInstance(sys, start, target, 2)


def reduce_parsimonious_count(formula: CnfFormula) -> ReductionInstance:
    """Four-choice gadget whose simple start-to-target paths count models.

    The feeder node a1 reads the constant-zero node, so assignments exist
    for exactly one step; clause and consistency nodes read only level-two
    nodes, which pins every start-to-target path to length two and makes
    the count parsimonious.
    """
    formula.check_width(3)
    n, m = formula.nvars, len(formula.clauses)
    a0, a1 = 1, 2

    def b(i, s):
        return 2 + 2 * (i - 1) + s + 1

    def c(i, s):
        return 2 + 2 * n + 2 * (i - 1) + s + 1

    def gamma(j):
        return 2 + 4 * n + j

    total = 2 + 4 * n + m
    funcs = {a0: (pos(a0),) * 4, a1: (pos(a0),) * 4}
    for i in range(1, n + 1):
        for s in (0, 1):
            funcs[b(i, s)] = (pos(a0), pos(a1), pos(a0), pos(a1))
        funcs[c(i, 0)] = (pos(b(i, 0)), pos(b(i, 1)), pos(b(i, 0)), pos(b(i, 1)))
        funcs[c(i, 1)] = (pos(b(i, 0)), pos(b(i, 1)), pos(b(i, 1)), pos(b(i, 0)))
    for j, clause in enumerate(formula.clauses, start=1):
        l1, l2, l3 = clause
        funcs[gamma(j)] = (pos(_literal_node(l1, b)), pos(_literal_node(l2, b)),
                           pos(_literal_node(l3, b)), pos(_literal_node(l3, b)))
    grid = tuple(funcs[i] for i in range(1, total + 1))
    sys = System(total, 4, grid, Individual(), Parallel())
    start = 1 << (a1 - 1)
    target = 0
    for i in range(1, n + 1):
        target |= 1 << (c(i, 1) - 1)
    for j in range(1, m + 1):
        target |= 1 << (gamma(j) - 1)
    return ReductionInstance(sys, start, target, 2)


# ------------------------------------------------------------------
# coordinated 4-choice gadget

def reduce_3sat_coordinated(formula: CnfFormula) -> ReductionInstance:
    """Coordinated parallel gadget: target emerges exactly at step 2n+3 iff
    satisfiable.  Functions are 2-fan-in ORs and unary copies only.
    """
    formula.check_width(3)
    n, m = formula.nvars, len(formula.clauses)

    def a(i):  # i in 0..n
        return i + 1

    def b(i):
        return n + 2 + i

    def alpha(j):  # j in 1..m
        return 2 * n + 2 + j

    def beta(j):
        return 2 * n + 2 + m + j

    def gamma(j):
        return 2 * n + 2 + 2 * m + j

    grid_base = 2 * n + 2 + 3 * m

    def cgrid(r, s):  # r, s in 0..n+1
        return grid_base + r * (n + 2) + s + 1

    d_base = grid_base + (n + 2) ** 2
    d1, d2, d3 = d_base + 1, d_base + 2, d_base + 3

    def t(i):  # i in 0..2n+4
        return d_base + 3 + i + 1

    total = d_base + 3 + (2 * n + 5)

    def lit_node(lit: int) -> int:
        return b(abs(lit)) if lit > 0 else a(abs(lit))

    identity = {u: pos(u) for u in range(1, total + 1)}

    def counter_shift(funcs):
        for i in range(1, 2 * n + 5):
            funcs[t(i)] = pos(t(i - 1))

    g1 = dict(identity)
    g1[a(0)] = pos(b(0))
    g1[b(0)] = pos(a(0))
    for r in range(1, n + 2):
        for s in range(0, n + 2):
            g1[cgrid(r, s)] = pos(cgrid(r - 1, s))
    counter_shift(g1)

    g2 = dict(identity)
    for i in range(1, n + 1):
        g2[a(i)] = pos(a(i - 1))
        g2[b(i)] = pos(b(i - 1))
    for r in range(0, n + 2):
        for s in range(1, n + 2):
            g2[cgrid(r, s)] = pos(cgrid(r, s - 1))
    counter_shift(g2)

    g3 = dict(identity)
    for j, clause in enumerate(formula.clauses, start=1):
        l1, l2, l3 = clause
        g3[alpha(j)] = or_(lit_node(l1), lit_node(l2))
        g3[beta(j)] = or_(lit_node(l2), lit_node(l3))
    g3[d1] = pos(cgrid(n + 1, n + 1))
    g3[d3] = pos(d2)
    counter_shift(g3)

    g4 = dict(identity)
    for j in range(1, m + 1):
        g4[gamma(j)] = or_(alpha(j), beta(j))
    for i in range(0, n + 1):
        g4[a(i)] = or_(a(i), b(i))
        g4[b(i)] = or_(a(i), b(i))
    g4[d2] = pos(d1)
    counter_shift(g4)

    grid = tuple((g1[u], g2[u], g3[u], g4[u]) for u in range(1, total + 1))
    sys = System(total, 4, grid, Coordinated(), Parallel())

    start = (1 << (a(0) - 1)) | (1 << (cgrid(1, 1) - 1)) | (1 << (t(1) - 1))
    target = 0
    for i in range(0, n + 1):
        target |= 1 << (a(i) - 1)
        target |= 1 << (b(i) - 1)
    for j in range(1, m + 1):
        target |= (1 << (alpha(j) - 1)) | (1 << (beta(j) - 1)) | (1 << (gamma(j) - 1))
    target |= 1 << (cgrid(n + 1, n + 1) - 1)
    target |= (1 << (d1 - 1)) | (1 << (d2 - 1)) | (1 << (d3 - 1))
    target |= 1 << (t(2 * n + 4) - 1)
    return ReductionInstance(sys, start, target, 2 * n + 3)


# ------------------------------------------------------------------
# permutation-list gadget (two schedules over the four-level gadget)

def reduce_3sat_permlist(formula: CnfFormula) -> ReductionInstance:
    """The four-level gadget under a two-permutation list, horizon 2.

    pi runs the layers top-down (a, b, c, d, alpha, beta, gamma): one
    sequential step pushes a candidate assignment through every level.
    sigma fires the output layers gamma and d first, so they latch the
    step-one clause values and consistency pattern while the rest of the
    permutation clears the feeder layers.
    """
    formula.check_width(3)
    base = reduce_3sat_unary_t3(formula)
    n, m = formula.nvars, len(formula.clauses)
    a0, a1, b, c, alpha, beta, d, gamma, total = _t3_layout(n, m)
    order_layers = [a0, a1]
    order_layers += [b(i, s) for i in range(1, n + 1) for s in (0, 1)]
    order_layers += [c(i, s) for i in range(1, n + 1) for s in (0, 1)]
    order_layers += [d(i, s) for i in range(1, n + 1) for s in (0, 1)]
    order_layers += [alpha(j) for j in range(1, m + 1)]
    order_layers += [beta(j) for j in range(1, m + 1)]
    order_layers += [gamma(j) for j in range(1, m + 1)]
    pi = tuple(order_layers)
    sigma_layers = [gamma(j) for j in range(1, m + 1)]
    sigma_layers += [d(i, s) for i in range(1, n + 1) for s in (0, 1)]
    sigma_layers += [a0, a1]
    sigma_layers += [b(i, s) for i in range(1, n + 1) for s in (0, 1)]
    sigma_layers += [c(i, s) for i in range(1, n + 1) for s in (0, 1)]
    sigma_layers += [alpha(j) for j in range(1, m + 1)]
    sigma_layers += [beta(j) for j in range(1, m + 1)]
    sigma = tuple(sigma_layers)
    sys = System(total, 2, base.system.functions, Individual(),
                 PermutationList((pi, sigma)))
    return ReductionInstance(sys, base.start, base.target, 2, (pi, sigma))


# ------------------------------------------------------------------
# graph isomorphism gadget

def reduce_graph_iso(g: SimpleGraph, h: SimpleGraph) -> ReductionInstance:
    """Adjacency matrices as configurations; two relabeling rotations
    generate the full symmetric group, so the target matrix is reachable
    iff the graphs are isomorphic.
    """
    if g.nodes != h.nodes:
        raise StructureError("graphs must have the same node count")
    n = g.nodes

    def tau(i, j):
        return (i - 1) * n + j

    def alpha(i):
        if i == 1:
            return 1
        if 2 <= i <= n - 1:
            return i + 1
        return 2

    def beta(i):
        if i == 1:
            return 2
        if i == 2:
            return 1
        return i

    grid = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            grid.append((pos(tau(alpha(i), alpha(j))), pos(tau(beta(i), beta(j)))))
    sys = System(n * n, 2, tuple(grid), Coordinated(), Parallel())

    def pack(graph: SimpleGraph) -> int:
        cfg = 0
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j and graph.has_edge(i, j):
                    cfg |= 1 << (tau(i, j) - 1)
        return cfg

    return ReductionInstance(sys, pack(g), pack(h), None)


def graphs_isomorphic(g: SimpleGraph, h: SimpleGraph) -> bool:
    """Brute-force oracle over all node permutations."""
    if g.nodes != h.nodes:
        return False
    if len(g.edges) != len(h.edges):
        return False
    nodes = range(1, g.nodes + 1)
    for perm in itertools.permutations(nodes):
        relabel = {u: perm[u - 1] for u in nodes}
        if all(h.has_edge(relabel[u], relabel[v])
               for e in g.edges for u, v in [tuple(e)]):
            return True
    return False


# ------------------------------------------------------------------
# special-system builders

def build_near_connected(n: int) -> System:
    """Rotation-plus-copy system: every pair of mixed configurations is
    mutually reachable while the all-zero and all-one configurations are
    complete fixed points.
    """
    if n < 4:
        raise StructureError("need n >= 4")
    grid = [(pos(1), pos(n)), (pos(n), pos(1))]
    for i in range(3, n + 1):
        grid.append((pos(i - 1), pos(i - 1)))
    return System(n, 2, tuple(grid), Individual(), Parallel())


def build_cyclic_connected(n: int) -> System:
    """One rotation choice plus a self-loop choice negating node 1:
    the configuration graph is strongly connected.
    """
    if n < 2:
        raise StructureError("need n >= 2")
    grid = [(pos(n), neg(1))]
    for i in range(2, n + 1):
        grid.append((pos(i - 1), pos(i)))
    return System(n, 2, tuple(grid), Coordinated(), Parallel())


# ------------------------------------------------------------------
# 2CNF extraction for two-step reachability

def extract_2cnf(sys: System, c: int, d: int) -> CnfFormula:
    """Encode `d reachable from c in exactly two parallel steps` as 2SAT.

    Variables are the intermediate state bits.  Works for 2-choice unary
    systems with individual selection: each node contributes one binary
    clause (its target value must be producible from the intermediate
    state) and possibly a unit clause (its intermediate value is forced
    when both its sources agree in c).
    """
    if sys.k != 2 or not isinstance(sys.schedule, Parallel) \
            or not isinstance(sys.selection, Individual):
        raise ModelMismatchError("need a 2-choice parallel system with individual selection")
    for row in sys.functions:
        for f in row:
            if f.kind not in ("pos", "neg"):
                raise ModelMismatchError("need unary functions only")

    clauses = []
    for i in range(1, sys.n + 1):
        f1, f2 = sys.functions[i - 1]
        # target side: some choice must produce d_i from the intermediate state
        want = (d >> (i - 1)) & 1
        lits = []
        for f in (f1, f2):
            s = f.srcs[0]
            need = want if f.kind == "pos" else 1 - want
            lits.append(s if need else -s)
        clauses.append(tuple(lits))
        # source side: the intermediate value of node i is limited by c
        v1 = f1.evaluate(c)
        v2 = f2.evaluate(c)
        if v1 == v2:
            clauses.append((i,) if v1 else (-i,))
    return CnfFormula(sys.n, tuple(clauses))


def two_step_reachable(sys: System, c: int, d: int) -> bool:
    formula = extract_2cnf(sys, c, d)
    return solve_2sat(formula.nvars, formula.clauses)


# ------------------------------------------------------------------
# reachability within a horizon (harness side)

def one_step_parallel_reachable(sys: System, c: int, d: int) -> bool:
    """Per-node membership test; exact for parallel individual selection."""
    for i in range(1, sys.n + 1):
        want = (d >> (i - 1)) & 1
        if not any(f.evaluate(c) == want for f in sys.functions[i - 1]):
            return False
    return True


def _dpll(nvars: int, clauses) -> bool:
    """Tiny DPLL with unit propagation; clauses are tuples of nonzero ints."""
    assign = {}

    def solve(clauses):
        # unit propagation
        while True:
            unit = None
            for cl in clauses:
                unassigned = [l for l in cl if abs(l) not in assign]
                if any((assign.get(abs(l)) == (l > 0)) for l in cl if abs(l) in assign):
                    continue
                if not unassigned:
                    return False
                if len(unassigned) == 1:
                    unit = unassigned[0]
                    break
            if unit is None:
                break
            assign[abs(unit)] = unit > 0
        live = []
        branch_var = None
        for cl in clauses:
            if any(assign.get(abs(l)) == (l > 0) for l in cl if abs(l) in assign):
                continue
            rest = tuple(l for l in cl if abs(l) not in assign)
            if not rest:
                return False
            live.append(rest)
            if branch_var is None:
                branch_var = abs(rest[0])
        if not live:
            return True
        for value in (True, False):
            trail = dict(assign)
            assign[branch_var] = value
            if solve(live):
                return True
            assign.clear()
            assign.update(trail)
        return False

    return solve([tuple(cl) for cl in clauses])


def _positions(realization, n: int):
    """Update positions per node, or None for a parallel realization."""
    from .core import SequentialStep
    if isinstance(realization, SequentialStep):
        return {u: p for p, u in enumerate(realization.pi)}
    return None


def two_step_sat_individual(sys: System, c: int, d: int, r1, r2) -> bool:
    """Exact 2-step reachability c -> d for individual selection via SAT.

    Mid-state bits are the SAT variables.  Per node, every combination of
    the referenced mid bits that no choice can extend is forbidden; clause
    width stays within fan-in + 1.  Sound for individual (or one-choice)
    selection because nodes choose independently.
    """
    n = sys.n
    pos1 = _positions(r1, n)
    pos2 = _positions(r2, n)
    clauses = []

    def set_bits(base: int, pairs) -> int:
        for s, v in pairs:
            base = (base | (1 << (s - 1))) if v else (base & ~(1 << (s - 1)))
        return base

    for i in range(1, n + 1):
        row = sys.functions[i - 1]
        # step 1: mid_i must be producible from c.  Sources updated before
        # node i already hold their mid bits (variables); everything else,
        # including node i's own bit, still shows c.
        early = sorted({s for f in row for s in f.srcs
                        if s != i and pos1 is not None and pos1[s] < pos1[i]})
        for combo in itertools.product((0, 1), repeat=len(early) + 1):
            state = set_bits(c, zip(early, combo[:-1]))
            if not any(f.evaluate(state) == combo[-1] for f in row):
                clauses.append(tuple(-s if v else s
                                     for s, v in zip(early + [i], combo)))
        # step 2: d_i must be producible from the mid state.  Sources
        # updated before node i already show their final d bits
        # (constants); the rest, including node i's own bit, are mid
        # variables.
        want = (d >> (i - 1)) & 1
        late = sorted({s for f in row for s in f.srcs
                       if s == i or pos2 is None or pos2[s] >= pos2[i]})
        for combo in itertools.product((0, 1), repeat=len(late)):
            state = set_bits(d, zip(late, combo))
            if not any(f.evaluate(state) == want for f in row):
                if not late:
                    return False
                clauses.append(tuple(-s if v else s for s, v in zip(late, combo)))
    return _dpll(n, clauses)


def reach_within_horizon(instance: ReductionInstance,
                         state_cap: int = DEFAULT_STATE_CAP,
                         depth_cap: int | None = None) -> bool:
    """Does the instance's target lie within `horizon` steps of its start?

    Unbounded horizons run frontier BFS to closure.  For 2-choice unary
    parallel systems the last two steps are decided by 2SAT, which keeps
    the four-level gadgets tractable at full acceptance scale.
    """
    sys, start, target = instance.system, instance.start, instance.target
    if start == target:
        return True
    horizon = instance.horizon if depth_cap is None else depth_cap
    if horizon is None:
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for u in frontier:
                for v in successor_set(sys, u, state_cap):
                    if v == target:
                        return True
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
                        if len(seen) > state_cap:
                            raise EnumerationTooLargeError(
                                f"reachable set exceeds {state_cap}")
            frontier = nxt
        return False

    from .core import FixedPermutation, iter_realizations
    from .graph import _greedy_selection
    fanin = max((len({s for f in row for s in f.srcs}) + 1
                 for row in sys.functions), default=1)
    fast_sat = (isinstance(sys.selection, Individual) and fanin <= 14
                and isinstance(sys.schedule, (Parallel, FixedPermutation,
                                              PermutationList)))
    realizations = list(iter_realizations(sys)) if fast_sat else ()

    layer = {start}
    for depth in range(1, horizon + 1):
        remaining = horizon - depth
        if fast_sat and remaining == 1:
            # layer holds the depth-(depth-1) states with two steps left:
            # decide hits at the last two depths without expanding further
            for u in layer:
                if any(_greedy_selection(sys, u, target, r) is not None
                       for r in realizations):
                    return True
                if any(two_step_sat_individual(sys, u, target, r1, r2)
                       for r1 in realizations for r2 in realizations):
                    return True
            return False
        nxt = set()
        for u in layer:
            succ = successor_set(sys, u, state_cap)
            if target in succ:
                return True
            nxt |= succ
            if len(nxt) > state_cap:
                raise EnumerationTooLargeError(f"frontier exceeds {state_cap}")
        layer = nxt
    return False


def reached_at_depths(instance: ReductionInstance, max_depth: int,
                      state_cap: int = DEFAULT_STATE_CAP) -> list:
    """All depths in [0, max_depth] at which the target occurs on some path."""
    sys, start, target = instance.system, instance.start, instance.target
    hits = []
    layer = {start}
    for depth in range(0, max_depth + 1):
        if target in layer:
            hits.append(depth)
        if depth == max_depth:
            break
        nxt = set()
        for u in layer:
            nxt |= successor_set(sys, u, state_cap)
            if len(nxt) > state_cap:
                raise EnumerationTooLargeError(f"frontier exceeds {state_cap}")
        layer = nxt
    return hits


# ------------------------------------------------------------------
# harness

@dataclass
class ReductionReport:
    gadget_answer: bool
    oracle_answer: bool

    @property
    def agree(self) -> bool:
        return self.gadget_answer == self.oracle_answer


def verify_reduction(instance: ReductionInstance, oracle_answer: bool,
                     state_cap: int = DEFAULT_STATE_CAP) -> ReductionReport:
    """Compare gadget-side reachability against the formula/graph oracle."""
    return ReductionReport(reach_within_horizon(instance, state_cap), oracle_answer)
