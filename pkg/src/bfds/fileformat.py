"""Text formats: system files, reduction instances, CNF, graphs, embeddings.

System files round-trip losslessly: parse -> emit produces a canonical
normalization (fixed field order, functions sorted by node then choice,
single spaces), and emitting a normalized file is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import (AND, CONST, NEG, OR, POS, TABLE, ArbitraryPermutation,
                   Asynchronous, BfdsError, Coordinated, Fixed,
                   FixedPermutation, Individual, NodeFunction, Parallel,
                   PermutationList, SemiCoordinated, StructureError, System,
                   config_from_str, config_to_str)


class ParseError(BfdsError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


_SELECTION_NAMES = {
    "fixed": Fixed,
    "coordinated": Coordinated,
    "individual": Individual,
    "semi-coordinated": SemiCoordinated,
}

_SCHEDULE_NAMES = {
    "parallel": Parallel,
    "fixed-permutation": FixedPermutation,
    "permutation-list": PermutationList,
    "arbitrary-permutation": ArbitraryPermutation,
    "asynchronous": Asynchronous,
}


def _meaningful_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line_no, line


def _parse_int(tok: str, line_no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line_no, f"{what} must be an integer, got {tok!r}")


def parse_system(text: str) -> System:
    """Parse a system file; raises ParseError naming the first violation."""
    n = k = None
    selection_name = None
    schedule_name = None
    blocks = []
    permutations = []
    functions: dict = {}
    last_line = 0

    for line_no, line in _meaningful_lines(text):
        last_line = line_no
        toks = line.split()
        key = toks[0]
        if key == "n":
            n = _parse_int(toks[1], line_no, "n")
        elif key == "k":
            k = _parse_int(toks[1], line_no, "k")
        elif key == "selection":
            if len(toks) != 2 or toks[1] not in _SELECTION_NAMES:
                raise ParseError(line_no, f"unknown selection {line!r}")
            selection_name = toks[1]
        elif key == "block":
            blocks.append(tuple(_parse_int(t, line_no, "block index") for t in toks[1:]))
        elif key == "schedule":
            if len(toks) != 2 or toks[1] not in _SCHEDULE_NAMES:
                raise ParseError(line_no, f"unknown schedule {line!r}")
            schedule_name = toks[1]
        elif key == "permutation":
            permutations.append(tuple(_parse_int(t, line_no, "permutation entry")
                                      for t in toks[1:]))
        elif key == "function":
            if len(toks) < 4:
                raise ParseError(line_no, "function needs node, choice, and a kind")
            i = _parse_int(toks[1], line_no, "node index")
            j = _parse_int(toks[2], line_no, "choice index")
            f = _parse_function(toks[3:], line_no)
            if (i, j) in functions:
                raise ParseError(line_no, f"duplicate function for node {i} choice {j}")
            functions[(i, j)] = f
        else:
            raise ParseError(line_no, f"unknown field {key!r}")

    def fail(msg: str):
        raise ParseError(last_line or 1, msg)

    if n is None:
        fail("missing field n")
    if k is None:
        fail("missing field k")
    if selection_name is None:
        fail("missing selection")
    if schedule_name is None:
        fail("missing schedule")

    if selection_name == "semi-coordinated":
        if not blocks:
            fail("semi-coordinated selection needs block lines")
        selection = SemiCoordinated(tuple(tuple(sorted(b)) for b in blocks))
    else:
        if blocks:
            fail(f"block lines are only valid for semi-coordinated selection")
        selection = _SELECTION_NAMES[selection_name]()

    if schedule_name == "fixed-permutation":
        if len(permutations) != 1:
            fail("fixed-permutation needs exactly one permutation line")
        schedule = FixedPermutation(permutations[0])
    elif schedule_name == "permutation-list":
        if not permutations:
            fail("permutation-list needs at least one permutation line")
        schedule = PermutationList(tuple(permutations))
    else:
        if permutations:
            fail(f"permutation lines are only valid for permutation schedules")
        schedule = _SCHEDULE_NAMES[schedule_name]()

    grid = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, k + 1):
            f = functions.pop((i, j), None)
            if f is None:
                fail(f"missing function for node {i} choice {j}")
            row.append(f)
        grid.append(tuple(row))
    if functions:
        (i, j) = sorted(functions)[0]
        fail(f"function for node {i} choice {j} is outside the {n} x {k} grid")

    try:
        return System(n, k, tuple(grid), selection, schedule)
    except StructureError as exc:
        raise ParseError(last_line or 1, str(exc))


def _parse_function(toks, line_no: int) -> NodeFunction:
    kind = toks[0]
    args = toks[1:]
    if kind == "const":
        if len(args) != 1 or args[0] not in ("0", "1"):
            raise ParseError(line_no, "const takes a single 0/1 argument")
        return NodeFunction(CONST, (), (), int(args[0]))
    if kind in ("pos", "neg"):
        if len(args) != 1:
            raise ParseError(line_no, f"{kind} takes a single source index")
        return NodeFunction(kind, (_parse_int(args[0], line_no, "source"),))
    if kind in ("or", "and"):
        if not args:
            raise ParseError(line_no, f"{kind} needs at least one source")
        return NodeFunction(kind, tuple(_parse_int(a, line_no, "source") for a in args))
    if kind == "table":
        if ":" not in args:
            raise ParseError(line_no, "table needs `srcs : bits`")
        sep = args.index(":")
        srcs = tuple(_parse_int(a, line_no, "source") for a in args[:sep])
        bits_toks = args[sep + 1:]
        if len(bits_toks) != 1 or any(ch not in "01" for ch in bits_toks[0]):
            raise ParseError(line_no, "table bits must be a single 0/1 string")
        return NodeFunction(TABLE, srcs, tuple(int(ch) for ch in bits_toks[0]))
    raise ParseError(line_no, f"unknown function kind {kind!r}")


def _emit_function(f: NodeFunction) -> str:
    if f.kind == CONST:
        return f"const {f.bit}"
    if f.kind in (POS, NEG):
        return f"{f.kind} {f.srcs[0]}"
    if f.kind in (OR, AND):
        return f"{f.kind} " + " ".join(str(s) for s in f.srcs)
    bits = "".join(str(b) for b in f.table)
    return "table " + " ".join(str(s) for s in f.srcs) + " : " + bits


def emit_system(sys: System) -> str:
    lines = [f"n {sys.n}", f"k {sys.k}"]
    sel = sys.selection
    if isinstance(sel, Fixed):
        lines.append("selection fixed")
    elif isinstance(sel, Coordinated):
        lines.append("selection coordinated")
    elif isinstance(sel, Individual):
        lines.append("selection individual")
    else:
        lines.append("selection semi-coordinated")
        for block in sel.blocks:
            lines.append("block " + " ".join(str(i) for i in block))
    sch = sys.schedule
    if isinstance(sch, Parallel):
        lines.append("schedule parallel")
    elif isinstance(sch, FixedPermutation):
        lines.append("schedule fixed-permutation")
        lines.append("permutation " + " ".join(str(i) for i in sch.pi))
    elif isinstance(sch, PermutationList):
        lines.append("schedule permutation-list")
        for pi in sch.pis:
            lines.append("permutation " + " ".join(str(i) for i in pi))
    elif isinstance(sch, ArbitraryPermutation):
        lines.append("schedule arbitrary-permutation")
    else:
        lines.append("schedule asynchronous")
    for i in range(1, sys.n + 1):
        for j in range(1, sys.k + 1):
            lines.append(f"function {i} {j} " + _emit_function(sys.function(i, j)))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------
# reduction instances: system file plus start=/target=/horizon= trailer

def emit_instance(instance) -> str:
    n = instance.system.n
    parts = [emit_system(instance.system)]
    parts.append(f"start={config_to_str(instance.start, n)}\n")
    parts.append(f"target={config_to_str(instance.target, n)}\n")
    horizon = instance.horizon
    parts.append(f"horizon={'unbounded' if horizon is None else horizon}\n")
    return "".join(parts)


def parse_instance(text: str):
    from .reductions import ReductionInstance
    system_lines = []
    trailer = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if "=" in stripped and stripped.split("=", 1)[0] in ("start", "target", "horizon"):
            key, value = stripped.split("=", 1)
            trailer[key] = (value, line_no)
        else:
            system_lines.append(raw)
    sys = parse_system("\n".join(system_lines))
    for key in ("start", "target", "horizon"):
        if key not in trailer:
            raise ParseError(len(text.splitlines()), f"missing {key}= trailer line")
    start_s, ln = trailer["start"]
    if len(start_s) != sys.n:
        raise ParseError(ln, f"start configuration must have {sys.n} bits")
    target_s, ln = trailer["target"]
    if len(target_s) != sys.n:
        raise ParseError(ln, f"target configuration must have {sys.n} bits")
    horizon_s, ln = trailer["horizon"]
    horizon = None if horizon_s == "unbounded" else _parse_int(horizon_s, ln, "horizon")
    return ReductionInstance(sys, config_from_str(start_s),
                             config_from_str(target_s), horizon)


# ------------------------------------------------------------------
# CNF formulas (DIMACS-style clause list)

def parse_cnf(text: str):
    from .reductions import CnfFormula
    nvars = nclauses = None
    clauses = []
    for line_no, line in _meaningful_lines(text):
        if line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError(line_no, "header must be `p cnf <vars> <clauses>`")
            nvars = _parse_int(toks[2], line_no, "variable count")
            nclauses = _parse_int(toks[3], line_no, "clause count")
            continue
        if nvars is None:
            raise ParseError(line_no, "clause before `p cnf` header")
        lits = [_parse_int(t, line_no, "literal") for t in toks]
        if not lits or lits[-1] != 0:
            raise ParseError(line_no, "clause lines must end with 0")
        lits = lits[:-1]
        if not lits:
            raise ParseError(line_no, "empty clause")
        for lit in lits:
            if lit == 0 or abs(lit) > nvars:
                raise ParseError(line_no, f"literal {lit} out of range")
        clauses.append(tuple(lits))
    if nvars is None:
        raise ParseError(1, "missing `p cnf` header")
    if nclauses is not None and nclauses != len(clauses):
        raise ParseError(1, f"header promises {nclauses} clauses, found {len(clauses)}")
    return CnfFormula(nvars, tuple(clauses))


def emit_cnf(formula) -> str:
    lines = [f"p cnf {formula.nvars} {len(formula.clauses)}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause) + " 0")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------
# simple graphs (edge-list text)

@dataclass(frozen=True)
class SimpleGraph:
    nodes: int
    edges: frozenset  # frozenset of 2-element frozensets

    @staticmethod
    def from_edge_list(nodes: int, pairs) -> "SimpleGraph":
        edges = set()
        for u, v in pairs:
            if u == v or not (1 <= u <= nodes and 1 <= v <= nodes):
                raise StructureError(f"bad edge ({u}, {v}) on {nodes} nodes")
            edges.add(frozenset((u, v)))
        return SimpleGraph(nodes, frozenset(edges))

    def has_edge(self, u: int, v: int) -> bool:
        return frozenset((u, v)) in self.edges


def parse_graph(text: str) -> SimpleGraph:
    nodes = None
    pairs = []
    for line_no, line in _meaningful_lines(text):
        toks = line.split()
        if toks[0] == "nodes":
            nodes = _parse_int(toks[1], line_no, "node count")
        else:
            if nodes is None:
                raise ParseError(line_no, "edge before `nodes` line")
            if len(toks) != 2:
                raise ParseError(line_no, "edges are `u v` lines")
            u = _parse_int(toks[0], line_no, "endpoint")
            v = _parse_int(toks[1], line_no, "endpoint")
            try:
                pairs.append((u, v))
            except StructureError as exc:
                raise ParseError(line_no, str(exc))
    if nodes is None:
        raise ParseError(1, "missing `nodes` line")
    try:
        return SimpleGraph.from_edge_list(nodes, pairs)
    except StructureError as exc:
        raise ParseError(1, str(exc))


def emit_graph(g: SimpleGraph) -> str:
    lines = [f"nodes {g.nodes}"]
    for edge in sorted(tuple(sorted(e)) for e in g.edges):
        lines.append(f"{edge[0]} {edge[1]}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------------
# embedding descriptors

def emit_embedding(emb) -> str:
    lines = [f"rule {emb.rule}"]
    if emb.params:
        lines.append("params " + " ".join(str(p) for p in emb.params))
    if emb.target_rule:
        lines.append(f"target-rule {emb.target_rule}")
        if emb.target_params:
            lines.append("target-params " + " ".join(str(p) for p in emb.target_params))
    return "\n".join(lines) + "\n"


def parse_embedding(text: str):
    from .transforms import Embedding
    rule = target_rule = None
    params = target_params = ()
    for line_no, line in _meaningful_lines(text):
        toks = line.split()
        if toks[0] == "rule":
            rule = toks[1]
        elif toks[0] == "params":
            params = tuple(_parse_int(t, line_no, "param") for t in toks[1:])
        elif toks[0] == "target-rule":
            target_rule = toks[1]
        elif toks[0] == "target-params":
            target_params = tuple(_parse_int(t, line_no, "param") for t in toks[1:])
        else:
            raise ParseError(line_no, f"unknown embedding field {toks[0]!r}")
    if rule is None:
        raise ParseError(1, "missing rule line")
    return Embedding(rule, params, target_rule or "", target_params)


# ------------------------------------------------------------------
# configuration-graph dump

def emit_graph_dump(graph) -> str:
    """One line per arc: `<src-bits> <dst-bits> <label-count>`."""
    n = graph.n
    lines = []
    for c in graph.all_configs():
        arcs = graph.arcs(c)
        for d in sorted(arcs):
            lines.append(f"{config_to_str(c, n)} {config_to_str(d, n)} {arcs[d].count}")
    return "\n".join(lines) + "\n"
