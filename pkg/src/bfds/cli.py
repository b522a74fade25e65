"""Command-line interface.

Exit codes: 0 = computed (the answer may be yes or no), 2 = input error,
3 = a resource cap or search budget was exceeded.  Output is deterministic
for identical inputs: a `result key value` record stream followed by a
human-readable summary.  BFDS_STATE_CAP and BFDS_DFS_BUDGET override the
global resource caps.
"""

from __future__ import annotations

import argparse
import os
import random
import sys as sysmod

from . import analysis, permsolve, reductions, transforms
from .core import (BfdsError, EnumerationTooLargeError, ModelMismatchError,
                   ResourceBudgetError, SelectionError, StructureError,
                   config_from_str, config_to_str, DEFAULT_STATE_CAP)
from .fileformat import (ParseError, emit_cnf, emit_embedding, emit_graph_dump,
                         emit_instance, emit_system, parse_cnf, parse_embedding,
                         parse_graph, parse_instance, parse_system)
from .graph import ConfigGraph, build_graph, edge_exists
from .analysis import DEFAULT_DFS_BUDGET


def _state_cap() -> int:
    return int(os.environ.get("BFDS_STATE_CAP", DEFAULT_STATE_CAP))


def _dfs_budget() -> int:
    return int(os.environ.get("BFDS_DFS_BUDGET", DEFAULT_DFS_BUDGET))


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(0, f"cannot read {path}: {exc}")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _load_system(path: str):
    return parse_system(_read(path))


def _config(arg: str, n: int) -> int:
    if len(arg) != n:
        raise ParseError(0, f"configuration {arg!r} needs exactly {n} bits")
    return config_from_str(arg)


def _emit(records: list, summary: str) -> None:
    for key, value in records:
        print(f"result {key} {value}")
    print(summary)


def _yesno(flag: bool) -> str:
    return "yes" if flag else "no"


# ------------------------------------------------------------------
# analyze

def _cmd_analyze(args) -> int:
    system = _load_system(args.system)
    graph = ConfigGraph(system, state_cap=_state_cap())
    n = system.n
    problem = args.problem
    need_pair = problem in ("reachability", "t-reachability", "min-path",
                            "max-simple-path", "path-intersection",
                            "count-simple-paths")
    need_single = problem in ("tail-length", "garden-of-eden", "t-garden-of-eden",
                              "count-predecessors", "cycle-point", "min-cycle",
                              "max-simple-cycle", "count-cycles-through",
                              "is-fixed-point", "is-complete-fixed-point",
                              "count-subsequent")
    c = _config(args.src, n) if args.src is not None else None
    d = _config(args.dst, n) if args.dst is not None else None
    if (need_pair or need_single) and c is None:
        raise ParseError(0, f"{problem} needs --from")
    if need_pair and d is None:
        raise ParseError(0, f"{problem} needs --to")

    budget = _dfs_budget()
    records: list = []
    if problem == "reachability":
        path = analysis.reachable_any(graph, c, d)
        records.append(("answer", _yesno(path is not None)))
        if path is not None:
            records.append(("witness-path",
                            " ".join(config_to_str(x, n) for x in path)))
        summary = f"{_yesno(path is not None)}: nontrivial path from {args.src} to {args.dst}"
    elif problem == "t-reachability":
        path = analysis.reachable_within(graph, c, d, args.t)
        records.append(("answer", _yesno(path is not None)))
        if path is not None:
            records.append(("witness-path",
                            " ".join(config_to_str(x, n) for x in path)))
        summary = f"{_yesno(path is not None)}: path of length <= {args.t}"
    elif problem == "min-path":
        length = analysis.min_path_len(graph, c, d)
        records.append(("length", "missing" if length is None else length))
        summary = f"shortest nontrivial path length: {length}"
    elif problem == "max-simple-path":
        length = analysis.max_simple_path_len(graph, c, d, budget=budget)
        records.append(("length", "missing" if length is None else length))
        summary = f"longest simple path length: {length}"
    elif problem == "path-intersection":
        flag = analysis.path_intersection(graph, c, d)
        records.append(("answer", _yesno(flag)))
        summary = f"{_yesno(flag)}: paths intersect"
    elif problem == "count-simple-paths":
        count = analysis.count_simple_paths(graph, c, d, budget=budget)
        records.append(("count", count))
        summary = f"simple paths from {args.src} to {args.dst}: {count}"
    elif problem == "tail-length":
        length = analysis.tail_length(graph, c)
        records.append(("length", length))
        summary = f"tail length: {length}"
    elif problem == "garden-of-eden":
        explicit = build_graph(system, _state_cap())
        flag = analysis.is_garden_of_eden(explicit, c)
        records.append(("answer", _yesno(flag)))
        summary = f"{_yesno(flag)}: Garden of Eden"
    elif problem == "t-garden-of-eden":
        explicit = build_graph(system, _state_cap())
        flag = analysis.t_garden_of_eden(explicit, c, args.t)
        records.append(("answer", _yesno(flag)))
        summary = f"{_yesno(flag)}: Garden of Eden at exactly {args.t} steps"
    elif problem == "count-predecessors":
        explicit = build_graph(system, _state_cap())
        count = analysis.count_predecessors(explicit, c)
        records.append(("count", count))
        summary = f"predecessors: {count}"
    elif problem == "count-gardens":
        explicit = build_graph(system, _state_cap())
        count = analysis.count_gardens(explicit)
        records.append(("count", count))
        summary = f"Gardens of Eden: {count}"
    elif problem == "cycle-point":
        flag = analysis.is_cycle_point(graph, c)
        records.append(("answer", _yesno(flag)))
        summary = f"{_yesno(flag)}: on a cycle"
    elif problem == "min-cycle":
        length = analysis.min_cycle_len(graph, c)
        records.append(("length", "missing" if length is None else length))
        summary = f"shortest cycle through: {length}"
    elif problem == "max-simple-cycle":
        length = analysis.max_simple_cycle_len(graph, c, budget=budget)
        records.append(("length", "missing" if length is None else length))
        summary = f"longest simple cycle through: {length}"
    elif problem == "count-cycles-through":
        count = analysis.count_simple_cycles_through(graph, c, budget=budget)
        records.append(("count", count))
        summary = f"simple cycles through {args.src}: {count}"
    elif problem == "count-cycles":
        explicit = build_graph(system, _state_cap())
        count = analysis.count_simple_cycles_global(explicit, budget=budget)
        records.append(("count", count))
        summary = f"simple cycles: {count}"
    elif problem == "fixed-point":
        explicit = build_graph(system, _state_cap())
        fps = analysis.fixed_points(explicit)
        records.append(("answer", _yesno(bool(fps))))
        if fps:
            records.append(("witness", config_to_str(fps[0], n)))
        summary = f"{_yesno(bool(fps))}: fixed point exists"
    elif problem == "is-fixed-point":
        flag = analysis.is_fixed_point(graph, c)
        records.append(("answer", _yesno(flag)))
        summary = f"{_yesno(flag)}: fixed point"
    elif problem == "is-complete-fixed-point":
        flag = analysis.is_complete_fixed_point(graph, c)
        records.append(("answer", _yesno(flag)))
        summary = f"{_yesno(flag)}: complete fixed point"
    elif problem == "complete-fixed-point-exists":
        explicit = build_graph(system, _state_cap())
        cfps = analysis.complete_fixed_points(explicit)
        records.append(("answer", _yesno(bool(cfps))))
        if cfps:
            records.append(("witness", config_to_str(cfps[0], n)))
        summary = f"{_yesno(bool(cfps))}: complete fixed point exists"
    elif problem == "count-fixed-points":
        explicit = build_graph(system, _state_cap())
        count = analysis.count_fixed_points(explicit)
        records.append(("count", count))
        summary = f"fixed points: {count}"
    elif problem == "count-complete-fixed-points":
        explicit = build_graph(system, _state_cap())
        count = analysis.count_complete_fixed_points(explicit)
        records.append(("count", count))
        summary = f"complete fixed points: {count}"
    elif problem == "count-subsequent":
        count = analysis.count_subsequent(graph, c)
        records.append(("count", count))
        summary = f"subsequent configurations: {count}"
    else:
        raise ParseError(0, f"unknown problem {problem!r}")
    _emit(records, summary)
    return 0


# ------------------------------------------------------------------
# other commands

def _cmd_graph(args) -> int:
    system = _load_system(args.system)
    graph = build_graph(system, _state_cap())
    dump = emit_graph_dump(graph)
    if args.out:
        _write(args.out, dump)
        print(f"wrote {args.out}")
    else:
        sysmod.stdout.write(dump)
    return 0


def _cmd_transform(args) -> int:
    system = _load_system(args.system)
    fn = transforms.TRANSFORMS.get(args.name)
    if fn is None:
        raise ParseError(0, f"unknown transform {args.name!r}; "
                            f"choose from {sorted(transforms.TRANSFORMS)}")
    result = fn(system)
    _write(args.out, emit_system(result.system))
    print(f"result nodes {result.system.n}")
    print(f"result choices {result.system.k}")
    print(f"result claimed-expansion {result.claimed_expansion}")
    if args.embedding_out:
        _write(args.embedding_out, emit_embedding(result.embedding))
    print(f"wrote {args.out}")
    return 0


_REDUCERS = {
    "3sat-t3": (reductions.reduce_3sat_unary_t3, 3),
    "2sat-t2": (reductions.reduce_2sat_t2, 2),
    "3sat-k3-t2": (reductions.reduce_3sat_k3_t2, 3),
    "parsimonious": (reductions.reduce_parsimonious_count, 3),
    "coordinated": (reductions.reduce_3sat_coordinated, 3),
    "permlist": (reductions.reduce_3sat_permlist, 3),
}


def _cmd_reduce(args) -> int:
    if args.name == "graph-iso":
        if not args.graph_g or not args.graph_h:
            raise ParseError(0, "graph-iso needs --graph-g and --graph-h")
        g = parse_graph(_read(args.graph_g))
        h = parse_graph(_read(args.graph_h))
        instance = reductions.reduce_graph_iso(g, h)
    elif args.name == "near-connected":
        if args.n is None:
            raise ParseError(0, "near-connected needs --n")
        system = reductions.build_near_connected(args.n)
        _write(args.out, emit_system(system))
        print(f"result nodes {system.n}")
        print(f"wrote {args.out}")
        return 0
    elif args.name == "cyclic-connected":
        if args.n is None:
            raise ParseError(0, "cyclic-connected needs --n")
        system = reductions.build_cyclic_connected(args.n)
        _write(args.out, emit_system(system))
        print(f"result nodes {system.n}")
        print(f"wrote {args.out}")
        return 0
    elif args.name in _REDUCERS:
        if not args.cnf:
            raise ParseError(0, f"{args.name} needs --cnf")
        formula = parse_cnf(_read(args.cnf))
        fn, width = _REDUCERS[args.name]
        instance = fn(formula)
    else:
        raise ParseError(0, f"unknown reduction {args.name!r}")
    _write(args.out, emit_instance(instance))
    print(f"result nodes {instance.system.n}")
    print(f"result horizon {'unbounded' if instance.horizon is None else instance.horizon}")
    print(f"wrote {args.out}")
    return 0


def _cmd_verify_embedding(args) -> int:
    source = _load_system(args.source)
    target = _load_system(args.target)
    embedding = parse_embedding(_read(args.embedding))
    report = transforms.verify_embedding(source, target, embedding,
                                         state_cap=_state_cap())
    records = [("is-embedding", _yesno(report.is_embedding))]
    if report.expansion is not None:
        records.append(("expansion", report.expansion))
    if report.counterexample is not None:
        a, b, detail = report.counterexample
        records.append(("counterexample",
                        f"{config_to_str(a, source.n)} {config_to_str(b, source.n)} {detail}"))
    _emit(records, f"{_yesno(report.is_embedding)}: embedding verified"
          if report.is_embedding else "no: embedding violated")
    return 0


def _cmd_solve_perm(args) -> int:
    system = _load_system(args.system)
    c = _config(args.src, system.n)
    d = _config(args.dst, system.n)
    records: list = []
    if system.k == 1:
        pi = permsolve.perm_exists_1choice_unary(system, c, d)
        found = pi is not None
        if found:
            records.append(("permutation", " ".join(map(str, pi))))
    elif args.individual:
        hit = permsolve.perm_exists_individual_search(system, c, d,
                                                      budget=_dfs_budget())
        found = hit is not None
        if found:
            pi, J = hit
            records.append(("permutation", " ".join(map(str, pi))))
            records.append(("selection", " ".join(map(str, J))))
    else:
        hit = permsolve.perm_exists_coordinated(system, c, d)
        found = hit is not None
        if found:
            pi, j = hit
            records.append(("permutation", " ".join(map(str, pi))))
            records.append(("column", j))
    records.insert(0, ("answer", _yesno(found)))
    _emit(records, f"{_yesno(found)}: realizing permutation exists")
    return 0


def _cmd_robust(args) -> int:
    system = _load_system(args.system)
    c = _config(args.src, system.n)
    d = _config(args.dst, system.n)
    if args.method == "fast":
        flag = permsolve.robust_one_step_fast(system, c, d)
    elif args.method == "brute":
        flag = permsolve.robust_reach_bruteforce(system, c, d, args.t)
    else:
        flag = (permsolve.robust_one_step(system, c, d) if args.t == 1
                else permsolve.robust_reach_bruteforce(system, c, d, args.t))
    _emit([("answer", _yesno(flag))],
          f"{_yesno(flag)}: robustly reaches target in {args.t} steps")
    return 0


def _cmd_oracle_check(args) -> int:
    from .randsys import random_system, random_unary_system
    from .core import successors, successor_arcs, execute, action_space_size
    rng = random.Random(args.seed)
    failures = 0
    for trial in range(args.trials):
        n = rng.randint(1, 4)
        k = rng.randint(1, 2)
        schedule = rng.choice(("parallel", "fixed-permutation",
                               "permutation-list", "arbitrary-permutation",
                               "asynchronous"))
        selection = rng.choice(("fixed", "coordinated", "individual",
                                "semi-coordinated"))
        system = random_system(rng, n, k, schedule, selection)
        if action_space_size(system) > 1 << 14:
            continue
        c = rng.randrange(1 << n)
        succ = successors(system, c)
        arcs = successor_arcs(system, c)
        ok = set(succ) == set(arcs)
        ok = ok and all(len(succ[x]) == arcs[x][0] for x in succ)
        ok = ok and all(execute(system, c, w) == x for x, (_, w) in arcs.items())
        if not ok:
            failures += 1
    print(f"result trials {args.trials}")
    print(f"result failures {failures}")
    print(("ok" if failures == 0 else "FAILED")
          + f": successor coherence over {args.trials} random systems")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bfds",
        description="multi-choice Boolean dynamical systems toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="structural configuration-graph questions")
    p.add_argument("problem")
    p.add_argument("--system", required=True)
    p.add_argument("--from", dest="src")
    p.add_argument("--to", dest="dst")
    p.add_argument("--t", type=int, default=1)
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("graph", help="dump the explicit configuration graph")
    p.add_argument("--system", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_graph)

    p = sub.add_parser("transform", help="cross-model simulation transforms")
    p.add_argument("name")
    p.add_argument("--system", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--embedding-out")
    p.set_defaults(fn=_cmd_transform)

    p = sub.add_parser("reduce", help="compile CNF/graph inputs into instances")
    p.add_argument("name")
    p.add_argument("--cnf")
    p.add_argument("--graph-g")
    p.add_argument("--graph-h")
    p.add_argument("--n", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=_cmd_reduce)

    p = sub.add_parser("verify-embedding", help="check an embedding exhaustively")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--embedding", required=True)
    p.set_defaults(fn=_cmd_verify_embedding)

    p = sub.add_parser("solve-perm", help="one-step permutation existence")
    p.add_argument("--system", required=True)
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--individual", action="store_true",
                   help="use the individual-selection arc search")
    p.set_defaults(fn=_cmd_solve_perm)

    p = sub.add_parser("robust", help="robust t-step reachability")
    p.add_argument("--system", required=True)
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.add_argument("--t", type=int, default=1)
    p.add_argument("--method", choices=("auto", "fast", "brute"), default="auto")
    p.set_defaults(fn=_cmd_robust)

    p = sub.add_parser("oracle-check", help="random successor-coherence self-test")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(fn=_cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, StructureError, SelectionError, ModelMismatchError) as exc:
        print(f"error: {exc}", file=sysmod.stderr)
        return 2
    except (EnumerationTooLargeError, ResourceBudgetError) as exc:
        print(f"resource limit: {exc}", file=sysmod.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
