"""Command-line front end: instance/graph I/O, solver dispatch, ensemble sweeps.

Exit codes: 0 success (including certified UNSAT), 2 parse error,
3 guard exceeded, 4 generation failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

from . import __version__
from .errors import GenerationError, GuardExceeded, ParseError
from .grover import OracleSpec, grover_search_unknown, oracle_resources, query_cost_count, query_cost_decision
from .hamcycle import hc_to_occupation, parse_graph, solve_hc
from .instances import emit_instance, gen_locked_random, parse_instance
from .reduction import XorInfeasible, reduce_instance
from .solvers import backtrack_count, backtrack_solve, count_enumerate, optimize_permutation, solve_enumerate
from .sweeps import SweepConfig, kernel_sweep, tree_sweep

CSV_SCHEMA_COMMENT = f"# xorsat-reduce v{__version__} schema=1"

KERNEL_CSV_FIELDS = [
    "kind", "problem", "n", "alpha", "sample", "seed", "m", "m_prime", "k", "delta_k",
    "samples", "failures", "mean_delta_k_per_n", "min_delta_k_per_n",
    "max_delta_k_per_n", "max_delta_k",
]
TREE_CSV_FIELDS = [
    "kind", "problem", "n", "alpha", "sample", "seed", "m", "m_prime", "k", "delta_k",
    "solutions", "tree_nodes", "tree_nodes_unoptimized",
    "samples", "failures", "guard_skips", "mean_sqrt_t", "gamma",
    "mean_sqrt_t_unoptimized", "gamma_unoptimized",
]


def _write_text(args, text: str):
    if getattr(args, "out", None):
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _bitstring(values) -> str:
    return "".join(str(int(b)) for b in values)


def _emit_record(args, record: dict):
    if args.json:
        print(json.dumps(record, sort_keys=True))
        return
    for key, value in record.items():
        if isinstance(value, list) and key in ("assignment", "edges"):
            if key == "assignment":
                print(f"{key}: {_bitstring(value)}")
            else:
                print(f"{key}: " + " ".join(f"{u}-{v}" for u, v in value))
        else:
            print(f"{key}: {value}")


def _reduction_fields(instance, outcome) -> dict:
    if isinstance(outcome, XorInfeasible):
        return {"witness": [i + 1 for i in outcome.witness]}
    return {
        "k": outcome.free_count,
        "m_prime": outcome.m_prime,
        "delta_k": instance.m - outcome.m_prime,
    }


def cmd_gen(args) -> int:
    m = args.m if args.m is not None else int(math.floor(args.alpha * args.n))
    instance = gen_locked_random(
        args.n, m, args.p, args.q, negation_prob=args.neg_prob, seed=args.seed
    )
    _write_text(args, emit_instance(instance))
    return 0


def cmd_solve(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    outcome = reduce_instance(instance)
    if isinstance(outcome, XorInfeasible):
        record = {"status": "UNSAT (XOR-certified)", "queries": 0, "n": instance.n,
                  "m": instance.m, **_reduction_fields(instance, outcome)}
        _emit_record(args, record)
        return 0
    result = solve_enumerate(instance, outcome)
    record = {
        "status": "SAT" if result.satisfiable else "UNSAT",
        "queries": result.queries,
        "n": instance.n,
        "m": instance.m,
        **_reduction_fields(instance, outcome),
    }
    if result.satisfiable:
        record["assignment"] = [int(b) for b in result.assignment]
    _emit_record(args, record)
    return 0


def cmd_count(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    outcome = reduce_instance(instance)
    count = count_enumerate(instance, outcome)
    record = {"status": f"COUNT={count}", "count": count, "n": instance.n, "m": instance.m,
              **_reduction_fields(instance, outcome)}
    _emit_record(args, record)
    return 0


def cmd_backtrack(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    outcome = reduce_instance(instance)
    if not isinstance(outcome, XorInfeasible) and args.perm_trials > 0:
        outcome = optimize_permutation(instance, outcome, trials=args.perm_trials, seed=args.seed)
    record = {"n": instance.n, "m": instance.m, **_reduction_fields(instance, outcome)}
    if isinstance(outcome, XorInfeasible):
        record = {"status": "UNSAT (XOR-certified)", "queries": 0, "tree_nodes": 0, **record}
        _emit_record(args, record)
        return 0
    if args.count:
        count, stats = backtrack_count(instance, outcome)
        record = {
            "status": f"COUNT={count}",
            "count": count,
            "tree_nodes": stats.total_nodes,
            "nodes_per_depth": list(stats.nodes_per_depth),
            **record,
        }
    else:
        result, stats = backtrack_solve(instance, outcome)
        record = {
            "status": "SAT" if result.satisfiable else "UNSAT",
            "queries": result.queries,
            "tree_nodes": stats.total_nodes,
            "nodes_per_depth": list(stats.nodes_per_depth),
            **record,
        }
        if result.satisfiable:
            record["assignment"] = [int(b) for b in result.assignment]
    _emit_record(args, record)
    return 0


def cmd_grover(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    outcome = reduce_instance(instance)
    if isinstance(outcome, XorInfeasible):
        record = {"status": "UNSAT (XOR-certified)", "queries": 0, "iterations": 0,
                  "seed": args.seed, "n": instance.n, "m": instance.m,
                  **_reduction_fields(instance, outcome)}
        _emit_record(args, record)
        return 0
    spec = OracleSpec(reduction=outcome, instance=instance)
    result = grover_search_unknown(spec, rng=args.seed)
    record = {
        "status": "SAT" if result.satisfiable else "UNSAT (search-certified)",
        "queries": result.queries,
        "iterations": result.queries,
        "seed": args.seed,
        "n": instance.n,
        "m": instance.m,
        **_reduction_fields(instance, outcome),
    }
    if result.satisfiable:
        record["assignment"] = [int(b) for b in result.assignment]
    _emit_record(args, record)
    return 0


def cmd_grover_cost(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    outcome = reduce_instance(instance)
    record = {"n": instance.n, "m": instance.m, **_reduction_fields(instance, outcome)}
    if isinstance(outcome, XorInfeasible):
        record = {"status": "UNSAT (XOR-certified)", **record}
        _emit_record(args, record)
        return 0
    report = oracle_resources(OracleSpec(reduction=outcome, instance=instance))
    record["query_cost_decision"] = query_cost_decision(instance.n, outcome.m_prime)
    if args.count_solutions:
        v = count_enumerate(instance, outcome)
        record["count"] = v
        record["query_cost_count"] = query_cost_count(instance.n, outcome.m_prime, v)
    else:
        worst = 1 << (instance.n - outcome.m_prime)
        record["query_cost_count_worst_case"] = query_cost_count(instance.n, outcome.m_prime, worst)
    record.update(
        ancillas=report.ancillas,
        gates_module_i=report.gates_module_i,
        gates_module_ii=report.gates_module_ii,
        gates_module_iii=report.gates_module_iii,
        gates_module_iv=report.gates_module_iv,
        total_gates=report.total_gates,
    )
    _emit_record(args, record)
    return 0


def cmd_hc(args) -> int:
    graph = parse_graph(Path(args.graph).read_text())
    instance = hc_to_occupation(graph)
    outcome = reduce_instance(instance)
    record = {"n_nodes": graph.n_nodes, "n_edges": graph.n_edges,
              **_reduction_fields(instance, outcome)}
    values = solve_hc(graph)
    if values is None:
        record = {"status": "NO-HC", **record}
    else:
        edges = [(u + 1, v + 1) for e, (u, v) in enumerate(graph.edges) if values[e]]
        record = {"status": "HC-FOUND", "edges": edges, **record}
    _emit_record(args, record)
    return 0


def _rows_to_csv(fields, rows, summaries) -> str:
    buffer = io.StringIO()
    buffer.write(CSV_SCHEMA_COMMENT + "\n")
    writer = csv.DictWriter(buffer, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    for row in summaries:
        writer.writerow(row)
    return buffer.getvalue()


def _sweep_config(args) -> SweepConfig:
    n_list = tuple(int(tok) for tok in args.n_list.split(","))
    return SweepConfig(
        problem=args.problem,
        n_list=n_list,
        alpha=args.alpha,
        samples=args.samples,
        seed=args.seed,
        negation_prob=args.neg_prob,
        perm_trials=args.perm_trials,
        p=args.p,
        q=args.q,
        threads=args.threads,
    )


def cmd_sweep_kernel(args) -> int:
    rows, summaries = kernel_sweep(_sweep_config(args))
    _write_text(args, _rows_to_csv(KERNEL_CSV_FIELDS, rows, summaries))
    return 0


def cmd_sweep_tree(args) -> int:
    rows, summaries = tree_sweep(_sweep_config(args))
    _write_text(args, _rows_to_csv(TREE_CSV_FIELDS, rows, summaries))
    return 0


def _add_common(parser, out=True):
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    if out:
        parser.add_argument("--out", help="write output to a file instead of stdout")
    parser.add_argument("--threads", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xorsat-reduce",
        description="Occupation-problem toolkit: parity reduction, exact solvers, "
        "Grover-search simulation, Hamiltonian-cycle reduction.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a random locked instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None, help="clause count (default floor(alpha*n))")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--neg-prob", type=float, default=0.5)
    _add_common(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("solve", help="decide satisfiability by reduced enumeration")
    p.add_argument("instance")
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("count", help="count solutions by reduced enumeration")
    p.add_argument("instance")
    _add_common(p)
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("backtrack", help="backtracking solver with tree statistics")
    p.add_argument("instance")
    p.add_argument("--count", action="store_true", help="exhaust the tree and count solutions")
    p.add_argument("--perm-trials", type=int, default=0, help="optimize the free block first")
    _add_common(p)
    p.set_defaults(func=cmd_backtrack)

    p = sub.add_parser("grover", help="simulated Grover search with unknown solution count")
    p.add_argument("instance")
    _add_common(p)
    p.set_defaults(func=cmd_grover)

    p = sub.add_parser("grover-cost", help="query-cost formulas and oracle resource model")
    p.add_argument("instance")
    p.add_argument("--count-solutions", action="store_true",
                   help="count solutions exactly for the counting cost")
    _add_common(p)
    p.set_defaults(func=cmd_grover_cost)

    p = sub.add_parser("hc", help="find a Hamiltonian cycle via the 2-in-degree reduction")
    p.add_argument("graph")
    _add_common(p)
    p.set_defaults(func=cmd_hc)

    for name, func, trials in (("sweep-kernel", cmd_sweep_kernel, 0), ("sweep-tree", cmd_sweep_tree, 100)):
        p = sub.add_parser(name, help=f"{name.replace('-', ' ')} ensemble sweep (CSV)")
        p.add_argument("--problem", choices=["occ1in3", "occ2in4", "custom"], default="occ1in3")
        p.add_argument("--n-list", required=True, help="comma-separated variable counts")
        p.add_argument("--alpha", type=float, required=True)
        p.add_argument("--samples", type=int, default=1000)
        p.add_argument("--neg-prob", type=float, default=0.5)
        p.add_argument("--perm-trials", type=int, default=trials)
        p.add_argument("--p", type=int, default=None)
        p.add_argument("--q", type=int, default=None)
        _add_common(p)
        p.set_defaults(func=func)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except GuardExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except GenerationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
