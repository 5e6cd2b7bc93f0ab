"""Command-line harness: generate graphs, compute exact statistics, run
estimators, and drive repeated-trial benchmarks.

Exit codes: 0 success, 1 usage or parameter error, 2 I/O or parse error.
All outputs are deterministic for identical command lines (timing columns
stay 0.0 unless --timings is given, which waives byte-determinism).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import replace

from .amplification import median_of_means, replication_plan
from .bench import ALGO_PARAMS, bench_records, records_to_csv, resolve_params, summarize
from .errors import ParameterError, ParseError, ValidationError
from .estimators import (
    ColorfulEstimator,
    OptEstimator,
    TkmfEstimator,
    select_params,
    vertex_estimator,
    wedge_estimator,
)
from .generators import (
    ORDER_POLICIES,
    claimed_triangle_stats,
    gen_book,
    gen_complete,
    gen_disjoint,
    gen_er,
    gen_friendship,
    order_stream,
)
from .graphs import graph_stats, load_edge_list, materialize, to_edge_list_text
from .hashing import mix_seed

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2

# sub-seed index for stream shuffling, disjoint from estimator hash roles
ORDER_SEED_ROLE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_input_flags(sub):
    sub.add_argument("--input", metavar="PATH", help="edge-list file to read")
    sub.add_argument("--stdin", action="store_true", help="read the edge list from stdin")
    sub.add_argument("--permissive", action="store_true",
                     help="drop duplicate edges and self-loops instead of failing")


def _add_stream_flags(sub):
    sub.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    sub.add_argument("--order", choices=ORDER_POLICIES, default="given",
                     help="stream order policy (default given)")


def _read_stream(args):
    if args.stdin:
        text = sys.stdin.read()
    elif args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    else:
        raise ParameterError("no input: pass --input PATH or --stdin")
    return load_edge_list(text, strict=not args.permissive)


def _ordered_edges(stream, args):
    return list(order_stream(stream, args.order, mix_seed(args.seed, ORDER_SEED_ROLE)))


def _print_json(obj):
    print(json.dumps(obj))


def cmd_stats(args) -> int:
    stats = graph_stats(materialize(_read_stream(args)))
    _print_json(stats.to_json_dict())
    return EXIT_OK


def cmd_gen(args) -> int:
    family = args.family
    if family == "book":
        _require(args, "k")
        graph, size = gen_book(args.k, args.pad), args.k
    elif family == "friendship":
        _require(args, "k")
        graph, size = gen_friendship(args.k, args.pad), args.k
    elif family == "disjoint":
        _require(args, "t")
        graph, size = gen_disjoint(args.t, args.pad), args.t
    elif family == "complete":
        _require(args, "n")
        graph, size = gen_complete(args.n), args.n
    else:
        _require(args, "n")
        _require(args, "m")
        graph, size = gen_er(args.n, args.m, args.seed), args.n
    stream = order_stream(graph, args.order, mix_seed(args.seed, ORDER_SEED_ROLE))
    text = to_edge_list_text(stream)
    info = {
        "family": family,
        "n": graph.n,
        "m": graph.m,
        "stats": graph_stats(graph).to_json_dict(),
    }
    claimed = claimed_triangle_stats(family, size)
    info["claimed"] = None if claimed is None else {
        "T": claimed[0], "delta_E": claimed[1], "delta_V": claimed[2],
    }
    if args.output == "-":
        sys.stdout.write(text)
        print(json.dumps(info), file=sys.stderr)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        info["path"] = args.output
        _print_json(info)
    return EXIT_OK


def _require(args, name):
    if getattr(args, name) is None:
        raise ParameterError(f"family {args.family!r} requires --{name}")


def _check_auto_bounds(args):
    for name in ("t_lower", "de_upper", "dv_upper"):
        if getattr(args, name) is None:
            raise ParameterError(f"--auto requires --{name.replace('_', '-')}")
    if args.de_upper > args.dv_upper:
        raise ParameterError(
            f"--de-upper {args.de_upper} > --dv-upper {args.dv_upper} "
            "violates delta_E <= delta_V")
    if args.dv_upper > args.t_lower:
        raise ParameterError(
            f"--dv-upper {args.dv_upper} > --t-lower {args.t_lower} "
            "violates delta_V <= T")


def _single_estimator(args):
    algo = args.algo
    params = resolve_params(algo, p=args.p, q=args.q, k=args.k)
    if algo == "opt":
        return OptEstimator(params["p"], params["q"], args.seed)
    if algo == "wedge":
        return wedge_estimator(params["q"], args.seed)
    if algo == "vertex":
        return vertex_estimator(params["p"], args.seed)
    if algo == "tkmf":
        return TkmfEstimator(params["q"], args.seed)
    return ColorfulEstimator(params["k"], args.seed)


def cmd_estimate(args) -> int:
    edges = _ordered_edges(_read_stream(args), args)
    if args.auto:
        if args.algo != "opt":
            raise ParameterError("--auto applies to the opt estimator only")
        _check_auto_bounds(args)
        p, q = select_params(args.t_lower, args.de_upper, args.dv_upper)
        plan = replication_plan(args.eps, args.delta)
        result = median_of_means(edges, p, q, plan, args.seed)
        out = {
            "algo": "opt",
            "mode": "auto",
            "t_lower": args.t_lower,
            "de_upper": args.de_upper,
            "dv_upper": args.dv_upper,
            "edges_seen": len(edges),
        }
        out.update(result.to_json_dict())
    else:
        estimator = _single_estimator(args)
        estimator.process_stream(edges)
        out = {"algo": args.algo, "mode": "single"}
        out.update(estimator.finalize().to_json_dict())
    _print_json(out)
    return EXIT_OK


def cmd_bench(args) -> int:
    stream = _read_stream(args)
    edges = _ordered_edges(stream, args)
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    if not algos:
        raise ParameterError("--algos must name at least one algorithm")
    for algo in algos:
        if algo not in ALGO_PARAMS:
            raise ParameterError(f"unknown algorithm {algo!r}; expected one of {sorted(ALGO_PARAMS)}")

    stats = None if args.no_exact else graph_stats(materialize(edges))
    exact_t = None if stats is None else stats.triangles

    all_records = []
    for algo in algos:
        params = resolve_params(algo, p=args.p, q=args.q, k=args.k)
        started = time.perf_counter()
        records, _ = bench_records(edges, algo, params, args.trials, args.seed, exact_t)
        if args.timings:
            per_trial = (time.perf_counter() - started) * 1000.0 / args.trials
            records = [replace(rec, elapsed_ms=per_trial) for rec in records]
        all_records.extend(records)

    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(records_to_csv(all_records))

    out = {
        "m": len(edges),
        "trials": args.trials,
        "seed": args.seed,
        "order": args.order,
        "exact": None if stats is None else stats.to_json_dict(),
        "algos": summarize(all_records, stats),
    }
    _print_json(out)
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="tristream",
                     description="Triangle counting for edge streams: exact oracle, "
                                 "sampling estimators, generators, benchmarks.")
    subs = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_stats = subs.add_parser("stats",
                              help="exact graph statistics as JSON")
    _add_input_flags(p_stats)
    p_stats.set_defaults(func=cmd_stats)

    p_gen = subs.add_parser("gen", help="write a generated edge list")
    p_gen.add_argument("--family", required=True,
                       choices=["book", "friendship", "disjoint", "complete", "er"])
    p_gen.add_argument("--k", type=int, help="triangle count for book/friendship")
    p_gen.add_argument("--t", type=int, help="triangle count for disjoint")
    p_gen.add_argument("--n", type=int, help="vertex count for complete/er")
    p_gen.add_argument("--m", type=int, help="edge count for er")
    p_gen.add_argument("--pad", type=int, default=0,
                       help="extra triangle-free pad edges (default 0)")
    p_gen.add_argument("--output", default="-", metavar="PATH",
                       help="output file, '-' for stdout (default)")
    _add_stream_flags(p_gen)
    p_gen.set_defaults(func=cmd_gen)

    p_est = subs.add_parser("estimate",
                            help="run one estimator (or auto median-of-means) over a stream")
    _add_input_flags(p_est)
    _add_stream_flags(p_est)
    p_est.add_argument("--algo", default="opt", choices=sorted(ALGO_PARAMS))
    p_est.add_argument("--p", type=float, help="vertex sampling probability")
    p_est.add_argument("--q", type=float, help="edge sampling probability")
    p_est.add_argument("--k", type=int, help="color count for colorful")
    p_est.add_argument("--auto", action="store_true",
                       help="derive p,q from bounds and amplify by median-of-means")
    p_est.add_argument("--t-lower", type=int, help="lower bound on the triangle count")
    p_est.add_argument("--de-upper", type=int, help="upper bound on triangles per edge")
    p_est.add_argument("--dv-upper", type=int, help="upper bound on triangles per vertex")
    p_est.add_argument("--eps", type=float, default=0.5, help="relative accuracy (default 0.5)")
    p_est.add_argument("--delta", type=float, default=0.25,
                       help="failure probability (default 0.25)")
    p_est.set_defaults(func=cmd_estimate)

    p_bench = subs.add_parser("bench",
                              help="repeated seeded trials with CSV records and a summary")
    _add_input_flags(p_bench)
    _add_stream_flags(p_bench)
    p_bench.add_argument("--algos", default="opt", help="comma-separated algorithm list")
    p_bench.add_argument("--p", type=float, help="vertex sampling probability")
    p_bench.add_argument("--q", type=float, help="edge sampling probability")
    p_bench.add_argument("--k", type=int, help="color count for colorful")
    p_bench.add_argument("--trials", type=int, default=100, help="trial count (default 100)")
    p_bench.add_argument("--csv", metavar="PATH", help="write one record per trial as CSV")
    p_bench.add_argument("--no-exact", action="store_true",
                         help="skip the exact oracle (no rel_error column)")
    p_bench.add_argument("--timings", action="store_true",
                         help="record amortized wall time per trial (waives byte-determinism)")
    p_bench.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"tristream: parameter error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError) as exc:
        print(f"tristream: input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"tristream: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
