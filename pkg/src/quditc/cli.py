"""Command-line interface.

Subcommands:
  compile   decompose a unitary file onto a graph file (adaptive or qr)
  bench     run the benchmark suite and write records/CSV
  verify    check a sequence file against a unitary file
  arch      dump the shipped example architectures as graph files

Exit codes: 0 success, 1 verification failure / unexpected error,
2 invalid input, 3 no solution within the search budget.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .adaptive import NoSolutionError, SearchConfig, adaptive_compile
from .bench import (
    architectures_for_dim,
    format_table,
    run_suite,
    summarize,
    write_records,
    write_summary_csv,
)
from .cost import DEFAULT_MODEL, CostParams
from .gates import save_sequence
from .graph import load_graph, save_graph
from .linalg import load_unitary
from .qr import qr_decompose
from .verify import verify_sequence_document

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_NO_SOLUTION = 3


def _add_cost_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="JSON config file with cost.* keys")
    parser.add_argument("--cost-base-factor", type=float, help="override cost.base_factor")
    parser.add_argument("--cost-calibrated-angle", type=float,
                        help="override cost.calibrated_angle (units of pi)")
    parser.add_argument("--cost-angle-floor", type=float,
                        help="override cost.angle_floor (units of pi)")
    parser.add_argument("--cost-model", help="override cost.model (registered model name)")


def _cost_params(args) -> CostParams:
    values = {"base_factor": 1e-4, "calibrated_angle": 0.5, "angle_floor": 0.25,
              "model": DEFAULT_MODEL}
    if args.config:
        with open(args.config) as fh:
            doc = json.load(fh)
        section = doc.get("cost", {})
        for key in values:
            if key in section:
                values[key] = type(values[key])(section[key])
    for key, flag in [("base_factor", "cost_base_factor"),
                      ("calibrated_angle", "cost_calibrated_angle"),
                      ("angle_floor", "cost_angle_floor"),
                      ("model", "cost_model")]:
        override = getattr(args, flag)
        if override is not None:
            values[key] = override
    return CostParams(**values)


def _bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def cmd_compile(args) -> int:
    try:
        u = load_unitary(args.unitary)
        graph = load_graph(args.graph)
        params = _cost_params(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID

    try:
        if args.mode == "qr":
            result = qr_decompose(u, graph, params)
            stats = {}
        else:
            config = SearchConfig(
                cost_limit_factor=args.cost_limit_factor,
                cost_limit=args.cost_limit,
                threshold=args.threshold,
                max_nodes=args.max_nodes,
                return_first=args.return_first,
                sort_children=args.sort_children,
                max_depth=args.max_depth,
                warm_start=args.warm_start,
            )
            result = adaptive_compile(u, graph, config, params)
            stats = {
                "nodes_expanded": result.stats.nodes_expanded,
                "max_depth": result.stats.max_depth,
                "cost_limit": result.stats.cost_limit,
                "wall_time_ms": result.stats.wall_time_ms,
            }
    except NoSolutionError as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID

    if args.out:
        save_sequence(
            args.out,
            result.sequence,
            graph.num_levels,
            virtual_phases=result.residual_phases,
            extra={
                "initial_map": dict(result.initial_graph.logical_map),
                "final_map": dict(result.final_graph.logical_map),
                "total_cost": result.total_cost,
            },
        )
    summary = {
        "mode": args.mode,
        "total_cost": result.total_cost,
        "rotations": result.rotation_count,
        "routing_pulses": result.pulse_count,
        **stats,
    }
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_bench(args) -> int:
    try:
        params = _cost_params(args)
        dims = [int(x) for x in args.dims.split(",") if x]
        counts = [int(x) for x in args.counts.split(",") if x]
        if args.graphs:
            graphs = []
            for path in args.graphs.split(","):
                g = load_graph(path)
                graphs.append((Path(path).stem, g))
        else:
            graphs = [arch for dim in sorted(set(dims)) for arch in architectures_for_dim(dim)]
        config = SearchConfig(
            cost_limit_factor=args.cost_limit_factor,
            threshold=args.threshold,
            max_nodes=args.max_nodes,
            sort_children=args.sort_children,
        )
        records = run_suite(dims, counts, graphs, config, params,
                            seed=args.seed, workers=args.workers,
                            word_length=args.word_length)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID

    rows = summarize(records)
    if args.records:
        write_records(records, args.records, include_timings=args.include_timings)
    if args.csv:
        write_summary_csv(rows, args.csv)
    print(format_table(rows))
    failures = sum(1 for r in records if r.status != "ok" or not r.verified)
    if failures:
        print(f"{failures} instance(s) failed or did not verify", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        u = load_unitary(args.unitary)
        with open(args.sequence) as fh:
            doc = json.load(fh)
        ok = verify_sequence_document(u, doc, tol=args.tol)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_arch(args) -> int:
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    for arch_id, graph in architectures_for_dim(args.dim):
        path = outdir / f"{arch_id}.json"
        save_graph(graph, path)
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quditc",
                                     description="single-qudit unitary compiler")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="decompose one unitary")
    p.add_argument("--unitary", required=True, type=Path)
    p.add_argument("--graph", required=True, type=Path)
    p.add_argument("--mode", choices=("adaptive", "qr"), default="adaptive")
    p.add_argument("--cost-limit-factor", type=float, default=1.1)
    p.add_argument("--cost-limit", type=float, default=None,
                   help="absolute cost limit (overrides the factor)")
    p.add_argument("--threshold", type=float, default=1e-8)
    p.add_argument("--max-nodes", type=int, default=1_000_000)
    p.add_argument("--max-depth", type=int, default=None)
    p.add_argument("--return-first", type=_bool, default=False)
    p.add_argument("--sort-children", type=_bool, default=False)
    p.add_argument("--warm-start", type=_bool, default=True)
    p.add_argument("--out", type=Path, help="write the sequence file here")
    _add_cost_args(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("bench", help="run the benchmark suite")
    p.add_argument("--dims", default="3,5,7")
    p.add_argument("--counts", default="100,100,50")
    p.add_argument("--graphs", default=None,
                   help="comma-separated graph files (default: shipped architectures)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--word-length", type=int, default=12)
    p.add_argument("--cost-limit-factor", type=float, default=1.1)
    p.add_argument("--threshold", type=float, default=1e-8)
    p.add_argument("--max-nodes", type=int, default=5000)
    p.add_argument("--sort-children", type=_bool, default=False)
    p.add_argument("--csv", type=Path, help="summary CSV path")
    p.add_argument("--records", type=Path, help="NDJSON records path")
    p.add_argument("--include-timings", action="store_true",
                   help="keep wall times in the records file (breaks reproducibility)")
    _add_cost_args(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify", help="check a sequence file against a unitary")
    p.add_argument("--unitary", required=True, type=Path)
    p.add_argument("--sequence", required=True, type=Path)
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("arch", help="dump shipped architectures as graph files")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_arch)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
