"""Command line entry point: ``netclust run`` and ``netclust oracle``."""

from __future__ import annotations

import argparse
import logging
import secrets
import sys

from netclust.graph import GraphParseError, load_graph
from netclust.gso import GsoParams
from netclust.harness import RunConfig, run_benchmark
from netclust.oracle import brute_force_max_modularity

log = logging.getLogger("netclust")


def _rates(text: str) -> tuple[float, float, float]:
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three comma-separated rates")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    defaults = GsoParams()
    ap = argparse.ArgumentParser(prog="netclust", description="Modularity-based community detection.")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="seeded benchmark runs with report output")
    run.add_argument("--input", required=True)
    run.add_argument("--format", choices=["gml", "edgelist"], default=None)
    run.add_argument("--dataset", default=None, help="dataset name for the report (default: file stem)")
    run.add_argument("--group-size", type=int, default=defaults.group_size)
    run.add_argument("--iterations", type=int, default=defaults.iterations)
    run.add_argument("--ranger-fraction", type=float, default=defaults.ranger_fraction)
    run.add_argument("--patience", type=int, default=defaults.producer_patience)
    run.add_argument("--scan-count", type=int, default=defaults.producer_scan_count)
    run.add_argument("--scan-rates", type=_rates, default=defaults.scan_mutation_rates)
    run.add_argument("--beta", type=float, default=defaults.scrounger_copy_prob)
    run.add_argument("--ranger-rate", type=float, default=defaults.ranger_walk_rate)
    run.add_argument("--neighbor-prob", type=float, default=defaults.neighbor_move_prob)
    run.add_argument("--kmax", type=int, default=None)
    run.add_argument("--stagnation", type=int, default=None, help="stop after this many iterations without gain")
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--explore", action="store_true", help="allow a random seed when --seed is omitted")
    run.add_argument("--repeats", type=int, default=1)
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--report", default=None)
    run.add_argument("--report-format", choices=["json", "csv"], default="json")
    run.add_argument("--dot", default=None)

    orc = sub.add_parser("oracle", help="exhaustive optimum for small graphs")
    orc.add_argument("--input", required=True)
    orc.add_argument("--format", choices=["gml", "edgelist"], default=None)
    return ap


def _cmd_run(args) -> int:
    seed = args.seed
    if seed is None:
        if not args.explore:
            print("netclust run: --seed is required (use --explore to pick one at random)", file=sys.stderr)
            return 2
        seed = secrets.randbits(63)
        print(f"seed: {seed}")
    try:
        params = GsoParams(
            group_size=args.group_size,
            iterations=args.iterations,
            ranger_fraction=args.ranger_fraction,
            producer_patience=args.patience,
            producer_scan_count=args.scan_count,
            scan_mutation_rates=args.scan_rates,
            scrounger_copy_prob=args.beta,
            ranger_walk_rate=args.ranger_rate,
            neighbor_move_prob=args.neighbor_prob,
            k_max=args.kmax,
            seed=seed,
            stagnation_limit=args.stagnation,
        )
        config = RunConfig(
            input=args.input,
            format=args.format,
            params=params,
            repeats=args.repeats,
            report=args.report,
            report_format=args.report_format,
            dot=args.dot,
            dataset=args.dataset,
            workers=args.workers,
        )
    except ValueError as exc:
        print(f"netclust run: {exc}", file=sys.stderr)
        return 2
    try:
        report = run_benchmark(config)
    except (OSError, GraphParseError) as exc:
        print(f"netclust run: cannot load {args.input}: {exc}", file=sys.stderr)
        return 1
    for note in report.warnings:
        print(f"warning: {note}", file=sys.stderr)
    print(f"dataset {report.dataset}: n={report.n} m_edges={report.m_edges}")
    for run in report.runs:
        print(f"  seed {run.seed}: Q={run.best_q:.6f} K={run.n_communities} ({run.wall_time_s:.1f}s)")
    print(f"best Q={report.best_q:.6f} mean={report.mean_q:.6f} std={report.std_q:.6f}")
    return 0


def _cmd_oracle(args) -> int:
    try:
        graph = load_graph(args.input, args.format)
    except (OSError, GraphParseError) as exc:
        print(f"netclust oracle: cannot load {args.input}: {exc}", file=sys.stderr)
        return 1
    try:
        q, labels = brute_force_max_modularity(graph)
    except ValueError as exc:
        print(f"netclust oracle: {exc}", file=sys.stderr)
        return 2
    print(f"Q* = {q:.12f}")
    groups: dict[int, list] = {}
    for v, k in enumerate(labels.tolist()):
        groups.setdefault(k, []).append(graph.id_map[v])
    for k in sorted(groups):
        print(f"community {k}: {' '.join(str(x) for x in groups[k])}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.command == "run":
        return _cmd_run(args)
    return _cmd_oracle(args)


if __name__ == "__main__":
    sys.exit(main())
