"""Command-line front end.

Subcommands wire the pipeline end to end: ``partition`` writes a batch
assignment plus its quality report, ``compare`` pits the spectral method
against the baselines, ``trace`` records per-iteration clustering progress,
and ``sweep`` emits speedup curves over batch sizes or description caps.
All outputs are plain JSON/CSV and are byte-identical across reruns with
the same flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import statistics
import sys

from . import baselines, costs, metrics
from .data import load_dataset, truncate_descriptions
from .estimators import BalancedSpectralPartitioner
from .exceptions import InstanceTooLargeError, UndefinedCorrelationError
from .graph import build_graph, cut_weight


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return n


def _fraction(value: str) -> float:
    f = float(value)
    if not 0.0 < f <= 1.0:
        raise argparse.ArgumentTypeError(f"expected a fraction in (0, 1], got {value}")
    return f


def _int_list(value: str) -> list[int]:
    try:
        items = [int(v) for v in value.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {value!r}") from exc
    if not items:
        raise argparse.ArgumentTypeError("empty value list")
    return items


def _add_shape_flags(p: argparse.ArgumentParser, require_shape: bool = True) -> None:
    group = p.add_mutually_exclusive_group(required=require_shape)
    group.add_argument("--k", type=_positive_int, help="number of batches")
    group.add_argument("--batch-size", type=_positive_int, help="samples per batch")
    p.add_argument("--k-prime", type=_positive_int, default=8,
                   help="embedding dimension (default 8)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-iter", type=_positive_int, default=100)
    p.add_argument("--heavy-cutoff", type=_fraction, default=None,
                   help="skip descriptions held by more than this fraction of samples")


def _partitioner(args, n: int) -> BalancedSpectralPartitioner:
    k = args.k if args.k is not None else -(-n // args.batch_size)
    if args.k_prime > n:
        print(f"warning: --k-prime {args.k_prime} clamped to {n}", file=sys.stderr)
    return BalancedSpectralPartitioner(
        batch_size=None if args.k is not None else args.batch_size,
        n_batches=args.k,
        n_components=args.k_prime,
        heavy_cutoff=args.heavy_cutoff,
        max_iter=args.max_iter,
        random_state=args.seed,
        record_trace=True,
    )


def cmd_partition(args) -> int:
    dataset = load_dataset(args.dataset)
    model = _partitioner(args, dataset.n).fit(dataset)
    model.partition_.save(args.out)
    report = metrics.partition_report(dataset, model.graph_, model.partition_)
    report_out = args.report_out or args.out + ".report.json"
    report.save(report_out)
    if args.embedding_out:
        from .embedding import write_embedding_csv

        write_embedding_csv(model.embedding_, args.embedding_out)
    print(f"objective={report.objective} cut_weight={report.cut_weight} "
          f"k={report.k} wrote {args.out} {report_out}")
    return 0


def _spectral_objective(args, dataset) -> tuple[int, object]:
    model = _partitioner(args, dataset.n).fit(dataset)
    return metrics.objective(dataset, model.partition_), model.partition_


def cmd_compare(args) -> int:
    dataset = load_dataset(args.dataset)
    graph = build_graph(dataset, heavy_cutoff=args.heavy_cutoff)
    n = dataset.n
    k = args.k if args.k is not None else -(-n // args.batch_size)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    known = {"spectral", "random", "greedy", "brute"}
    bad = set(methods) - known
    if bad:
        raise ValueError(f"unknown methods: {sorted(bad)}")

    random_objs = [
        metrics.objective(dataset, baselines.random_partition(n, k, seed=args.seed + i))
        for i in range(args.seeds)
    ]
    random_mean = statistics.fmean(random_objs)

    rows = []
    for method in methods:
        row = {"method": method, "status": "ok", "objective_std": ""}
        part = None
        if method == "random":
            row["objective_mean"] = f"{random_mean:.6g}"
            row["objective_std"] = (
                f"{statistics.pstdev(random_objs):.6g}" if len(random_objs) > 1 else "0"
            )
            part = baselines.random_partition(n, k, seed=args.seed)
        elif method == "spectral":
            obj, part = _spectral_objective(args, dataset)
            row["objective_mean"] = str(obj)
        elif method == "greedy":
            part = baselines.greedy_partition(dataset, k)
            row["objective_mean"] = str(metrics.objective(dataset, part))
        elif method == "brute":
            try:
                part, obj = baselines.brute_force_optimal(dataset, k)
                row["objective_mean"] = str(obj)
            except InstanceTooLargeError:
                row.update(status="skipped", objective_mean="", cut_weight="",
                           upper_bound_s_minus_1="", upper_bound_s="",
                           speedup_vs_random="")
                rows.append(row)
                continue
        report = metrics.partition_report(dataset, graph, part)
        row["cut_weight"] = str(cut_weight(graph, part))
        row["upper_bound_s_minus_1"] = f"{report.upper_bound_s_minus_1:.6g}"
        row["upper_bound_s"] = f"{report.upper_bound_s:.6g}"
        if method == "random":
            row["speedup_vs_random"] = "1"
        else:
            row["speedup_vs_random"] = f"{random_mean / float(row['objective_mean']):.6g}"
        rows.append(row)

    fields = ["method", "status", "objective_mean", "objective_std", "cut_weight",
              "upper_bound_s_minus_1", "upper_bound_s", "speedup_vs_random"]
    _emit_csv(rows, fields, args.out)
    widths = {f: max(len(f), *(len(str(r.get(f, ""))) for r in rows)) for f in fields}
    print("  ".join(f.ljust(widths[f]) for f in fields))
    for r in rows:
        print("  ".join(str(r.get(f, "")).ljust(widths[f]) for f in fields))
    return 0


def cmd_trace(args) -> int:
    dataset = load_dataset(args.dataset)
    model = _partitioner(args, dataset.n).fit(dataset)
    buf = io.StringIO()
    metrics.write_trace_csv(model.trace_, dataset, buf)
    if args.trace_out:
        with open(args.trace_out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    try:
        r = metrics.trace_correlation(model.trace_, dataset)
        print(f"pearson_r={r:.6f}")
    except UndefinedCorrelationError:
        print("pearson_r=undefined")
    return 0


def cmd_sweep(args) -> int:
    dataset = load_dataset(args.dataset)
    n = dataset.n
    if args.axis == "cap" and args.k is None and args.batch_size is None:
        raise ValueError("the cap axis needs --k or --batch-size")
    rows = []
    for value in args.values:
        if args.axis == "batch-size":
            data_v = dataset
            sweep_args = argparse.Namespace(**vars(args))
            sweep_args.k = None
            sweep_args.batch_size = value
            k = -(-n // value)
        else:
            data_v = truncate_descriptions(dataset, value)
            sweep_args = args
            k = args.k if args.k is not None else -(-n // args.batch_size)
        spectral_obj, _ = _spectral_objective(sweep_args, data_v)
        random_objs = [
            metrics.objective(data_v, baselines.random_partition(n, k, seed=args.seed + i))
            for i in range(args.seeds)
        ]
        random_mean = statistics.fmean(random_objs)
        rows.append({
            "axis": args.axis,
            "value": str(value),
            "spectral_objective": str(spectral_obj),
            "random_mean_objective": f"{random_mean:.6g}",
            "speedup": f"{random_mean / spectral_obj:.6g}",
        })
    fields = ["axis", "value", "spectral_objective", "random_mean_objective", "speedup"]
    _emit_csv(rows, fields, args.out, to_stdout_if_no_out=True)
    return 0


def _emit_csv(rows, fields, out_path, to_stdout_if_no_out: bool = False) -> None:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields, extrasaction="ignore")
    writer.writeheader()
    writer.writerows(rows)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    elif to_stdout_if_no_out:
        sys.stdout.write(buf.getvalue())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="batchcut",
        description="Group samples sharing knowledge descriptions into equal-size batches.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition a dataset and write assignment + report")
    p.add_argument("dataset", help="JSONL dataset path")
    _add_shape_flags(p)
    p.add_argument("--out", default="partition.json")
    p.add_argument("--report-out", default=None)
    p.add_argument("--embedding-out", default=None)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("compare", help="compare partitioning methods")
    p.add_argument("dataset")
    _add_shape_flags(p)
    p.add_argument("--methods", default="spectral,random,greedy,brute")
    p.add_argument("--seeds", type=_positive_int, default=10,
                   help="number of random-baseline seeds")
    p.add_argument("--out", default=None, help="CSV output path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("trace", help="record per-iteration clustering progress")
    p.add_argument("dataset")
    _add_shape_flags(p)
    p.add_argument("--trace-out", default=None, help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("sweep", help="speedup sweep over batch sizes or description caps")
    p.add_argument("dataset")
    _add_shape_flags(p, require_shape=False)
    p.add_argument("--axis", choices=["batch-size", "cap"], required=True)
    p.add_argument("--values", type=_int_list, required=True,
                   help="comma-separated axis values")
    p.add_argument("--seeds", type=_positive_int, default=10)
    p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    limit = os.environ.get("BATCHCUT_THREADS")
    if limit:
        try:
            from threadpoolctl import threadpool_limits
        except ImportError:
            threadpool_limits = None
        if threadpool_limits is not None:
            with threadpool_limits(limits=int(limit)):
                return _run(args)
    return _run(args)


def _run(args) -> int:
    try:
        return args.func(args)
    except Exception as exc:  # argparse handles usage errors with exit 2 itself
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
