"""Command-line surface: statistic reports, baseline measures, experiment
runners, and SVG panels.

Exit codes: 0 success, 2 invalid input or configuration, 3 numeric
failure (singular covariance, eigensolver breakdown). Reports go to
--out when given, otherwise to stdout as JSON.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import sys

import numpy as np

from .ecd import (
    DEFAULT_ROUNDS,
    ecd,
    ecd_from_distances,
    ecd_subsampled,
    ecd_subsampled_from_distances,
    subsample_round_indices,
)
from .errors import InputError, InvalidSpec, NumericError, SizeMismatch
from .experiments import (
    DEFAULT_GRID_DIM,
    DEFAULT_GRID_N,
    DEFAULT_SWEEP_DIMS,
    DEFAULT_SWEEP_N,
    ExperimentTable,
    distribution_grid,
    variance_sweep,
)
from .metricspace import (
    DistanceMatrix,
    FeatureSet,
    PooledLabels,
    load_distance_csv,
    load_feature_csv,
    pairwise_distances,
)
from .plotting import plot_table
from .setmeasures import measures_from_cross, measures_from_features
from .spanning import DEFAULT_K, kmst

MAX_SEED = 2**64 - 1


def _checked_seed(seed):
    if seed is None:
        return None
    if not 0 <= seed <= MAX_SEED:
        raise InvalidSpec(f"seed must fit in unsigned 64 bits, got {seed}")
    return int(seed)


def _input_mode(args) -> str:
    feature = args.set_a is not None or args.set_b is not None
    distance = args.distances is not None or args.split is not None
    if feature and distance:
        raise InvalidSpec("feature files and a distance matrix are mutually exclusive")
    if feature:
        if args.set_a is None or args.set_b is None:
            raise InvalidSpec("feature mode needs both --set-a and --set-b")
        return "features"
    if args.distances is None:
        raise InvalidSpec("provide --set-a/--set-b or --distances with --split")
    if args.split is None:
        raise InvalidSpec("distance mode needs --split")
    return "distances"


def _split_labels(d: DistanceMatrix, split: int) -> PooledLabels:
    if not 2 <= split <= d.n_points - 2:
        raise SizeMismatch(
            f"--split must leave at least 2 points on each side of the "
            f"{d.n_points}-point matrix, got {split}"
        )
    return PooledLabels(n=split, m=d.n_points - split)


def _write_json(payload: dict, out) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_graph_csv(d: DistanceMatrix, k: int, path) -> None:
    g = kmst(d, k)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["layer", "i", "j", "weight"])
        for i, j, weight, layer in g.edges:
            writer.writerow([layer, i, j, repr(weight)])


def cmd_ecd(args) -> int:
    seed = _checked_seed(args.seed)
    metric = args.metric.replace("-", "_")
    mode = _input_mode(args)
    if mode == "features":
        a = load_feature_csv(args.set_a)
        b = load_feature_csv(args.set_b)
        subsampling = args.rounds is not None or a.n_points > b.n_points
        if subsampling:
            rounds = args.rounds if args.rounds is not None else DEFAULT_ROUNDS
            if seed is None:
                raise InvalidSpec("subsampling draws random subsets; provide --seed")
            rep = ecd_subsampled(a, b, k=args.k, rounds=rounds, seed=seed, metric=metric)
        else:
            rep = ecd(a, b, k=args.k, metric=metric)
            if seed is not None:
                rep = dataclasses.replace(rep, seed=seed)
        if args.dump_graph:
            if subsampling:
                idx = subsample_round_indices(seed, 0, a.n_points, b.n_points)
                d0 = pairwise_distances(FeatureSet(a.points[idx]), b, metric)
            else:
                d0 = pairwise_distances(a, b, metric)
            _dump_graph_csv(d0, args.k, args.dump_graph)
    else:
        d = load_distance_csv(args.distances)
        labels = _split_labels(d, args.split)
        subsampling = args.rounds is not None or labels.n > labels.m
        if subsampling:
            rounds = args.rounds if args.rounds is not None else DEFAULT_ROUNDS
            if seed is None:
                raise InvalidSpec("subsampling draws random subsets; provide --seed")
            rep = ecd_subsampled_from_distances(d, labels, k=args.k, rounds=rounds, seed=seed)
        else:
            rep = ecd_from_distances(d, labels, k=args.k)
            if seed is not None:
                rep = dataclasses.replace(rep, seed=seed)
        if args.dump_graph:
            if subsampling:
                idx = np.concatenate([
                    subsample_round_indices(seed, 0, labels.n, labels.m),
                    np.arange(labels.n, labels.n_total),
                ])
                d0 = DistanceMatrix(d.values[np.ix_(idx, idx)])
            else:
                d0 = d
            _dump_graph_csv(d0, args.k, args.dump_graph)
    _write_json(rep.to_json_dict(), args.out)
    return 0


def cmd_measures(args) -> int:
    mode = _input_mode(args)
    if mode == "features":
        a = load_feature_csv(args.set_a)
        b = load_feature_csv(args.set_b)
        result = measures_from_features(a, b)
        n, m = a.n_points, b.n_points
    else:
        d = load_distance_csv(args.distances)
        labels = _split_labels(d, args.split)
        result = measures_from_cross(d.values[: labels.n, labels.n :])
        n, m = labels.n, labels.m
    payload = result.to_json_dict()
    payload["n"] = n
    payload["m"] = m
    _write_json(payload, args.out)
    return 0


def cmd_sweep(args) -> int:
    table = variance_sweep(
        dims=args.dims, n=args.n, k=args.k,
        seed=_checked_seed(args.seed), workers=args.workers,
    )
    table.to_csv(args.out)
    print(f"wrote {len(table)} rows to {args.out}", file=sys.stderr)
    return 0


def cmd_grid(args) -> int:
    table = distribution_grid(
        dim=args.dim, n=args.n, k=args.k,
        seed=_checked_seed(args.seed), workers=args.workers,
    )
    table.to_csv(args.out)
    print(f"wrote {len(table)} rows to {args.out}", file=sys.stderr)
    return 0


def cmd_plot(args) -> int:
    table = ExperimentTable.from_csv(args.table)
    written = plot_table(table, args.out)
    _write_json({"written": written}, None)
    return 0


def _parse_dims(text: str):
    try:
        dims = tuple(int(f) for f in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not dims:
        raise argparse.ArgumentTypeError("need at least one dim")
    return dims


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ecdkit",
        description="Graph-based two-sample statistic and generative-set measures",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(sp):
        sp.add_argument("--set-a", dest="set_a", metavar="CSV",
                        help="feature CSV for the first (generated) set")
        sp.add_argument("--set-b", dest="set_b", metavar="CSV",
                        help="feature CSV for the second (reference) set")
        sp.add_argument("--distances", metavar="CSV",
                        help="pooled distance-matrix CSV instead of feature files")
        sp.add_argument("--split", type=int, metavar="N",
                        help="rows 0..N-1 of the distance matrix form the first set")
        sp.add_argument("--out", metavar="PATH", help="output path (default: stdout)")

    pe = sub.add_parser("ecd", help="edge-count statistic report (JSON)")
    add_io(pe)
    pe.add_argument("--k", type=int, default=DEFAULT_K, help="tree multiplicity")
    pe.add_argument("--metric", choices=["euclidean", "squared-euclidean"],
                    default="euclidean", help="feature-mode distance")
    pe.add_argument("--seed", type=int, help="64-bit seed for subsampling")
    pe.add_argument("--rounds", type=int,
                    help="subsample rounds (default 10 when the first set is larger)")
    pe.add_argument("--dump-graph", dest="dump_graph", metavar="CSV",
                    help="also write the pooled graph edges (layer,i,j,weight)")
    pe.set_defaults(func=cmd_ecd)

    pm = sub.add_parser("measures", help="coverage / matching distance / frechet (JSON)")
    add_io(pm)
    pm.set_defaults(func=cmd_measures)

    px = sub.add_parser("experiment", help="synthetic study runners (CSV)")
    xsub = px.add_subparsers(dest="experiment", required=True)

    ps = xsub.add_parser("variance-sweep", help="gaussian variance sweep table")
    ps.add_argument("--seed", type=int, required=True)
    ps.add_argument("--out", required=True, metavar="CSV")
    ps.add_argument("--n", type=int, default=DEFAULT_SWEEP_N, help="points per set")
    ps.add_argument("--k", type=int, default=DEFAULT_K)
    ps.add_argument("--dims", type=_parse_dims, default=DEFAULT_SWEEP_DIMS,
                    metavar="D1,D2,...")
    ps.add_argument("--workers", type=int, help="thread pool size (optional)")
    ps.set_defaults(func=cmd_sweep)

    pg = xsub.add_parser("distribution-grid", help="distribution-pair table")
    pg.add_argument("--seed", type=int, required=True)
    pg.add_argument("--out", required=True, metavar="CSV")
    pg.add_argument("--n", type=int, default=DEFAULT_GRID_N, help="points per set")
    pg.add_argument("--k", type=int, default=DEFAULT_K)
    pg.add_argument("--dim", type=int, default=DEFAULT_GRID_DIM)
    pg.add_argument("--workers", type=int, help="thread pool size (optional)")
    pg.set_defaults(func=cmd_grid)

    pp = sub.add_parser("plot", help="render SVG panels from an experiment CSV")
    pp.add_argument("--table", required=True, metavar="CSV")
    pp.add_argument("--out", required=True, metavar="STEM",
                    help="output stem; files land at <stem>_<measure>.svg")
    pp.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
