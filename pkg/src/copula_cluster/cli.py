"""copula-cluster command line: cluster, simulate, measure."""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .cluster import DissimilaritySpec, run_clustering
from .core import DataMatrix, cut_dendrogram, to_pseudo_observations
from .empirical import Measure, MeasureKind, dissimilarity, kendall_companion
from .simulation import ROW_FIELDS, ConfigError, SimulationConfig, run_simulation

EXIT_OK = 0
EXIT_USAGE = 2
MEASURES = [m.value for m in Measure]
MODES = ["single", "average", "complete", "global"]


class UsageError(Exception):
    pass


def read_csv_matrix(path) -> DataMatrix:
    """Numeric CSV with a header row; errors name the offending row and column."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    rows = [r for r in rows if r]
    if not rows:
        raise UsageError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    values = []
    for i, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise UsageError(f"{path}: line {i} has {len(row)} fields, header has {len(header)}")
        parsed = []
        for name, cell in zip(header, row):
            try:
                parsed.append(float(cell))
            except ValueError:
                raise UsageError(f"{path}: non-numeric cell {cell!r} at line {i}, column {name!r}") from None
        values.append(parsed)
    if len(values) < 2:
        raise UsageError(f"{path}: need at least 2 data rows, got {len(values)}")
    try:
        return DataMatrix(values, tuple(header))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _pseudo_obs(path):
    data = read_csv_matrix(path)
    P = to_pseudo_observations(data)
    if P.has_ties:
        tied = [n for n, f in zip(P.column_names, P.tie_flags) if f]
        print(f"warning: ties in columns {', '.join(tied)}; using mid-ranks", file=sys.stderr)
    return P


def _kind(measure, tail_k):
    try:
        return MeasureKind.parse(measure, tail_k)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_cluster(args) -> int:
    P = _pseudo_obs(args.input)
    spec = DissimilaritySpec(_kind(args.measure, args.tail_k), args.mode)
    dendro = run_clustering(P, spec)
    prefix = Path(args.output)
    Path(str(prefix) + ".json").write_text(dendro.to_json() + "\n", encoding="utf-8")
    Path(str(prefix) + ".nwk").write_text(dendro.to_newick() + "\n", encoding="utf-8")
    if args.cut_k is not None:
        if not 1 <= args.cut_k <= P.m:
            raise UsageError(f"--cut-k must be between 1 and {P.m}")
        part = cut_dendrogram(dendro, args.cut_k)
        with open(str(prefix) + "_partition.csv", "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["column_name", "label"])
            w.writerows(zip(P.column_names, part.labels))
    return EXIT_OK


def _threads(value) -> int:
    if value is None:
        value = os.environ.get("COPULA_CLUSTER_THREADS", "1")
    try:
        n = int(value)
    except ValueError:
        raise UsageError(f"thread count must be an integer, got {value!r}") from None
    if n < 1:
        raise UsageError("thread count must be positive")
    return n


def cmd_simulate(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.config}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{args.config}: invalid JSON ({exc})") from exc
    if not isinstance(raw, dict):
        raise UsageError(f"{args.config}: top level must be an object")
    if args.seed is not None:
        raw["seed"] = args.seed
    try:
        cfg = SimulationConfig.from_dict(raw)
    except ConfigError as exc:
        raise UsageError(f"{args.config}: {exc}") from exc
    rows = run_simulation(cfg, threads=_threads(args.threads), timing=not args.no_timing)
    with open(args.output, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=ROW_FIELDS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({**row, "ari": f"{row['ari']:.12g}", "wall_ms": f"{row['wall_ms']:.3f}"})
    return EXIT_OK


def parse_column_set(expr: str, names) -> tuple[int, ...]:
    """Comma list of column names or 1-based indices."""
    out = []
    for tok in (t.strip() for t in expr.split(",")):
        if not tok:
            continue
        if tok in names:
            out.append(names.index(tok))
        elif tok.isdigit() and 1 <= int(tok) <= len(names):
            out.append(int(tok) - 1)
        else:
            raise UsageError(f"unknown column {tok!r}")
    if not out:
        raise UsageError(f"empty column set {expr!r}")
    if len(set(out)) != len(out):
        raise UsageError(f"column repeated in {expr!r}")
    return tuple(sorted(out))


def cmd_measure(args) -> int:
    P = _pseudo_obs(args.input)
    names = list(P.column_names)
    a = parse_column_set(args.set_a, names)
    b = parse_column_set(args.set_b, names)
    overlap = set(a) & set(b)
    if overlap:
        raise UsageError(f"column sets overlap on {[names[i] for i in sorted(overlap)]}")
    measures = args.measure or MEASURES
    dim = len(a) + len(b)
    print("measure\td\tkappa")
    for m in measures:
        d = dissimilarity(P, a, b, _kind(m, args.tail_k))
        kappa = f"{kendall_companion(d, dim):.12g}" if m == Measure.KENDALL.value else ""
        print(f"{m}\t{d:.12g}\t{kappa}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copula-cluster", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cluster", help="cluster the columns of a CSV file")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True, help="prefix for .json, .nwk and _partition.csv")
    p.add_argument("--measure", choices=MEASURES, default="kendall")
    p.add_argument("--mode", choices=MODES, default="average")
    p.add_argument("--tail-k", type=int)
    p.add_argument("--cut-k", type=int)
    p.set_defaults(func=cmd_cluster)

    p = sub.add_parser("simulate", help="run a seeded replication study from a JSON config")
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--seed", type=int, help="overrides the config seed")
    p.add_argument("--threads")
    p.add_argument("--no-timing", action="store_true", help="write wall_ms as 0 for byte-stable output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("measure", help="dissimilarities between two column sets")
    p.add_argument("--input", required=True)
    p.add_argument("--set-a", required=True, help="comma list of names or 1-based indices")
    p.add_argument("--set-b", required=True)
    p.add_argument("--measure", choices=MEASURES, action="append")
    p.add_argument("--tail-k", type=int)
    p.set_defaults(func=cmd_measure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
