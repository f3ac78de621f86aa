"""Command line interface: inspect, generate, evaluate, features.

Every command that writes files also writes a manifest.json with the
resolved configuration, tool version and input checksums, sufficient to
reproduce the run bit-exactly. Exit codes: 0 success, 1 usage error,
2 data error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import glob as globmod
import hashlib
import json
import os
import sys
from pathlib import Path

from . import __version__
from .community import cletn_labels, dletn_labels
from .core import LabelAssignment, SplitConfig, TemporalNetwork, local_split_of
from .dictionary import load_table, save_table, table_stats, train_table
from .generate import (GenConfig, generate_batch, rescale_population,
                       seeds_from_network)
from .io import (DataError, ParsedEvents, is_network_file, metadata_labels,
                 parse_events, parse_metadata, read_network, snapshotize,
                 write_coords_csv, write_features_csv, write_matrix_csv,
                 write_network, write_report, write_series_csv)
from .metrics import (METRIC_IDS, canonical_metric, evaluate, pca2,
                      signature_feature_matrix)
from .rng import child_rng

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _write_manifest(out_dir: Path, command: str, resolved: dict,
                    inputs: list[Path], outputs: list[str]) -> None:
    manifest = {
        "tool": "letngen",
        "version": __version__,
        "command": command,
        "config": resolved,
        "inputs": {str(p): _sha256(p) for p in inputs},
        "outputs": sorted(outputs),
    }
    write_report(manifest, out_dir / "manifest.json")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("triples", "triples_with_labels"),
                   default="triples", help="event file layout")
    p.add_argument("--metadata", help="two-column (id, label) metadata file")
    p.add_argument("--gap", type=int, default=300,
                   help="snapshot width in seconds")
    p.add_argument("--local-split", type=int, default=3600,
                   help="local split width in seconds")
    p.add_argument("--global-split", type=int, default=86400,
                   help="global split width in seconds")


def _load_dataset(args) -> tuple[ParsedEvents, TemporalNetwork, SplitConfig]:
    parsed = parse_events(args.dataset, args.format)
    cfg = SplitConfig.aligned(parsed.t_first, args.local_split,
                              args.global_split)
    network = snapshotize(parsed, args.gap, origin=cfg.origin)
    cfg.validate_for(network.gap, network.t0)
    return parsed, network, cfg


def _resolve_labels(args, parsed: ParsedEvents, network: TemporalNetwork,
                    cfg: SplitConfig, seed: int) -> LabelAssignment:
    """Pick the label source required by the mode."""
    mode = args.mode
    if mode == "etn":
        return LabelAssignment.uniform(parsed.node_count)
    if mode == "cletn":
        return cletn_labels(network, seed)
    if mode == "dletn":
        return dletn_labels(network, cfg, seed)
    # letn: real labels required
    has_meta = args.metadata is not None
    has_inline = parsed.inline_labels is not None
    source = getattr(args, "labels_from", None)
    if source is None:
        if has_meta and has_inline:
            raise UsageError("both metadata and inline labels present; "
                             "choose one with --labels-from")
        source = "metadata" if has_meta else "inline"
    if source == "metadata":
        if not has_meta:
            raise UsageError("mode letn needs --metadata (or inline labels "
                             "with --format triples_with_labels)")
        return metadata_labels(parsed, parse_metadata(args.metadata))
    if not has_inline:
        raise UsageError("no inline labels in this file; use --format "
                         "triples_with_labels or --labels-from metadata")
    return parsed.inline_labels


def _fmt_length(seconds: int) -> str:
    days, rem = divmod(seconds, 86400)
    hours = rem // 3600
    return f"{days}d {hours}h"


# -- commands -----------------------------------------------------------------

def cmd_inspect(args) -> int:
    parsed, network, cfg = _load_dataset(args)
    labels = None
    if args.metadata:
        labels = metadata_labels(parsed, parse_metadata(args.metadata))
    elif parsed.inline_labels is not None:
        labels = parsed.inline_labels
    histogram = [0] * cfg.splits_per_global
    for snap in network.snapshots:
        histogram[local_split_of(snap.time_start, cfg)] += len(snap.edges)
    summary = {
        "dataset": parsed.path,
        "participants": parsed.node_count,
        "unique_labels": labels.label_count() if labels else None,
        "label_names": list(labels.for_split(0)[1]) if labels else None,
        "length": _fmt_length(parsed.t_last - parsed.t_first),
        "length_seconds": parsed.t_last - parsed.t_first,
        "interactions": parsed.raw_event_count,
        "snapshots": network.length,
        "interactions_per_snapshot_total": network.interaction_count(),
        "gap": args.gap,
        "activity_per_local_split": histogram,
    }
    print(json.dumps(summary, indent=2))
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_report(summary, out_dir / "inspect.json")
        inputs = [Path(args.dataset)] + ([Path(args.metadata)] if args.metadata else [])
        _write_manifest(out_dir, "inspect", _resolved(args), inputs,
                        ["inspect.json"])
    return EXIT_OK


def _resolved(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def cmd_generate(args) -> int:
    parsed, network, cfg = _load_dataset(args)
    if network.length < args.k:
        raise DataError(f"dataset has {network.length} snapshots, need >= {args.k}")
    labels = _resolve_labels(args, parsed, network, cfg, args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: list[str] = []
    if args.table:
        table = load_table(args.table)
        if table.k != args.k or table.gap != args.gap:
            raise DataError(f"table artifact was built with k={table.k}, "
                            f"gap={table.gap}")
    else:
        table = train_table(network, labels, args.k, cfg)
        save_table(table, out_dir / "table.json.gz")
        outputs.append("table.json.gz")
    seed_layers = seeds_from_network(network, args.k)
    node_count = parsed.node_count
    raw_ids = parsed.raw_ids
    if args.nodes and args.nodes != parsed.node_count:
        labels, seed_layers = rescale_population(
            labels, seed_layers, args.nodes, child_rng(args.seed, "rescale"))
        node_count = args.nodes
        raw_ids = tuple(range(args.nodes))
    gen_cfg = GenConfig(
        target_length=args.length or network.length,
        node_count=node_count,
        seed_layers=tuple(seed_layers),
        split_config=cfg,
        k=args.k,
        gap=args.gap,
        mode=args.mode,
        surrogate_count=args.count,
    )
    workers = args.threads if args.threads else (os.cpu_count() or 1)
    surrogates = generate_batch(table, labels, gen_cfg, args.seed,
                                workers=min(workers, args.count))
    for i, sur in enumerate(surrogates):
        name = f"surrogate_{i}.txt"
        write_network(sur, raw_ids, out_dir / name)
        outputs.append(name)
    stats = table_stats(table)
    write_report(stats, out_dir / "table_stats.json")
    outputs.append("table_stats.json")
    inputs = [Path(args.dataset)]
    if args.metadata:
        inputs.append(Path(args.metadata))
    if args.table:
        inputs.append(Path(args.table))
    _write_manifest(out_dir, "generate", _resolved(args), inputs, outputs)
    print(f"wrote {len(surrogates)} surrogates to {out_dir}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    parsed = parse_events(args.original, args.format)
    cfg = SplitConfig.aligned(parsed.t_first, args.local_split,
                              args.global_split)
    original = snapshotize(parsed, args.gap, origin=cfg.origin)
    surrogate_paths: list[str] = []
    for pattern in args.surrogates:
        hits = sorted(globmod.glob(pattern))
        surrogate_paths.extend(hits if hits else [pattern])
    if not surrogate_paths:
        raise UsageError("no surrogate files given")
    surrogates = []
    for p in surrogate_paths:
        if not Path(p).exists():
            raise DataError(f"surrogate file not found: {p}")
        if is_network_file(p):
            net, _ = read_network(p)
        else:
            net = snapshotize(parse_events(p, "triples"), args.gap,
                              origin=cfg.origin)
        if net.node_count != original.node_count:
            raise DataError(f"{p}: node count {net.node_count} != original "
                            f"{original.node_count}")
        surrogates.append(net)
    if args.labels == "metadata":
        if not args.metadata:
            raise UsageError("--labels metadata needs --metadata PATH")
        labels = metadata_labels(parsed, parse_metadata(args.metadata))
    elif args.labels == "inline":
        if parsed.inline_labels is None:
            raise UsageError("no inline labels; use --format triples_with_labels")
        labels = parsed.inline_labels
    else:
        labels = cletn_labels(original, args.seed)
    metric_names = [canonical_metric(m) for m in args.metrics.split(",")]
    report = evaluate(original, surrogates, labels, metric_names,
                      provenance={"dataset": parsed.path,
                                  "labels": args.labels, "gap": args.gap})
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = ["report.json"]
    write_report(report.to_dict(), out_dir / "report.json")
    write_series_csv(report.original.series, out_dir / "series_original.csv")
    outputs.append("series_original.csv")
    for i, rep in enumerate(report.surrogates):
        name = f"series_surrogate_{i}.csv"
        write_series_csv(rep.series, out_dir / name)
        outputs.append(name)
    names = report.original.label_names
    for matrix_name, entry in report.matrices.items():
        for role in ("original", "surrogate_mean"):
            name = f"{matrix_name}_{role}.csv"
            write_matrix_csv(entry[role], names, out_dir / name)
            outputs.append(name)
    inputs = [Path(args.original)] + [Path(p) for p in surrogate_paths]
    if args.metadata:
        inputs.append(Path(args.metadata))
    _write_manifest(out_dir, "evaluate", _resolved(args), inputs, outputs)
    summary = {m: report.distances[m]["mean"] for m in metric_names}
    print(json.dumps({"series_distance_mean": summary,
                      "aggregated": report.aggregated["original"]}, indent=2))
    return EXIT_OK


def cmd_features(args) -> int:
    parsed, network, cfg = _load_dataset(args)
    if network.length < args.k:
        raise DataError(f"dataset has {network.length} snapshots, need >= {args.k}")
    if args.metadata:
        labels = metadata_labels(parsed, parse_metadata(args.metadata))
    elif parsed.inline_labels is not None:
        labels = parsed.inline_labels
    else:
        labels = LabelAssignment.uniform(parsed.node_count)
        if args.mode == "letn":
            raise UsageError("mode letn needs labels (metadata or inline)")
    matrix, columns = signature_feature_matrix(network, labels, args.k,
                                               args.mode)
    node_labels, names = labels.for_split(0)
    label_strs = [names[lab] for lab in node_labels]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = [f"features_{args.mode}.csv"]
    write_features_csv(matrix, columns, parsed.raw_ids, label_strs,
                       out_dir / outputs[0])
    if args.pca:
        coords = pca2(matrix)
        name = f"pca_{args.mode}.csv"
        write_coords_csv(coords, parsed.raw_ids, label_strs, out_dir / name)
        outputs.append(name)
    inputs = [Path(args.dataset)]
    if args.metadata:
        inputs.append(Path(args.metadata))
    _write_manifest(out_dir, "features", _resolved(args), inputs, outputs)
    print(f"wrote {', '.join(outputs)} to {out_dir}")
    return EXIT_OK


# -- entry point ---------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="letngen",
                     description="community-aware surrogate temporal network "
                                 "generation and evaluation")
    parser.add_argument("--version", action="version",
                        version=f"letngen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="summarize a contact dataset")
    p.add_argument("dataset")
    _add_common(p)
    p.add_argument("--out", help="also write inspect.json and manifest here")
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("generate", help="train a table and generate surrogates")
    p.add_argument("dataset")
    _add_common(p)
    p.add_argument("--mode", choices=("letn", "etn", "cletn", "dletn"),
                   required=True)
    p.add_argument("--labels-from", choices=("metadata", "inline"),
                   help="label source for mode letn when both are available")
    p.add_argument("--k", type=int, default=2, help="window size in snapshots")
    p.add_argument("--count", type=int, default=10,
                   help="number of surrogates")
    p.add_argument("--length", type=int,
                   help="surrogate length in snapshots (default: original)")
    p.add_argument("--nodes", type=int,
                   help="surrogate population size (default: original)")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--table", help="reuse a saved table artifact")
    p.add_argument("--threads", type=int,
                   help="parallel surrogate workers (default: all cores)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="compare surrogates to an original")
    p.add_argument("original")
    p.add_argument("surrogates", nargs="+",
                   help="surrogate files or globs")
    _add_common(p)
    p.add_argument("--labels", choices=("metadata", "inline", "cletn"),
                   default="metadata", help="label source for the metrics")
    p.add_argument("--metrics", default=",".join(METRIC_IDS),
                   help="comma-separated metric list")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for cletn labels")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("features", help="export signature count vectors")
    p.add_argument("dataset")
    _add_common(p)
    p.add_argument("--mode", choices=("etn", "letn"), required=True)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--pca", action="store_true",
                   help="also write 2D principal-component coordinates")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_features)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, FileNotFoundError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ValueError, RuntimeError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
