"""Command line entry point ``qml-diabench``.

Subcommands: ``run`` (full grid + reports), ``prepare`` (cleaned/reduced CSVs),
``kernel`` (dump a training kernel matrix) and ``version``. Any config key can
be overridden with ``--key value``; values are parsed as JSON when possible.
"""
from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import BenchError, ConfigError, MissingFile
from .harness.config import (
    ExperimentConfig,
    apply_overrides,
    default_config,
    load_config,
    parse_override_value,
)
from .harness.report import emit_report
from .harness.runner import load_split, reduce_split, run_experiment

EXIT_OK, EXIT_FAILED_CELL, EXIT_CONFIG = 0, 1, 2

log = logging.getLogger("qml_diabench")


def _parse_overrides(extra: list[str]) -> dict:
    out = {}
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise ConfigError(f"unexpected argument {tok!r}")
        key, eq, value = tok[2:].partition("=")
        if not eq:
            if i + 1 >= len(extra):
                raise ConfigError(f"missing value for {tok}")
            value = extra[i + 1]
            i += 1
        out[key.replace("-", "_")] = parse_override_value(value)
        i += 1
    return out


def _resolve_config(args, extra) -> ExperimentConfig:
    cfg = load_config(args.config) if args.config else default_config()
    overrides = _parse_overrides(extra)
    if getattr(args, "out", None):
        overrides["out_dir"] = args.out
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    return apply_overrides(cfg, overrides) if overrides else cfg


def cmd_run(cfg: ExperimentConfig) -> int:
    table = run_experiment(cfg)
    paths = emit_report(table, cfg.formats, cfg.out_dir, cfg.report_timing)
    for r in table.sorted_rows():
        status = "FAILED " + (r.error or "") if r.failed else (
            f"bacc={r.metrics.balanced_accuracy:.4f} f1={r.metrics.f1:.4f}")
        log.info("%-4s %-3s %s (%.2fs)", r.model, r.reduction, status, r.seconds)
    for p in paths:
        print(p)
    return EXIT_FAILED_CELL if table.any_failed else EXIT_OK


def cmd_prepare(cfg: ExperimentConfig) -> int:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    split, names = load_split(cfg)
    with open(out / "cleaned.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["split", "index", *names, "Outcome"])
        for part, idx, X, y in (("train", split.train_idx, split.train_X, split.train_y),
                                ("test", split.test_idx, split.test_X, split.test_y)):
            for i, row, label in zip(idx, X, y):
                w.writerow([part, int(i), *(repr(float(v)) for v in row), int(label)])
    print(out / "cleaned.csv")
    for reduction in cfg.reductions():
        data = reduce_split(split, reduction, cfg)
        k = data.n_features
        path = out / f"reduced_{reduction.lower()}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["split", "index", *(f"f{j}" for j in range(k)),
                        *(f"angle{j}" for j in range(k)), "Outcome"])
            for part, idx, R, A, y in (
                ("train", split.train_idx, data.train, data.train_angles, data.train_y),
                ("test", split.test_idx, data.test, data.test_angles, data.test_y),
            ):
                for i, r, a, label in zip(idx, R, A, y):
                    w.writerow([part, int(i), *(repr(float(v)) for v in r),
                                *(repr(float(v)) for v in a), int(label)])
        print(path)
    return EXIT_OK


def cmd_kernel(cfg: ExperimentConfig, reduction: str, limit: int) -> int:
    from .encoding import FeatureMapSpec
    from .qkernel import kernel_matrix

    split, _ = load_split(cfg)
    data = reduce_split(split, reduction.upper(), cfg)
    n = min(limit, len(data.train_angles))
    ids = [int(i) for i in split.train_idx[:n]]
    K = kernel_matrix(data.train_angles[:n], spec=FeatureMapSpec("ZZ", cfg.zz_reps), row_ids=ids)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"kernel_{reduction.lower()}.csv"
    K.to_csv(path)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qml-diabench", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_ in (("run", "run the full benchmark grid and write reports"),
                        ("prepare", "write cleaned and reduced feature CSVs"),
                        ("kernel", "write a training-set kernel matrix CSV")):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--config", help="JSON config file (defaults used when omitted)")
        sp.add_argument("--out", help="output directory (overrides out_dir)")
        sp.add_argument("--seed", type=int, help="master seed (overrides seed)")
        if name == "kernel":
            sp.add_argument("--reduction", default="PCA", choices=["PCA", "LDA", "pca", "lda"])
            sp.add_argument("--limit", type=int, default=50, help="number of training samples")
    sub.add_parser("version", help="print the package version")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "version":
        print(__version__)
        return EXIT_OK
    try:
        cfg = _resolve_config(args, extra)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if args.command == "run":
            return cmd_run(cfg)
        if args.command == "prepare":
            return cmd_prepare(cfg)
        return cmd_kernel(cfg, args.reduction, args.limit)
    except MissingFile as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED_CELL


if __name__ == "__main__":
    sys.exit(main())
