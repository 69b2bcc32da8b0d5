"""Command-line harness for the supervised feature-scaling experiments.

Subcommands: ``generate`` (synthetic data to a file), ``cluster``,
``classify``, ``sweep``, ``loocv`` and ``inspect-scaling``. A key=value config
file can be supplied with --config; its entries override command-line flags.
Outputs are a human-readable table on stdout plus report.csv and manifest.json
in the output directory. Exit code 0 on success, 1 on a toolkit error, 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from .data import SplitSpec, generate_toy, load_matrix, save_matrix, split, standardize
from .errors import SpecScaleError
from .experiments import (
    DEFAULT_SIGMA_GRID,
    ExperimentConfig,
    loocv,
    reports_to_csv,
    reports_to_manifest,
    run_pipeline,
    sweep,
)
from .scaling import assemble_pencil, estimate_fiedler, learn_scaling, scaling_table


def _parse_float_list(text):
    try:
        values = [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")
    if not values:
        raise argparse.ArgumentTypeError("list must not be empty")
    return values


def _parse_fiedler(text):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("fiedler-negative must be a number or 'auto'")


def _add_common(parser, classification):
    parser.add_argument("--data", required=True, help="delimited text file with a 'label' column")
    parser.add_argument("--output-dir", default=".", help="where report.csv and manifest.json go")
    parser.add_argument("--sigma-grid", type=_parse_float_list,
                        default=list(DEFAULT_SIGMA_GRID),
                        help="comma-separated kernel widths (default 0.01,0.1,1,10,100)")
    parser.add_argument("--k-neighbors", type=int, default=7)
    parser.add_argument("--fiedler-negative", type=_parse_fiedler, default=-0.2,
                        help="value for the second class, or 'auto'")
    parser.add_argument("--fraction", type=float, default=0.5, help="training fraction")
    parser.add_argument("--repetitions", type=int, default=10)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--kmeans-restarts", type=int, default=20)
    parser.add_argument("--no-standardize", action="store_true",
                        help="skip the mean-0 / variance-1 normalization")
    parser.add_argument("--no-feature-scaling", action="store_true",
                        help="run the unsupervised baseline (all factors = 1)")
    parser.add_argument("--config", help="key=value file; entries override flags")
    if classification:
        parser.add_argument("--ell", type=int, default=1, choices=(1, 2, 3),
                            help="embedding dimension")


_CONFIG_TYPES = {
    "data": str,
    "output_dir": str,
    "sigma_grid": _parse_float_list,
    "k_neighbors": int,
    "fiedler_negative": _parse_fiedler,
    "fraction": float,
    "repetitions": int,
    "seed": int,
    "kmeans_restarts": int,
    "ell": int,
    "samples": int,
    "out": str,
    "delimiter": str,
    "fractions": _parse_float_list,
    "no_standardize": lambda s: s.lower() in ("1", "true", "yes"),
    "no_feature_scaling": lambda s: s.lower() in ("1", "true", "yes"),
    "sigma": float,
}


def _apply_config_file(args):
    if getattr(args, "config", None) is None:
        return args
    with open(args.config, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise SpecScaleError(f"{args.config}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            if key not in _CONFIG_TYPES:
                raise SpecScaleError(f"{args.config}:{lineno}: unknown key '{key}'")
            if not hasattr(args, key):
                raise SpecScaleError(
                    f"{args.config}:{lineno}: key '{key}' does not apply to this command"
                )
            setattr(args, key, _CONFIG_TYPES[key](value.strip()))
    return args


def _load_data(args):
    data = load_matrix(args.data)
    if data.labels is None:
        raise SpecScaleError(f"{args.data} has no 'label' column")
    if not args.no_standardize:
        data = standardize(data)
    return data


def _build_config(args, task):
    return ExperimentConfig(
        task=task,
        ell=getattr(args, "ell", 1),
        sigma_grid=tuple(args.sigma_grid),
        k_neighbors=args.k_neighbors,
        fiedler_negative=args.fiedler_negative,
        split=SplitSpec(
            train_fraction=args.fraction, seed=args.seed, repetitions=args.repetitions
        ),
        kmeans_restarts=args.kmeans_restarts,
        seed=args.seed,
        feature_scaling=not args.no_feature_scaling,
    )


def _emit(reports, output_dir):
    os.makedirs(output_dir, exist_ok=True)
    with open(os.path.join(output_dir, "report.csv"), "w", encoding="utf-8", newline="") as f:
        f.write(reports_to_csv(reports))
    with open(os.path.join(output_dir, "manifest.json"), "w", encoding="utf-8", newline="") as f:
        f.write(reports_to_manifest(reports))
    for report in reports:
        print(report.format_table())
    if all(r.selected_sigma is None for r in reports):
        raise SpecScaleError("every run failed; see report.csv for the errors")


def _cmd_generate(args):
    data = generate_toy(n_samples=args.samples, seed=args.seed)
    save_matrix(data, args.out, delimiter=args.delimiter)
    print(f"wrote {data.n_samples}x{data.n_features} matrix to {args.out}")
    return 0


def _cmd_cluster(args):
    data = _load_data(args)
    report = run_pipeline(_build_config(args, "cluster"), data)
    _emit([report], args.output_dir)
    return 0


def _cmd_classify(args):
    data = _load_data(args)
    report = run_pipeline(_build_config(args, "classify"), data)
    _emit([report], args.output_dir)
    return 0


def _cmd_sweep(args):
    data = _load_data(args)
    config = _build_config(args, args.task)
    reports = sweep(config, args.fractions, data)
    _emit(reports, args.output_dir)
    return 0


def _cmd_loocv(args):
    data = _load_data(args)
    report = loocv(_build_config(args, "classify"), data)
    _emit([report], args.output_dir)
    return 0


def _cmd_inspect_scaling(args):
    data = _load_data(args)
    train, _ = split(
        data,
        SplitSpec(train_fraction=args.fraction, seed=args.seed, repetitions=1),
        repetition=0,
    )
    fiedler = estimate_fiedler(data.labels[train], args.fiedler_negative)
    pencil = assemble_pencil(data.values[train], fiedler, args.sigma)
    scaling = learn_scaling(pencil)
    table = scaling_table(scaling, data.feature_names)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as f:
            f.write(table)
    else:
        sys.stdout.write(table)
    print(
        f"# mu={scaling.eigenvalue!r} residual={scaling.residual!r} "
        f"constraint_violation={scaling.constraint_violation!r} "
        f"certified={str(scaling.certified).lower()}",
        file=sys.stderr,
    )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="specscale",
        description="Supervised feature scaling for spectral clustering and classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a synthetic benchmark dataset")
    p.add_argument("--samples", type=int, default=800)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--config", help="key=value file; entries override flags")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("cluster", help="spectral clustering with learned scaling")
    _add_common(p, classification=False)
    p.set_defaults(func=_cmd_cluster, ell=1)

    p = sub.add_parser("classify", help="transductive 1-NN classification")
    _add_common(p, classification=True)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("sweep", help="repeat a task over several training fractions")
    _add_common(p, classification=True)
    p.add_argument("--task", choices=("cluster", "classify"), default="classify")
    p.add_argument("--fractions", type=_parse_float_list,
                   default=[0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5])
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("loocv", help="leave-one-out classification")
    _add_common(p, classification=True)
    p.set_defaults(func=_cmd_loocv)

    p = sub.add_parser("inspect-scaling", help="emit the learned factor table")
    p.add_argument("--data", required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--fraction", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fiedler-negative", type=_parse_fiedler, default=-0.2)
    p.add_argument("--no-standardize", action="store_true")
    p.add_argument("--out")
    p.add_argument("--config", help="key=value file; entries override flags")
    p.set_defaults(func=_cmd_inspect_scaling)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_config_file(args)
        return args.func(args)
    except SpecScaleError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
