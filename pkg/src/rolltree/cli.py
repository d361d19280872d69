"""Command-line interface for rolltree.

Subcommands: binarize, fit, predict, cv, compare and bench.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import pandas as pd

from src.rolltree import config
from src.rolltree.exceptions import RollTreeError
from src.rolltree.models.cost_table import LossKind
from src.rolltree.models.tree import evaluate_accuracy
from src.rolltree.schemas.fit import FitConfig, Oct2Config
from src.rolltree.schemas.report import CvReport
from src.rolltree.services import bench
from src.rolltree.services.data import apply_schema, binarize, load_csv, read_records
from src.rolltree.services.rst import METHODS, method_config, rst_fit
from src.rolltree.services.serialization import load_model, save_model

logger = logging.getLogger(__name__)


def parse_depths(value: str) -> List[int]:
    """Parse ``3``, ``2-8`` or ``2,4,6`` into a list of depths."""
    try:
        if "-" in value:
            low, high = (int(v) for v in value.split("-", 1))
            depths = list(range(low, high + 1))
        else:
            depths = [int(v) for v in value.split(",") if v.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"Invalid depth '{value}'") from e
    if not depths or min(depths) < 1:
        raise argparse.ArgumentTypeError(f"Invalid depth '{value}'")
    return depths


def parse_methods(value: str) -> List[str]:
    """Parse a comma-separated method list."""
    methods = [m.strip().lower() for m in value.split(",") if m.strip()]
    unknown = [m for m in methods if m not in METHODS]
    if not methods or unknown:
        raise argparse.ArgumentTypeError(
            f"Unknown method(s) {unknown or value!r}; choose from {', '.join(METHODS)}"
        )
    return methods


def _add_data_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="Input CSV file")
    parser.add_argument("--label", default="y", help="Label column name")
    parser.add_argument("--delimiter", default=",", help="Field separator")
    parser.add_argument("--quantile-bins", type=int, default=4, help="Quantile groups per numeric feature")


def _add_fit_args(parser: argparse.ArgumentParser, multi: bool) -> None:
    if multi:
        parser.add_argument("--method", type=parse_methods, default=["rst-g"], help="Comma-separated methods")
        parser.add_argument("--depth", type=parse_depths, default=[2], help="Depth, range (2-8) or list (2,4,6)")
    else:
        parser.add_argument("--method", choices=list(METHODS), default="rst-g", help="Tree-growing method")
        parser.add_argument("--depth", type=int, default=2, help="Maximum tree depth")
    parser.add_argument("--n-int", type=int, default=0, help="Minimum datapoints per internal node")
    parser.add_argument("--n-leaf", type=int, default=0, help="Minimum datapoints per leaf")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with every subcommand."""
    parser = argparse.ArgumentParser(prog="rolltree", description="Rolling-lookahead decision trees")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    subparsers = parser.add_subparsers(dest="command", required=True)

    p = subparsers.add_parser("binarize", help="Write the binarized dataset and its schema")
    _add_data_args(p)
    p.add_argument("--output", required=True, help="Binarized CSV output")
    p.add_argument("--schema", help="Schema JSON output")

    p = subparsers.add_parser("fit", help="Fit a tree and write the model JSON")
    _add_data_args(p)
    _add_fit_args(p, multi=False)
    p.add_argument("--output", help="Model JSON output")

    p = subparsers.add_parser("predict", help="Label raw records with a saved model")
    p.add_argument("--model", required=True, help="Model JSON file")
    p.add_argument("--input", required=True, help="Raw CSV records")
    p.add_argument("--delimiter", default=",", help="Field separator")
    p.add_argument("--output", help="Predictions CSV (stdout when omitted)")

    for name, text in (("cv", "Cross-validate methods over depths"), ("compare", "Win/tie-for-best counts")):
        p = subparsers.add_parser(name, help=text)
        p.add_argument("--input", help="Input CSV file")
        p.add_argument("--label", default="y", help="Label column name")
        p.add_argument("--delimiter", default=",", help="Field separator")
        p.add_argument("--quantile-bins", type=int, default=4, help="Quantile groups per numeric feature")
        _add_fit_args(p, multi=True)
        p.add_argument("--folds", type=int, default=10, help="Number of folds")
        p.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="Fold RNG seed")
        p.add_argument(
            "--threads",
            type=int,
            help=(
                f"Worker threads for cross-validation cells (default ${config.THREADS_ENV_VAR}); "
                "fit and bench always run on one thread"
            ),
        )
        p.add_argument("--output", help="JSON output")
        if name == "compare":
            p.add_argument("--report", help="Existing CV report JSON instead of running CV")

    p = subparsers.add_parser("bench", help="Time fits on planted synthetic data")
    p.add_argument("--n", type=int, default=50_000, help="Datapoints")
    p.add_argument("--p", type=int, default=135, help="Binary features")
    p.add_argument("--depth", type=parse_depths, default=[2], help="Depth, range or list")
    p.add_argument("--loss", choices=[k.value for k in LossKind], default=LossKind.GINI.value)
    p.add_argument("--seed", type=int, default=config.DEFAULT_SEED, help="Generator seed")
    p.add_argument("--output", help="JSON output")
    return parser


def _write_or_print(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {output}")
    else:
        print(text)


def _oct2_cfg(args: argparse.Namespace) -> Oct2Config:
    return Oct2Config(n_int=args.n_int, n_leaf=args.n_leaf)


def cmd_binarize(args: argparse.Namespace) -> None:
    raw = load_csv(args.input, args.label, args.delimiter)
    ds, schema = binarize(raw, quantile_bins=args.quantile_bins)
    frame = pd.DataFrame(ds.X, columns=list(ds.feature_names))
    frame[schema.label_column] = [ds.class_names[c] for c in ds.y]
    frame.to_csv(args.output, index=False)
    if args.schema:
        Path(args.schema).write_text(schema.model_dump_json(indent=2), encoding="utf-8")
    print(f"binarized {ds.n} rows into {ds.p} binary features")


def cmd_fit(args: argparse.Namespace) -> None:
    raw = load_csv(args.input, args.label, args.delimiter)
    ds, _ = binarize(raw, quantile_bins=args.quantile_bins)
    cfg = method_config(args.method, args.depth, _oct2_cfg(args))
    tree = rst_fit(ds, cfg)
    if args.output:
        save_model(tree, args.output)
    print(f"method: {args.method}, depth: {tree.depth}, leaves: {tree.n_leaves}")
    print(f"training accuracy: {evaluate_accuracy(tree, ds):.3f}")


def cmd_predict(args: argparse.Namespace) -> None:
    tree = load_model(args.model)
    if tree.schema is None:
        raise RollTreeError("Model has no binarization schema and cannot score raw records")
    frame = read_records(args.input, args.delimiter)
    X = apply_schema(frame, tree.schema, strict=True)
    labels = [tree.class_names[c] for c in tree.predict_many(X)]
    out = pd.DataFrame({tree.schema.label_column: labels})
    _write_or_print(out.to_csv(index=False).rstrip("\n"), args.output)


def _cv_report(args: argparse.Namespace) -> CvReport:
    if not args.input:
        raise RollTreeError("--input is required")
    raw = load_csv(args.input, args.label, args.delimiter)
    ds, _ = binarize(raw, quantile_bins=args.quantile_bins)
    oct2_cfg = _oct2_cfg(args)
    methods: Dict[str, FitConfig] = {
        name: method_config(name, max(args.depth), oct2_cfg) for name in args.method
    }
    return bench.run_cv(
        ds,
        methods,
        args.depth,
        k=args.folds,
        seed=args.seed,
        dataset_name=Path(args.input).stem,
        threads=config.resolve_threads(args.threads),
    )


def cmd_cv(args: argparse.Namespace) -> None:
    report = _cv_report(args)
    if args.output:
        Path(args.output).write_text(report.model_dump_json(indent=2), encoding="utf-8")
    print("Test accuracy (%)")
    print(bench.format_table(bench.accuracy_table(report, "test")))
    print("Training accuracy (%)")
    print(bench.format_table(bench.accuracy_table(report, "train")))


def cmd_compare(args: argparse.Namespace) -> None:
    if args.report:
        path = Path(args.report)
        if not path.is_file():
            raise FileNotFoundError(f"Report file not found: {path}")
        report = CvReport.model_validate_json(path.read_text(encoding="utf-8"))
        methods = list(report.methods)
    else:
        report = _cv_report(args)
        methods = args.method
    table = bench.win_tie(report, methods)
    if args.output:
        Path(args.output).write_text(table.model_dump_json(indent=2), encoding="utf-8")
    print(table.to_frame().to_string(index=False))
    if table.excluded:
        print(f"excluded instances: {table.excluded}")


def cmd_bench(args: argparse.Namespace) -> None:
    reports = bench.depth_sweep(args.n, args.p, args.depth, LossKind(args.loss), args.seed)
    if args.output:
        payload = [r.model_dump() for r in reports]
        Path(args.output).write_text(json.dumps(payload, indent=2), encoding="utf-8")
    frame = pd.DataFrame([r.model_dump() for r in reports])
    print(frame[["depth", "precompute_seconds", "solve_seconds", "total_seconds"]].to_string(index=False))


COMMANDS = {
    "binarize": cmd_binarize,
    "fit": cmd_fit,
    "predict": cmd_predict,
    "cv": cmd_cv,
    "compare": cmd_compare,
    "bench": cmd_bench,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI.

    Args:
        argv: Arguments without the program name. Defaults to ``sys.argv``.

    Returns:
        int: 0 on success, 1 on a handled error, 2 on a usage error.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else config.LOG_LEVEL,
        format=config.LOG_FORMAT,
    )

    try:
        COMMANDS[args.command](args)
    # RollTreeError and pydantic ValidationError are ValueErrors
    except (ValueError, OSError) as e:
        message = str(e).splitlines()[0] if str(e) else type(e).__name__
        logger.error(f"{args.command} failed: {message}")
        print(f"error: {message}", file=sys.stderr)
        return 1
    return 0


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())


if __name__ == "__main__":
    run()
