"""Cross-validation benchmark harness, comparisons and timing runs."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.rolltree.models.cost_table import LossKind
from src.rolltree.models.dataset import BinaryDataset
from src.rolltree.models.tree import evaluate_accuracy
from src.rolltree.schemas.fit import FitConfig
from src.rolltree.schemas.report import CvRecord, CvReport, TimingReport, WinTieEntry, WinTieTable
from src.rolltree.services.data import stratified_k_folds
from src.rolltree.services.datasets import planted_dataset
from src.rolltree.services.rst import RollingSubtreeBuilder, rst_fit

logger = logging.getLogger(__name__)

# Decimal places kept before detecting ties
ACCURACY_DECIMALS = 4


def run_cv(
    ds: BinaryDataset,
    methods: Dict[str, FitConfig],
    depths: Iterable[int],
    k: int = 10,
    seed: int = 0,
    dataset_name: str = "dataset",
    threads: int = 1,
) -> CvReport:
    """Stratified k-fold cross-validation of every method at every depth.

    Args:
        ds: The dataset.
        methods: Fit configuration per method name; ``d_max`` is overridden
            by each depth.
        depths: Maximum depths to sweep.
        k: Number of folds.
        seed: Fold RNG seed.
        dataset_name: Label stored in every record.
        threads: Worker threads for independent cells.

    Returns:
        CvReport: One record per (method, depth, fold), in that nesting order
            under depth. Failed cells carry an error message.
    """
    depths = list(depths)
    if any(d < 1 for d in depths):
        raise ValueError(f"Depths must be >= 1, got {depths}")
    if not methods:
        raise ValueError("At least one method is required")

    folds = stratified_k_folds(ds, k, seed)
    cells = [(depth, name, fold) for depth in depths for name in methods for fold in range(k)]

    def _run_cell(cell: Tuple[int, str, int]) -> CvRecord:
        depth, name, fold = cell
        try:
            cfg = methods[name].model_copy(update={"d_max": depth})
            train = folds.train_subset(fold)
            test = folds.test_subset(fold)
            start = time.perf_counter()
            tree = rst_fit(ds, cfg, train)
            elapsed = time.perf_counter() - start
            record = CvRecord(
                dataset=dataset_name,
                method=name,
                depth=depth,
                fold=fold,
                train_accuracy=evaluate_accuracy(tree, ds, train),
                test_accuracy=evaluate_accuracy(tree, ds, test),
                fit_seconds=elapsed,
                n_leaves=tree.n_leaves,
            )
            logger.debug(
                f"{dataset_name} {name} depth {depth} fold {fold}: "
                f"test {record.test_accuracy:.4f} in {elapsed:.3f}s"
            )
            return record
        except Exception as e:
            logger.exception(f"CV cell {name} depth {depth} fold {fold} failed: {e}")
            return CvRecord(dataset=dataset_name, method=name, depth=depth, fold=fold, error=str(e))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(_run_cell, cells))
    else:
        records = [_run_cell(cell) for cell in cells]

    report = CvReport(
        seed=seed,
        k=k,
        methods={name: cfg.model_dump(mode="json") for name, cfg in methods.items()},
        depths=depths,
        records=records,
    )
    logger.info(
        f"Cross-validated {len(methods)} methods x {len(depths)} depths x {k} folds on "
        f"'{dataset_name}' ({report.n_failed} failed cells)"
    )
    return report


def _instances(
    report: CvReport, methods: Sequence[str]
) -> Tuple[Dict[Tuple[str, int, int], Dict[str, float]], int]:
    """Rounded test accuracies per complete instance, and the excluded count."""
    grouped: Dict[Tuple[str, int, int], Dict[str, float]] = {}
    failed = set()
    for r in report.records:
        if r.method not in methods:
            continue
        key = (r.dataset, r.depth, r.fold)
        if not r.ok:
            failed.add(key)
            continue
        grouped.setdefault(key, {})[r.method] = round(r.test_accuracy, ACCURACY_DECIMALS)

    complete = {}
    excluded = 0
    for key in sorted(set(grouped) | failed):
        accuracies = grouped.get(key, {})
        if key in failed or len(accuracies) != len(methods):
            excluded += 1
            continue
        complete[key] = accuracies
    return complete, excluded


def win_tie(report: CvReport, methods: Optional[Sequence[str]] = None) -> WinTieTable:
    """Count wins and ties-for-best on test accuracy per depth and method.

    An instance is a (dataset, depth, fold) triple. The unique maximizer of
    the rounded test accuracy wins; when the maximum is shared, every sharer
    gets a tie-for-best. Instances missing a method are excluded.

    Args:
        report: Cross-validation report.
        methods: Methods to compare. Defaults to all in the report.

    Returns:
        WinTieTable: Counts per (depth, method).
    """
    methods = list(methods) if methods is not None else list(report.methods)
    instances, excluded = _instances(report, methods)

    entries: Dict[Tuple[int, str], WinTieEntry] = {}
    for depth in report.depths:
        for name in methods:
            entries[(depth, name)] = WinTieEntry(depth=depth, method=name)

    for (_, depth, _), accuracies in instances.items():
        best = max(accuracies.values())
        sharers = [m for m in methods if accuracies[m] == best]
        for name in methods:
            entry = entries.setdefault((depth, name), WinTieEntry(depth=depth, method=name))
            entry.instances += 1
            if name not in sharers:
                entry.losses += 1
            elif len(sharers) == 1:
                entry.wins += 1
            else:
                entry.ties_for_best += 1

    if excluded:
        logger.warning(f"Excluded {excluded} incomplete instances from the comparison")
    return WinTieTable(methods=methods, entries=list(entries.values()), excluded=excluded)


def accuracy_table(report: CvReport, partition: str = "test") -> pd.DataFrame:
    """Mean accuracy in percent per dataset and depth, one column per method."""
    column = f"{partition}_accuracy"
    means = report.mean_accuracies()
    table = means.pivot_table(index=["dataset", "depth"], columns="method", values=column)
    return (table * 100).round(1)


def average_table(report: CvReport, reference: str = "hybrid") -> pd.DataFrame:
    """Mean test accuracy over folds and depths per dataset.

    When ``reference`` is among the methods, adds the percentage improvement
    of the reference over every other method.
    """
    frame = report.to_frame()
    frame = frame[frame["error"].isna()]
    table = frame.pivot_table(index="dataset", columns="method", values="test_accuracy") * 100
    if reference in table.columns:
        for method in [m for m in table.columns if m != reference]:
            table[f"impr. vs {method}"] = (table[reference] - table[method]) / table[method] * 100
    return table.round(2)


def best_of_gap(report: CvReport, methods: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """Mean and standard deviation of each method's percentage gap to the per-instance best."""
    methods = list(methods) if methods is not None else list(report.methods)
    instances, _ = _instances(report, methods)
    gaps: Dict[str, List[float]] = {m: [] for m in methods}
    for accuracies in instances.values():
        best = max(accuracies.values())
        for name in methods:
            gaps[name].append((best - accuracies[name]) / best * 100 if best > 0 else 0.0)
    rows = [
        {
            "method": name,
            "mean_gap": float(np.mean(values)) if values else float("nan"),
            "std_gap": float(np.std(values)) if values else float("nan"),
        }
        for name, values in gaps.items()
    ]
    return pd.DataFrame(rows).set_index("method").round(2)


def overfit_margins(report: CvReport) -> pd.DataFrame:
    """Mean train minus test accuracy in points per depth, one column per method."""
    means = report.mean_accuracies()
    means["margin"] = (means["train_accuracy"] - means["test_accuracy"]) * 100
    return means.pivot_table(index="depth", columns="method", values="margin").round(2)


def format_table(frame: pd.DataFrame) -> str:
    """Aligned plain-text rendering of a report table."""
    return frame.to_string(float_format=lambda v: f"{v:.1f}")


def timing_bench(
    n: int, p: int, depth: int, loss_kind: LossKind, seed: int = 0
) -> TimingReport:
    """Time one lookahead-2 fit on a planted synthetic dataset.

    Args:
        n: Datapoints.
        p: Binary features.
        depth: Maximum tree depth.
        loss_kind: Loss to optimize.
        seed: Generator seed.

    Returns:
        TimingReport: Cost-table and solver time plus the total.
    """
    ds = planted_dataset(n, p, seed=seed)
    builder = RollingSubtreeBuilder(ds, FitConfig(d_max=depth, lookahead=2, loss_kind=loss_kind))
    start = time.perf_counter()
    tree = builder.fit()
    total = time.perf_counter() - start

    report = TimingReport(
        n=n,
        p=p,
        depth=depth,
        loss_kind=loss_kind.value,
        precompute_seconds=builder.precompute_seconds,
        solve_seconds=builder.solve_seconds,
        total_seconds=total,
        train_accuracy=evaluate_accuracy(tree, ds),
    )
    logger.info(
        f"Timing n={n} p={p} depth={depth}: precompute {report.precompute_seconds:.3f}s, "
        f"solve {report.solve_seconds:.3f}s, total {total:.3f}s"
    )
    return report


def depth_sweep(
    n: int, p: int, depths: Iterable[int], loss_kind: LossKind, seed: int = 0
) -> List[TimingReport]:
    """Timing reports for each depth on the same synthetic dataset."""
    return [timing_bench(n, p, depth, loss_kind, seed) for depth in depths]
