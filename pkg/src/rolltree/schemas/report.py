"""Pydantic schemas for benchmark reports."""

from typing import Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, Field, field_validator


class CvRecord(BaseModel):
    """One cross-validation cell: a method at a depth on one fold."""

    dataset: str = Field(..., description="Dataset name")
    method: str = Field(..., description="Method name")
    depth: int = Field(..., ge=1, description="Maximum tree depth")
    fold: int = Field(..., ge=0, description="Held-out fold")
    train_accuracy: Optional[float] = Field(None, description="Accuracy on the training folds")
    test_accuracy: Optional[float] = Field(None, description="Accuracy on the held-out fold")
    fit_seconds: float = Field(0.0, ge=0, description="Wall time of the fit")
    n_leaves: Optional[int] = Field(None, description="Leaves of the fitted tree")
    error: Optional[str] = Field(None, description="Failure message of the cell")

    @field_validator("train_accuracy", "test_accuracy")
    @classmethod
    def validate_accuracy(cls, v: Optional[float]) -> Optional[float]:
        """Accuracies lie in [0, 1]."""
        if v is not None and not 0.0 <= v <= 1.0:
            raise ValueError(f"Accuracy {v} outside [0, 1]")
        return v

    @property
    def ok(self) -> bool:
        """Whether the cell produced both accuracies."""
        return self.error is None and self.test_accuracy is not None


class CvReport(BaseModel):
    """Per-cell accuracies and timings of a cross-validation run."""

    seed: int = Field(..., description="Fold RNG seed")
    k: int = Field(..., ge=2, description="Number of folds")
    methods: Dict[str, Dict] = Field(..., description="Fit configuration per method")
    depths: List[int] = Field(..., description="Depths swept")
    records: List[CvRecord] = Field(default_factory=list)

    def to_frame(self) -> pd.DataFrame:
        """Records as a DataFrame."""
        columns = list(CvRecord.model_fields)
        return pd.DataFrame([r.model_dump() for r in self.records], columns=columns)

    def mean_accuracies(self) -> pd.DataFrame:
        """Mean train and test accuracy per dataset, method and depth."""
        frame = self.to_frame()
        frame = frame[frame["error"].isna()]
        return (
            frame.groupby(["dataset", "method", "depth"], sort=False)[
                ["train_accuracy", "test_accuracy", "fit_seconds"]
            ]
            .mean()
            .reset_index()
        )

    @property
    def n_failed(self) -> int:
        """Cells that raised."""
        return sum(1 for r in self.records if r.error is not None)


class WinTieEntry(BaseModel):
    """Win and tie-for-best counts of one method at one depth."""

    depth: int
    method: str
    wins: int = 0
    ties_for_best: int = 0
    losses: int = 0
    instances: int = 0


class WinTieTable(BaseModel):
    """Win/tie-for-best comparison over CV instances."""

    methods: List[str]
    entries: List[WinTieEntry] = Field(default_factory=list)
    excluded: int = Field(0, description="Instances skipped for missing or failed cells")

    def entry(self, depth: int, method: str) -> WinTieEntry:
        """Counts of ``method`` at ``depth``."""
        for e in self.entries:
            if e.depth == depth and e.method == method:
                return e
        raise KeyError(f"No entry for method '{method}' at depth {depth}")

    def to_frame(self) -> pd.DataFrame:
        """Entries as a DataFrame."""
        return pd.DataFrame([e.model_dump() for e in self.entries], columns=list(WinTieEntry.model_fields))


class TimingReport(BaseModel):
    """Wall time of one synthetic fit, split by phase."""

    n: int
    p: int
    depth: int
    loss_kind: str
    precompute_seconds: float = Field(..., description="Cost-table construction")
    solve_seconds: float = Field(..., description="Subproblem solving")
    total_seconds: float = Field(..., description="Whole fit including bookkeeping")
    train_accuracy: float


class DatasetProfile(BaseModel):
    """Characteristics used to group datasets in comparisons."""

    name: str
    n: int
    p: int
    n_classes: int
    size_class: str = Field(..., description="S (n <= 1000), M (<= 10000) or L")
    feature_class: str = Field(..., description="S (p <= 30), M (<= 100) or L")
    class_type: str = Field(..., description="B (binary) or M (multi-class)")
    minority_share: float
    imbalance: str = Field(..., description="B (> 30%), I (10-30%) or HI (< 10%)")
    overfitting: Optional[str] = Field(None, description="E or NE from the CART train-test gap")
