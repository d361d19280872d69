"""Tests for dataset ingestion, binarization and folds."""

import logging
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np
import pandas as pd
import pytest

from src.rolltree.exceptions import DatasetError, SchemaMismatchError
from src.rolltree.models.dataset import BinaryDataset, RawDataset
from src.rolltree.schemas.binarization import FeatureKind
from src.rolltree.services.data import (
    apply_schema,
    binarize,
    from_frame,
    load_csv,
    profile_dataset,
    read_records,
    stratified_k_folds,
)
from src.rolltree.services.datasets import load_builtin

if TYPE_CHECKING:
    from _pytest.logging import LogCaptureFixture


def test_load_csv_toy(toy_csv: Path) -> None:
    """Four rows, three numeric features and a textual label."""
    raw = load_csv(toy_csv, "y")
    assert raw.n_rows == 4
    assert raw.label_column == "y"
    assert raw.numeric_columns == ("x1", "x2", "x3")
    assert list(raw.frame["y"]) == ["A", "B", "B", "B"]


def test_load_csv_single_row(tmp_path: Path) -> None:
    """A single data row is a valid dataset."""
    path = tmp_path / "one.csv"
    path.write_text("a,b,label\n1,red,yes\n", encoding="utf-8")
    raw = load_csv(path, "label")
    assert raw.n_rows == 1
    assert raw.numeric_columns == ("a",)


def test_load_csv_custom_delimiter(tmp_path: Path) -> None:
    """Fields may be separated by another character."""
    path = tmp_path / "semi.csv"
    path.write_text("a;y\n1;A\n2;B\n", encoding="utf-8")
    assert load_csv(path, "y", delimiter=";").n_rows == 2


def test_load_csv_short_row_is_ragged(tmp_path: Path) -> None:
    """A row missing a field is rejected."""
    path = tmp_path / "short.csv"
    path.write_text("x1,x2,y\n1,0,A\n1,B\n", encoding="utf-8")
    with pytest.raises(DatasetError):
        load_csv(path, "y")


def test_load_csv_long_row_is_ragged(tmp_path: Path) -> None:
    """A row with an extra field is rejected."""
    path = tmp_path / "long.csv"
    path.write_text("x1,x2,y\n1,0,A\n1,0,1,B\n", encoding="utf-8")
    with pytest.raises(DatasetError):
        load_csv(path, "y")


def test_load_csv_long_first_row_is_ragged(tmp_path: Path) -> None:
    """A surplus field on the first data row is not taken as an index column."""
    path = tmp_path / "long_first.csv"
    path.write_text("x1,x2,y\n1,0,1,B\n1,0,A\n0,1,A\n", encoding="utf-8")
    with pytest.raises(DatasetError):
        load_csv(path, "y")


def test_load_csv_every_row_too_long(tmp_path: Path) -> None:
    """Rows consistently wider than the header are rejected too."""
    path = tmp_path / "wide.csv"
    path.write_text("x1,y\n1,0,A\n0,1,B\n", encoding="utf-8")
    with pytest.raises(DatasetError):
        load_csv(path, "y")


def test_read_records_without_label(tmp_path: Path) -> None:
    """Records for scoring need no label column but get the same checks."""
    path = tmp_path / "records.csv"
    path.write_text("x1, x2\n 1,0\n0 ,1\n", encoding="utf-8")
    frame = read_records(path)
    assert list(frame.columns) == ["x1", "x2"]
    assert frame.to_numpy().tolist() == [["1", "0"], ["0", "1"]]

    path.write_text("x1,x2\n1,0\n1\n", encoding="utf-8")
    with pytest.raises(DatasetError):
        read_records(path)


def test_load_csv_missing_label(toy_csv: Path) -> None:
    """The label column must exist."""
    with pytest.raises(DatasetError):
        load_csv(toy_csv, "class")


def test_load_csv_missing_file(tmp_path: Path) -> None:
    """Missing files raise FileNotFoundError."""
    with pytest.raises(FileNotFoundError):
        load_csv(tmp_path / "absent.csv", "y")


@pytest.mark.parametrize("content", ["", "x1,y\n"])
def test_load_csv_empty(tmp_path: Path, content: str) -> None:
    """Files without data rows are rejected."""
    path = tmp_path / "empty.csv"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(DatasetError):
        load_csv(path, "y")


def test_binarize_toy_one_hot(toy_raw: RawDataset) -> None:
    """Each binary column becomes two one-hot columns; x_j = 1 reproduces x_j."""
    ds, schema = binarize(toy_raw)
    assert ds.p == 6
    assert ds.feature_names == ("x1=0", "x1=1", "x2=0", "x2=1", "x3=0", "x3=1")
    assert ds.class_names == ("A", "B")
    assert list(ds.y) == [0, 1, 1, 1]
    original = toy_raw.frame[["x1", "x2", "x3"]].to_numpy(dtype=int)
    assert np.array_equal(ds.X[:, [1, 3, 5]], original)
    assert all(f.kind == FeatureKind.CATEGORICAL for f in schema.features)


def test_binarize_quantile_ramp() -> None:
    """Values 1..100 cut into quartiles give four columns of 25 ones."""
    frame = pd.DataFrame({"v": [str(i) for i in range(1, 101)], "y": ["a", "b"] * 50})
    ds, schema = binarize(from_frame(frame, "y"), quantile_bins=4)
    assert ds.p == 4
    assert list(ds.X.sum(axis=0)) == [25, 25, 25, 25]
    assert schema.features[0].kind == FeatureKind.QUANTILE
    assert schema.features[0].boundaries == sorted(schema.features[0].boundaries)


def test_binarize_duplicate_quantiles_merge_bins() -> None:
    """Heavily tied values give fewer bins than requested."""
    values = [0] * 90 + list(range(1, 11))
    frame = pd.DataFrame({"v": [str(v) for v in values], "y": ["a", "b"] * 50})
    ds, _ = binarize(from_frame(frame, "y"), quantile_bins=4)
    assert ds.p < 4
    assert np.array_equal(ds.X.sum(axis=1), np.ones(100))


def test_binarize_tic_tac_toe_width() -> None:
    """Nine three-valued squares give 27 columns."""
    ds, _ = binarize(load_builtin("tic-tac-toe"))
    assert ds.n == 958
    assert ds.p == 27


def test_binarize_constant_column_warns(caplog: "LogCaptureFixture") -> None:
    """A single-valued feature is kept and flagged."""
    frame = pd.DataFrame({"c": ["k", "k", "k"], "v": ["1", "0", "1"], "y": ["a", "b", "a"]})
    with caplog.at_level(logging.WARNING):
        ds, _ = binarize(from_frame(frame, "y"))
    assert "constant" in caplog.text
    assert ds.feature_names[0] == "c=k"


def test_binarize_numeric_classes_sort_numerically() -> None:
    """Class ids follow numeric order for numeric labels."""
    frame = pd.DataFrame({"v": ["1", "0", "1", "0"], "y": ["10", "9", "2", "10"]})
    ds, _ = binarize(from_frame(frame, "y"))
    assert ds.class_names == ("2", "9", "10")


def test_binarize_rejects_one_bin(toy_raw: RawDataset) -> None:
    """At least two quantile groups are needed."""
    with pytest.raises(ValueError):
        binarize(toy_raw, quantile_bins=1)


def test_schema_reproduces_training_matrix() -> None:
    """Re-applying the schema to the training rows gives the same matrix."""
    raw = load_builtin("monks-2")
    ds, schema = binarize(raw)
    assert np.array_equal(apply_schema(raw, schema), ds.X)


def test_one_hot_groups_partition_rows() -> None:
    """Each original feature contributes exactly one set bit per seen row."""
    raw = load_builtin("tic-tac-toe")
    ds, schema = binarize(raw)
    for feature in schema.features:
        assert np.array_equal(ds.X[:, feature.columns].sum(axis=1), np.ones(ds.n))


def test_apply_schema_unseen_category_is_all_zero(toy_raw: RawDataset) -> None:
    """Values never seen at fit time switch off their whole group."""
    _, schema = binarize(toy_raw)
    frame = pd.DataFrame({"x1": ["7"], "x2": ["0"], "x3": ["1"]})
    X = apply_schema(frame, schema)
    assert list(X[0]) == [0, 0, 1, 0, 0, 1]


def test_apply_schema_missing_column(toy_raw: RawDataset) -> None:
    """Every schema feature must be present."""
    _, schema = binarize(toy_raw)
    with pytest.raises(SchemaMismatchError):
        apply_schema(pd.DataFrame({"x1": ["1"], "x2": ["0"]}), schema)


def test_apply_schema_strict_rejects_extra_columns(toy_raw: RawDataset) -> None:
    """Strict mode refuses columns the schema does not know; the label is allowed."""
    _, schema = binarize(toy_raw)
    frame = pd.DataFrame({"x1": ["1"], "x2": ["0"], "x3": ["1"], "y": ["A"], "x4": ["0"]})
    assert apply_schema(frame, schema).shape == (1, 6)
    with pytest.raises(SchemaMismatchError):
        apply_schema(frame, schema, strict=True)


def test_folds_balanced_classes() -> None:
    """Fifty of each class over ten folds puts five of each in every fold."""
    ds = BinaryDataset.from_arrays(np.zeros((100, 1), dtype=int), [0] * 50 + [1] * 50)
    folds = stratified_k_folds(ds, 10, seed=7)
    for fold in range(10):
        members = ds.y[folds.fold_of == fold]
        assert list(np.bincount(members, minlength=2)) == [5, 5]


def test_folds_on_toy_data(toy_onehot: BinaryDataset) -> None:
    """Two folds of two rows; the A row lands in exactly one."""
    folds = stratified_k_folds(toy_onehot, 2, seed=0)
    assert sorted(folds.fold_sizes()) == [2, 2]
    assert len({folds.fold_of[i] for i in np.flatnonzero(toy_onehot.y == 0)}) == 1


def test_folds_deterministic_and_stratified(toy_onehot: BinaryDataset) -> None:
    """Same seed, same folds; per-class fold counts differ by at most one."""
    ds = BinaryDataset.from_arrays(np.zeros((23, 1), dtype=int), [0] * 7 + [1] * 11 + [2] * 5)
    a = stratified_k_folds(ds, 4, seed=3)
    b = stratified_k_folds(ds, 4, seed=3)
    assert np.array_equal(a.fold_of, b.fold_of)
    for c in range(3):
        counts = np.bincount(a.fold_of[ds.y == c], minlength=4)
        assert counts.max() - counts.min() <= 1


def test_folds_warn_when_k_exceeds_smallest_class(
    toy_onehot: BinaryDataset, caplog: "LogCaptureFixture"
) -> None:
    """k above the smallest class size still assigns folds, with a warning."""
    with caplog.at_level(logging.WARNING):
        folds = stratified_k_folds(toy_onehot, 3, seed=1)
    assert "smallest class" in caplog.text
    assert folds.fold_of.shape == (4,)


@pytest.mark.parametrize("k", [1, 5])
def test_folds_reject_bad_k(toy_onehot: BinaryDataset, k: int) -> None:
    """k must lie in [2, n]."""
    with pytest.raises(ValueError):
        stratified_k_folds(toy_onehot, k, seed=0)


def test_profile_dataset() -> None:
    """Tic-tac-toe is small, narrow, binary and mildly imbalanced."""
    ds, _ = binarize(load_builtin("tic-tac-toe"))
    profile = profile_dataset(ds, "tic-tac-toe", cart_gap=0.12)
    assert profile.size_class == "S"
    assert profile.feature_class == "S"
    assert profile.class_type == "B"
    assert profile.imbalance == "B"
    assert profile.overfitting == "E"
