"""Dataset ingestion, binarization and cross-validation folds."""

import logging
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from src.rolltree.exceptions import DatasetError, SchemaMismatchError
from src.rolltree.models.dataset import BinaryDataset, FoldAssignment, RawDataset
from src.rolltree.schemas.binarization import BinarizationSchema, FeatureEncoding, FeatureKind
from src.rolltree.schemas.report import DatasetProfile

logger = logging.getLogger(__name__)


def from_frame(frame: pd.DataFrame, label_column: str) -> RawDataset:
    """Wrap a table of string cells as a RawDataset.

    Feature columns whose values all parse as numbers become float columns;
    the label column stays textual.

    Args:
        frame: Table with one row per record.
        label_column: Name of the class label column.

    Returns:
        RawDataset: The parsed dataset.

    Raises:
        DatasetError: If the label column is absent, there are no rows or no
            feature columns, or a cell is missing.
    """
    frame = frame.copy()
    frame.columns = [str(c).strip() for c in frame.columns]
    if label_column not in frame.columns:
        raise DatasetError(f"Label column '{label_column}' not found in {list(frame.columns)}")
    if len(frame) == 0:
        raise DatasetError("Dataset has no data rows")
    if len(frame.columns) < 2:
        raise DatasetError("Dataset has no feature columns")

    _check_complete(frame)

    frame = frame.astype(str).apply(lambda col: col.str.strip())
    numeric: List[str] = []
    for name in frame.columns:
        if name == label_column:
            continue
        converted = pd.to_numeric(frame[name], errors="coerce")
        if converted.notna().all():
            frame[name] = converted.astype(float)
            numeric.append(name)

    return RawDataset(frame=frame, label_column=label_column, numeric_columns=tuple(numeric))


def read_records(path: Union[str, Path], delimiter: str = ",") -> pd.DataFrame:
    """Read a delimited text file with a header row into a table of strings.

    Every data row must have exactly as many fields as the header, and no
    field may be blank.

    Args:
        path: File to read.
        delimiter: Field separator.

    Returns:
        pd.DataFrame: One row per record, values stripped of whitespace.

    Raises:
        FileNotFoundError: If the file does not exist.
        DatasetError: On ragged rows, blank fields or an empty file.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Input file not found: {path}")

    def _ragged(fields: List[str]) -> None:
        raise DatasetError(f"Ragged row in {path}: {len(fields)} fields {fields}")

    try:
        frame = pd.read_csv(
            path,
            sep=delimiter,
            dtype=str,
            keep_default_na=False,
            engine="python",
            on_bad_lines=_ragged,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError as e:
        raise DatasetError(f"Input file is empty: {path}") from e
    except pd.errors.ParserError as e:
        raise DatasetError(f"Cannot parse {path}: {e}") from e

    # pandas turns a surplus leading field into an index instead of failing
    if not isinstance(frame.index, pd.RangeIndex):
        raise DatasetError(f"Ragged rows in {path}: more fields than the header")

    frame.columns = [str(c).strip() for c in frame.columns]
    _check_complete(frame)
    return frame.apply(lambda col: col.str.strip())


def _check_complete(frame: pd.DataFrame) -> None:
    missing = frame.isna() | (frame.astype(str).apply(lambda col: col.str.strip()) == "")
    if missing.to_numpy().any():
        row, col = np.argwhere(missing.to_numpy())[0]
        raise DatasetError(
            f"Row {row + 1} has no value for column '{frame.columns[col]}' (ragged or missing)"
        )


def load_csv(path: Union[str, Path], label_column: str, delimiter: str = ",") -> RawDataset:
    """Read a delimited text file with a header row.

    Args:
        path: File to read.
        label_column: Name of the class label column.
        delimiter: Field separator.

    Returns:
        RawDataset: One record per data row.

    Raises:
        FileNotFoundError: If the file does not exist.
        DatasetError: On ragged rows, a missing label column or no data.
    """
    raw = from_frame(read_records(path, delimiter), label_column)
    logger.info(
        f"Loaded {raw.n_rows} rows from {path} ({len(raw.numeric_columns)} numeric, "
        f"{len(raw.feature_columns) - len(raw.numeric_columns)} categorical features)"
    )
    return raw


def _sorted_classes(labels: pd.Series) -> List[str]:
    values = sorted(set(labels))
    numeric = pd.to_numeric(pd.Series(values), errors="coerce")
    if numeric.notna().all():
        return [v for _, v in sorted(zip(numeric, values))]
    return values


def _fit_encoding(
    name: str,
    values: pd.Series,
    numeric: bool,
    first_column: int,
    max_categorical_unique: int,
    quantile_bins: int,
) -> FeatureEncoding:
    distinct = values.unique()
    if len(distinct) == 1:
        logger.warning(f"Feature '{name}' is constant; its binary column carries no information")

    if numeric and len(distinct) >= max_categorical_unique:
        v = values.to_numpy(dtype=np.float64)
        cuts = np.quantile(v, [i / quantile_bins for i in range(1, quantile_bins)], method="higher")
        boundaries = [float(b) for b in np.unique(cuts) if b > v.min()]
        return FeatureEncoding(
            name=name,
            kind=FeatureKind.QUANTILE,
            numeric=True,
            boundaries=boundaries,
            columns=list(range(first_column, first_column + len(boundaries) + 1)),
        )

    categories = sorted(float(c) for c in distinct) if numeric else sorted(str(c) for c in distinct)
    return FeatureEncoding(
        name=name,
        kind=FeatureKind.CATEGORICAL,
        numeric=numeric,
        categories=categories,
        columns=list(range(first_column, first_column + len(categories))),
    )


def binarize(
    raw: RawDataset, max_categorical_unique: int = 7, quantile_bins: int = 4
) -> Tuple[BinaryDataset, BinarizationSchema]:
    """One-hot encode categorical features and quantile-bin numeric ones.

    Args:
        raw: Parsed table.
        max_categorical_unique: Numeric columns with fewer distinct values
            are treated as categorical.
        quantile_bins: Number of sample-quantile groups for other numeric
            columns; duplicate cut points merge bins.

    Returns:
        Tuple[BinaryDataset, BinarizationSchema]: The binary dataset and the
            schema that reproduces it.
    """
    if quantile_bins < 2:
        raise ValueError(f"quantile_bins must be >= 2, got {quantile_bins}")
    if raw.n_rows < 1:
        raise DatasetError("Cannot binarize an empty dataset")

    frame = raw.frame
    labels = frame[raw.label_column].astype(str)
    class_names = _sorted_classes(labels)

    features: List[FeatureEncoding] = []
    next_column = 0
    for name in raw.feature_columns:
        encoding = _fit_encoding(
            name,
            frame[name],
            name in raw.numeric_columns,
            next_column,
            max_categorical_unique,
            quantile_bins,
        )
        features.append(encoding)
        next_column += len(encoding.columns)

    schema = BinarizationSchema(
        label_column=raw.label_column, class_names=class_names, features=features
    )
    class_ids = {name: c for c, name in enumerate(class_names)}
    y = labels.map(class_ids).to_numpy(dtype=np.int64)
    X = apply_schema(raw, schema)

    ds = BinaryDataset(
        X=X,
        y=y,
        class_names=tuple(class_names),
        feature_names=tuple(schema.feature_names()),
        schema=schema,
    )
    logger.info(
        f"Binarized {raw.n_rows} rows: {len(features)} features -> p={ds.p} binary columns, "
        f"{ds.n_classes} classes"
    )
    return ds, schema


def apply_schema(
    raw: Union[RawDataset, pd.DataFrame], schema: BinarizationSchema, strict: bool = False
) -> np.ndarray:
    """Encode raw records with a fitted schema.

    Unseen categories encode as an all-zero group.

    Args:
        raw: Records to encode; the label column, if present, is ignored.
        schema: Fitted binarization.
        strict: Also reject columns the schema does not know.

    Returns:
        np.ndarray: Binary matrix of shape (rows, schema.n_columns).

    Raises:
        SchemaMismatchError: If a schema feature is missing, an extra column
            is present under ``strict``, or a binned feature is not numeric.
    """
    frame = raw.frame if isinstance(raw, RawDataset) else raw
    columns = [str(c).strip() for c in frame.columns]

    missing = [f.name for f in schema.features if f.name not in columns]
    if missing:
        raise SchemaMismatchError(f"Input lacks model features: {missing}")
    if strict:
        extra = [c for c in columns if c not in schema.feature_columns and c != schema.label_column]
        if extra:
            raise SchemaMismatchError(f"Input has columns unknown to the model: {extra}")

    frame = frame.set_axis(columns, axis=1)
    n_rows = len(frame)
    X = np.zeros((n_rows, schema.n_columns), dtype=np.uint8)
    rows = np.arange(n_rows)

    for feature in schema.features:
        values = frame[feature.name]
        if feature.kind == FeatureKind.QUANTILE or feature.numeric:
            parsed = pd.to_numeric(values, errors="coerce").to_numpy(dtype=np.float64)
            if feature.kind == FeatureKind.QUANTILE:
                if np.isnan(parsed).any():
                    raise SchemaMismatchError(f"Feature '{feature.name}' needs numeric values")
                bins = np.searchsorted(np.asarray(feature.boundaries), parsed, side="right")
                X[rows, np.asarray(feature.columns)[bins]] = 1
                continue
            for column, category in zip(feature.columns, feature.categories):
                X[:, column] = parsed == float(category)
        else:
            text = values.astype(str).str.strip().to_numpy()
            for column, category in zip(feature.columns, feature.categories):
                X[:, column] = text == str(category)
    return X


def stratified_k_folds(ds: BinaryDataset, k: int, seed: int) -> FoldAssignment:
    """Assign datapoints to k folds, round-robin within each shuffled class.

    The round-robin position carries over from one class to the next so that
    fold sizes stay balanced overall.

    Args:
        ds: The dataset.
        k: Number of folds, 2 <= k <= n.
        seed: RNG seed.

    Returns:
        FoldAssignment: Deterministic given (ds, k, seed).
    """
    if not 2 <= k <= ds.n:
        raise ValueError(f"Fold count must satisfy 2 <= k <= n={ds.n}, got {k}")

    class_sizes = np.bincount(ds.y, minlength=ds.n_classes)
    smallest = int(class_sizes[class_sizes > 0].min())
    if k > smallest:
        logger.warning(
            f"k={k} exceeds the smallest class size {smallest}; some folds miss that class"
        )

    rng = np.random.default_rng(seed)
    fold_of = np.empty(ds.n, dtype=np.int64)
    offset = 0
    for c in range(ds.n_classes):
        members = rng.permutation(np.flatnonzero(ds.y == c))
        fold_of[members] = (offset + np.arange(members.size)) % k
        offset = (offset + members.size) % k
    return FoldAssignment(fold_of=fold_of, k=k, seed=seed)


def _size_class(value: int, small: int, medium: int) -> str:
    if value <= small:
        return "S"
    if value <= medium:
        return "M"
    return "L"


def profile_dataset(
    ds: BinaryDataset, name: str = "dataset", cart_gap: Optional[float] = None
) -> DatasetProfile:
    """Group a dataset by size, width, class count and imbalance.

    Args:
        ds: The dataset.
        name: Dataset label for reports.
        cart_gap: Train minus test accuracy of a CART baseline, if measured.

    Returns:
        DatasetProfile: The characteristics.
    """
    class_sizes = np.bincount(ds.y, minlength=ds.n_classes)
    minority_share = float(class_sizes.min() / ds.n)
    if minority_share > 0.30:
        imbalance = "B"
    elif minority_share >= 0.10:
        imbalance = "I"
    else:
        imbalance = "HI"

    overfitting = None
    if cart_gap is not None:
        overfitting = "E" if cart_gap >= 0.10 else "NE"

    return DatasetProfile(
        name=name,
        n=ds.n,
        p=ds.p,
        n_classes=ds.n_classes,
        size_class=_size_class(ds.n, 1000, 10_000),
        feature_class=_size_class(ds.p, 30, 100),
        class_type="B" if ds.n_classes == 2 else "M",
        minority_share=minority_share,
        imbalance=imbalance,
        overfitting=overfitting,
    )
