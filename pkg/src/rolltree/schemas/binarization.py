"""Pydantic schemas for the binarization of raw tables.

A fitted ``BinarizationSchema`` records, for every original feature, how its
values map onto binary columns so that the same encoding can be re-applied to
test folds and prediction inputs bit-exactly.
"""

from enum import Enum
from typing import List, Union

from pydantic import BaseModel, Field, field_validator, model_validator


class FeatureKind(str, Enum):
    """How an original feature is turned into binary columns."""

    CATEGORICAL = "categorical"
    QUANTILE = "quantile-binned"


def format_value(value: Union[float, str]) -> str:
    """Render a category or boundary value for column names."""
    if isinstance(value, float):
        return f"{value:g}"
    return str(value)


class FeatureEncoding(BaseModel):
    """Encoding of a single original feature."""

    name: str = Field(..., description="Original column name")
    kind: FeatureKind = Field(..., description="categorical or quantile-binned")
    numeric: bool = Field(..., description="Whether the source values are numeric")
    categories: List[Union[float, str]] = Field(
        default_factory=list, description="Distinct values, one column each (categorical)"
    )
    boundaries: List[float] = Field(
        default_factory=list,
        description="Interior cut points in units of the original feature (binned)",
    )
    columns: List[int] = Field(..., description="Emitted binary column indices")

    @field_validator("boundaries")
    @classmethod
    def validate_boundaries(cls, v: List[float]) -> List[float]:
        """Bin boundaries must be strictly increasing."""
        if any(b >= a for b, a in zip(v, v[1:])):
            raise ValueError("Bin boundaries must be strictly increasing")
        return v

    @model_validator(mode="after")
    def validate_column_count(self) -> "FeatureEncoding":
        """One column per category, or one per bin."""
        if self.kind == FeatureKind.CATEGORICAL:
            expected = len(self.categories)
        else:
            expected = len(self.boundaries) + 1
        if len(self.columns) != expected:
            raise ValueError(
                f"Feature '{self.name}' declares {len(self.columns)} columns, "
                f"expected {expected}"
            )
        return self

    def column_names(self) -> List[str]:
        """Human-readable names of the emitted binary columns."""
        if self.kind == FeatureKind.CATEGORICAL:
            return [f"{self.name}={format_value(c)}" for c in self.categories]

        cuts = [format_value(b) for b in self.boundaries]
        if not cuts:
            return [f"{self.name}:all"]
        names = [f"{self.name}<{cuts[0]}"]
        for lo, hi in zip(cuts, cuts[1:]):
            names.append(f"{lo}<={self.name}<{hi}")
        names.append(f"{self.name}>={cuts[-1]}")
        return names


class BinarizationSchema(BaseModel):
    """Fitted mapping from raw records to binary feature vectors."""

    label_column: str = Field(..., description="Name of the class label column")
    class_names: List[str] = Field(..., description="Class names ordered by class id")
    features: List[FeatureEncoding] = Field(..., description="Per-feature encodings")

    @model_validator(mode="after")
    def validate_partition(self) -> "BinarizationSchema":
        """Emitted columns must partition [0, p)."""
        emitted = sorted(c for f in self.features for c in f.columns)
        if emitted != list(range(len(emitted))):
            raise ValueError("Emitted columns do not partition [0, p)")
        return self

    @property
    def n_columns(self) -> int:
        """Number of binary columns p."""
        return sum(len(f.columns) for f in self.features)

    @property
    def feature_columns(self) -> List[str]:
        """Original feature names in encoding order."""
        return [f.name for f in self.features]

    def feature_names(self) -> List[str]:
        """Binary column names ordered by column index."""
        names = [""] * self.n_columns
        for feature in self.features:
            for column, name in zip(feature.columns, feature.column_names()):
                names[column] = name
        return names
