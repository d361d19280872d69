"""Pydantic schemas of the model JSON document."""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.rolltree.schemas.binarization import BinarizationSchema


class NodeKind(str, Enum):
    """Node type in a model document."""

    INTERNAL = "internal"
    LEAF = "leaf"


class NodeEntry(BaseModel):
    """One node, with features and labels referenced by name."""

    id: int = Field(..., ge=0)
    kind: NodeKind
    depth: int = Field(..., ge=0)
    split_feature: Optional[str] = Field(None, description="Split feature name (internal)")
    label: Optional[str] = Field(None, description="Majority class name")
    counts: List[int] = Field(..., description="Training class counts")
    children: List[int] = Field(default_factory=list, description="[left (x=0), right (x=1)]")

    @model_validator(mode="after")
    def validate_kind(self) -> "NodeEntry":
        """Internal nodes split with two children; leaves carry a label only."""
        if self.kind == NodeKind.INTERNAL:
            if self.split_feature is None or len(self.children) != 2:
                raise ValueError(f"Internal node {self.id} needs a split feature and two children")
        else:
            if self.label is None or self.children:
                raise ValueError(f"Leaf {self.id} needs a label and no children")
        return self


class TreeDocument(BaseModel):
    """Serialized decision tree."""

    model_config = ConfigDict(populate_by_name=True)

    format_version: int
    classes: List[str]
    features: List[str]
    binarization: Optional[BinarizationSchema] = Field(None, alias="schema")
    nodes: List[NodeEntry]
