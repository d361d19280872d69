"""Pydantic schemas for exact subtree solutions."""

from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class StumpSolution(BaseModel):
    """Best single split of a node (one-step lookahead)."""

    model_config = ConfigDict(frozen=True)

    feature: int = Field(..., description="Split feature")
    objective: float = Field(..., description="Sum of the two child leaf costs")
    leaf_costs: Tuple[float, float] = Field(..., description="Costs of the x=0 and x=1 leaves")


class Oct2Solution(BaseModel):
    """Optimal 2-depth tree: the nonzero z variables and the objective."""

    model_config = ConfigDict(frozen=True)

    root_feature: int = Field(..., description="Split feature j of the root")
    left_feature: int = Field(..., description="Split feature k of the left child")
    right_feature: int = Field(..., description="Split feature l of the right child")
    objective: float = Field(..., description="Sum of the four leaf costs")
    leaf_costs: Tuple[float, float, float, float] = Field(
        ..., description="c_jk^(0,0), c_jk^(0,1), c_jl^(1,0), c_jl^(1,1)"
    )

    @property
    def features(self) -> Tuple[int, int, int]:
        """The (j, k, l) triple."""
        return (self.root_feature, self.left_feature, self.right_feature)


class Oct3Solution(BaseModel):
    """Optimal 3-depth tree."""

    model_config = ConfigDict(frozen=True)

    root_feature: int = Field(..., description="Split feature i of the root")
    level2_features: Tuple[int, int] = Field(..., description="(j_left, j_right)")
    level3_features: Tuple[int, int, int, int] = Field(
        ..., description="Split features of the four depth-2 nodes, left to right"
    )
    objective: float = Field(..., description="Sum of the eight leaf costs")
    leaf_costs: Tuple[float, float, float, float, float, float, float, float] = Field(
        ..., description="Leaf costs, left to right"
    )

    @property
    def features(self) -> Tuple[int, ...]:
        """All seven split features in (i, j_L, j_R, k_1..k_4) order."""
        return (self.root_feature, *self.level2_features, *self.level3_features)


class TuCheckResult(BaseModel):
    """Outcome of the total-unimodularity sufficiency check."""

    holds: bool = Field(..., description="Whether all three conditions hold")
    m1_rows: List[str] = Field(default_factory=list, description="Rows of partition M1")
    m2_rows: List[str] = Field(default_factory=list, description="Rows of partition M2")
    violating_column: Optional[str] = Field(None, description="First failing column")
    reason: Optional[str] = Field(None, description="Which condition failed")
