"""Pydantic schemas for solver and tree-growing configuration."""

from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, model_validator

from src.rolltree.models.cost_table import LossKind


class Strategy(str, Enum):
    """Loss selection strategy for the rolling fit."""

    FIXED = "fixed-loss"
    HYBRID = "hybrid"


# Depth up to which the hybrid strategy optimizes misclassification
HYBRID_SWITCH_DEPTH = 5


class Oct2Config(BaseModel):
    """Size constraints for the exact subtree solvers."""

    model_config = ConfigDict(frozen=True)

    n_int: int = Field(0, ge=0, description="Minimum datapoints per internal node")
    n_leaf: int = Field(0, ge=0, description="Minimum datapoints per leaf")
    allow_no_improvement: bool = Field(
        False,
        description=(
            "Install subtrees that do not improve the node's misclassification "
            "(disables premature termination)"
        ),
    )


class FitConfig(BaseModel):
    """Configuration of one rolling-subtree fit."""

    model_config = ConfigDict(frozen=True)

    d_max: int = Field(..., ge=1, description="Maximum tree depth")
    lookahead: int = Field(2, ge=1, le=3, description="Depth of each subproblem")
    loss_kind: LossKind = Field(LossKind.GINI, description="Loss minimized by subproblems")
    oct2_cfg: Oct2Config = Field(default_factory=Oct2Config)
    strategy: Strategy = Field(Strategy.FIXED, description="fixed-loss or hybrid")

    @model_validator(mode="after")
    def validate_hybrid(self) -> "FitConfig":
        """The hybrid strategy is defined for two-step lookahead only."""
        if self.strategy == Strategy.HYBRID and self.lookahead != 2:
            raise ValueError("Hybrid strategy requires lookahead 2")
        return self

    def effective_loss(self) -> LossKind:
        """Loss actually optimized, resolving the hybrid switch."""
        if self.strategy == Strategy.HYBRID:
            if self.d_max <= HYBRID_SWITCH_DEPTH:
                return LossKind.MISCLASSIFICATION
            return LossKind.GINI
        return self.loss_kind
