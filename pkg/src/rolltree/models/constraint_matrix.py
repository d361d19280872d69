"""Constraint matrix of the 2-depth tree program."""

from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class ConstraintMatrix:
    """Rows (1b), (1c) and one (1d, j) per feature over the 2p**2 z columns.

    Columns ``j * p + k`` hold ``z1[j,k]`` (left child split) and columns
    ``p**2 + j * p + l`` hold ``z2[j,l]`` (right child split).

    Attributes:
        rows: Row descriptors.
        cols: Column descriptors.
        entries: Integer matrix of shape (len(rows), len(cols)).
    """

    rows: Tuple[str, ...]
    cols: Tuple[str, ...]
    entries: np.ndarray

    @property
    def shape(self) -> Tuple[int, int]:
        """(rows, columns)."""
        return (len(self.rows), len(self.cols))
