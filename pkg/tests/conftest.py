"""Test configuration for pytest.

This module provides the four-row toy dataset in its raw, one-hot and
original binary forms, plus a seeded generator of random binary instances.
"""

from pathlib import Path
from typing import Callable, Optional

import numpy as np
import pytest

from src.rolltree.models.dataset import BinaryDataset, RawDataset
from src.rolltree.services.data import binarize, from_frame
from src.rolltree.services.datasets import toy_dataset, toy_frame

TOY_CSV = "x1,x2,x3,y\n1,0,1,A\n1,0,0,B\n0,0,1,B\n1,1,1,B\n"

RandomInstance = Callable[..., BinaryDataset]


@pytest.fixture
def toy_csv(tmp_path: Path) -> Path:
    """Write the toy dataset as a CSV file.

    Returns:
        Path to the file.
    """
    path = tmp_path / "toy.csv"
    path.write_text(TOY_CSV, encoding="utf-8")
    return path


@pytest.fixture
def toy_raw() -> RawDataset:
    """The toy dataset before binarization."""
    return from_frame(toy_frame(), "y")


@pytest.fixture
def toy_onehot(toy_raw: RawDataset) -> BinaryDataset:
    """The toy dataset one-hot encoded: x1=0, x1=1, x2=0, x2=1, x3=0, x3=1."""
    ds, _ = binarize(toy_raw)
    return ds


@pytest.fixture
def toy_binary() -> BinaryDataset:
    """The toy dataset in its original three binary columns; A=0, B=1."""
    return toy_dataset()


def make_random_instance(
    seed: int, n: int, p: int, n_classes: int, density: Optional[float] = None
) -> BinaryDataset:
    """Random binary instance in which every class appears.

    Args:
        seed: RNG seed.
        n: Datapoints, at least ``n_classes``.
        p: Features.
        n_classes: Classes.
        density: Probability of a one; drawn at random when omitted.

    Returns:
        BinaryDataset: The instance.
    """
    rng = np.random.default_rng(seed)
    density = rng.uniform(0.2, 0.8) if density is None else density
    X = (rng.random((n, p)) < density).astype(np.uint8)
    y = rng.integers(0, n_classes, size=n)
    y[:n_classes] = np.arange(n_classes)
    return BinaryDataset.from_arrays(X, y)


@pytest.fixture
def random_instance() -> RandomInstance:
    """Factory for seeded random instances."""
    return make_random_instance
