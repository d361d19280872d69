"""Reproducible benchmark datasets.

All tables are generated in memory: the four-row toy example, the complete
MONK's attribute space labeled by the three target concepts, the tic-tac-toe
endgame boards reachable by legal play, and a planted-tree synthetic
generator for timing runs.
"""

import itertools
import logging
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
import pandas as pd

from src.rolltree.models.dataset import BinaryDataset, RawDataset
from src.rolltree.services.data import from_frame

logger = logging.getLogger(__name__)

MONKS_DOMAINS = {"a1": 3, "a2": 3, "a3": 2, "a4": 3, "a5": 4, "a6": 2}

TIC_TAC_TOE_SQUARES = [
    "top-left", "top-middle", "top-right",
    "middle-left", "middle-middle", "middle-right",
    "bottom-left", "bottom-middle", "bottom-right",
]

_LINES = [
    (0, 1, 2), (3, 4, 5), (6, 7, 8),
    (0, 3, 6), (1, 4, 7), (2, 5, 8),
    (0, 4, 8), (2, 4, 6),
]


def toy_frame() -> pd.DataFrame:
    """The four-row example: only (1, 0, 1) is class A."""
    return pd.DataFrame(
        {
            "x1": ["1", "1", "0", "1"],
            "x2": ["0", "0", "0", "1"],
            "x3": ["1", "0", "1", "1"],
            "y": ["A", "B", "B", "B"],
        }
    )


def toy_dataset() -> BinaryDataset:
    """The four-row example in its original three binary columns."""
    frame = toy_frame()
    X = frame[["x1", "x2", "x3"]].astype(int).to_numpy()
    y = (frame["y"] == "B").astype(int).to_numpy()
    return BinaryDataset.from_arrays(X, y, class_names=("A", "B"), feature_names=("x1", "x2", "x3"))


def _monks_concept(problem: int) -> Callable[[Dict[str, int]], bool]:
    if problem == 1:
        return lambda a: a["a1"] == a["a2"] or a["a5"] == 1
    if problem == 2:
        return lambda a: sum(1 for v in a.values() if v == 1) == 2
    if problem == 3:
        return lambda a: (a["a5"] == 3 and a["a4"] == 1) or (a["a5"] != 4 and a["a2"] != 3)
    raise ValueError(f"MONK's problems are numbered 1-3, got {problem}")


def monks_frame(problem: int) -> pd.DataFrame:
    """All 432 attribute combinations labeled by a MONK's concept.

    The third problem is labeled without its training noise.
    """
    concept = _monks_concept(problem)
    names = list(MONKS_DOMAINS)
    rows = []
    for values in itertools.product(*(range(1, size + 1) for size in MONKS_DOMAINS.values())):
        record = dict(zip(names, values))
        row = {name: str(v) for name, v in record.items()}
        row["class"] = "1" if concept(record) else "0"
        rows.append(row)
    return pd.DataFrame(rows, columns=names + ["class"])


def _winner(board: Tuple[str, ...]) -> Optional[str]:
    for a, b, c in _LINES:
        if board[a] != "b" and board[a] == board[b] == board[c]:
            return board[a]
    return None


def tic_tac_toe_frame() -> pd.DataFrame:
    """Every distinct final board of a legal game where x moves first.

    A board is positive when x has three in a row.
    """
    finals = set()
    seen = set()
    stack: List[Tuple[Tuple[str, ...], str]] = [(("b",) * 9, "x")]
    while stack:
        board, player = stack.pop()
        if (board, player) in seen:
            continue
        seen.add((board, player))
        if _winner(board) is not None or "b" not in board:
            finals.add(board)
            continue
        following = "o" if player == "x" else "x"
        for square, mark in enumerate(board):
            if mark == "b":
                stack.append((board[:square] + (player,) + board[square + 1 :], following))

    rows = []
    for board in sorted(finals):
        row = dict(zip(TIC_TAC_TOE_SQUARES, board))
        row["class"] = "positive" if _winner(board) == "x" else "negative"
        rows.append(row)
    return pd.DataFrame(rows, columns=TIC_TAC_TOE_SQUARES + ["class"])


def planted_dataset(
    n: int, p: int, seed: int = 0, depth: int = 3, noise: float = 0.10
) -> BinaryDataset:
    """Fair-coin features labeled by a random planted tree plus label noise.

    Args:
        n: Datapoints.
        p: Binary features.
        seed: RNG seed.
        depth: Depth of the planted complete tree.
        noise: Fraction of labels flipped at random.

    Returns:
        BinaryDataset: Two-class dataset with both classes present.
    """
    if n < 2 or p < 1:
        raise ValueError(f"Planted dataset needs n >= 2 and p >= 1, got n={n}, p={p}")
    rng = np.random.default_rng(seed)
    X = rng.integers(0, 2, size=(n, p), dtype=np.uint8)

    n_internal = 2**depth - 1
    split_features = rng.integers(0, p, size=n_internal)
    leaf_labels = rng.permutation(np.arange(2**depth) % 2)

    node = np.zeros(n, dtype=np.int64)
    for _ in range(depth):
        bits = X[np.arange(n), split_features[node]]
        node = 2 * node + 1 + bits
    y = leaf_labels[node - n_internal].astype(np.int64)

    flip = rng.random(n) < noise
    y = np.where(flip, 1 - y, y)
    if np.unique(y).size < 2:
        y[0] = 1 - y[0]
    return BinaryDataset.from_arrays(X, y, class_names=("0", "1"))


BUILTIN_DATASETS: Dict[str, Tuple[Callable[[], pd.DataFrame], str]] = {
    "toy": (toy_frame, "y"),
    "monks-1": (lambda: monks_frame(1), "class"),
    "monks-2": (lambda: monks_frame(2), "class"),
    "monks-3": (lambda: monks_frame(3), "class"),
    "tic-tac-toe": (tic_tac_toe_frame, "class"),
}


def load_builtin(name: str) -> RawDataset:
    """Raw table of a bundled dataset by name."""
    if name not in BUILTIN_DATASETS:
        raise ValueError(f"Unknown dataset '{name}'. Choose from: {', '.join(BUILTIN_DATASETS)}")
    make_frame, label = BUILTIN_DATASETS[name]
    raw = from_frame(make_frame(), label)
    logger.info(f"Generated dataset '{name}' with {raw.n_rows} rows")
    return raw
