#!/usr/bin/env python3
"""Write the bundled datasets as CSV files.

Usage:
    python scripts/export_datasets.py [output_dir]
"""

import sys
from pathlib import Path

from src.rolltree.services.datasets import BUILTIN_DATASETS, load_builtin


def export_all(output_dir: Path) -> None:
    """Write every bundled dataset to ``output_dir/<name>.csv``.

    Args:
        output_dir: Target directory, created if missing.
    """
    output_dir.mkdir(parents=True, exist_ok=True)
    for name in BUILTIN_DATASETS:
        raw = load_builtin(name)
        path = output_dir / f"{name}.csv"
        raw.frame.to_csv(path, index=False, float_format="%g")
        print(f"✅ {name}: {raw.n_rows} rows -> {path}")


if __name__ == "__main__":
    export_all(Path(sys.argv[1]) if len(sys.argv) > 1 else Path("data"))
