"""File formats for matrices, reports and rankings.

All writers are deterministic: fixed float formatting (repr round-trip),
no timestamps, sorted keys in JSON. Byte-level examples live in
docs/formats.md.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .linalg import SymMatrix, as_matrix

__all__ = [
    "save_solution_matrix",
    "load_solution_matrix",
    "save_matrix_csv",
    "load_matrix_csv",
    "save_json",
    "save_table_csv",
    "save_ranking_csv",
    "save_embedding_csv",
]


def _fmt(x: float) -> str:
    return repr(float(x))


def save_solution_matrix(Q, K: float, path) -> None:
    """Kernel matrix CSV: header line `n,K`, then n dense rows."""
    q = as_matrix(Q)
    path = Path(path)
    with path.open("w") as fh:
        fh.write(f"{q.shape[0]},{_fmt(K)}\n")
        for row in q:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def load_solution_matrix(path) -> tuple[SymMatrix, float]:
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip().split(",")
        if len(header) != 2:
            raise ValueError(f"{path.name}: expected header 'n,K'")
        n = int(header[0])
        k = float(header[1])
        rows = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            cells = line.split(",")
            if len(cells) != n:
                raise ValueError(f"{path.name}: row at line {lineno} has {len(cells)} cells, expected {n}")
            rows.append([float(c) for c in cells])
    if len(rows) != n:
        raise ValueError(f"{path.name}: expected {n} rows, found {len(rows)}")
    return SymMatrix(np.asarray(rows)), k


def save_matrix_csv(a, path) -> None:
    """Plain dense matrix CSV, no header."""
    arr = np.atleast_2d(np.asarray(a, dtype=float))
    with Path(path).open("w") as fh:
        for row in arr:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    rows = []
    with Path(path).open() as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([float(c) for c in line.split(",")])
    return np.asarray(rows)


def save_json(obj, path) -> None:
    with Path(path).open("w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_table_csv(rows: list[dict], columns: list[str], path) -> None:
    """CSV with a named-column header, one dict per row."""
    with Path(path).open("w") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            cells = []
            for c in columns:
                v = row[c]
                cells.append(str(v) if isinstance(v, int) else _fmt(v))
            fh.write(",".join(cells) + "\n")


def save_ranking_csv(ranking, path) -> None:
    """Sorted pair list: i,j,geodesic per line (inf for unreachable)."""
    with Path(path).open("w") as fh:
        fh.write("i,j,geodesic\n")
        for i, j, d in ranking:
            fh.write(f"{i},{j},{_fmt(d) if np.isfinite(d) else 'inf'}\n")


def save_embedding_csv(coords, path) -> None:
    """Embedding coordinates, one row per point."""
    save_matrix_csv(coords, path)
