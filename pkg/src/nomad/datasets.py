"""Synthetic dataset generators, noise injection, and CSV ingestion.

All generators are deterministic for a fixed seed. Points are n-by-d row
arrays; labels, when meaningful, identify the ground-truth manifold each
point was sampled from.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

__all__ = [
    "Dataset",
    "ring",
    "two_rings",
    "moons",
    "double_swiss_roll",
    "trefoil_knot",
    "grid2d_in_10d",
    "gaussian_blobs",
    "add_noise_dims",
    "load_csv",
    "save_csv",
]


@dataclass(frozen=True)
class Dataset:
    points: np.ndarray
    labels: np.ndarray | None = None
    name: str = ""
    seed: int = 0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2:
            raise ValueError(f"points must be n-by-d, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("points contain non-finite values")
        object.__setattr__(self, "points", pts)
        if self.labels is not None:
            lab = np.asarray(self.labels, dtype=int)
            if lab.shape != (pts.shape[0],):
                raise ValueError("labels must have one entry per point")
            object.__setattr__(self, "labels", lab)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _require_size(n: int):
    if n < 3:
        raise ValueError(f"need at least 3 points, got {n}")


def ring(n: int, radius: float = 1.0, seed: int = 0) -> Dataset:
    """n points uniformly spaced on a circle of the given radius."""
    _require_size(n)
    ang = 2.0 * np.pi * np.arange(n) / n
    pts = radius * np.column_stack([np.cos(ang), np.sin(ang)])
    return Dataset(pts, np.zeros(n, dtype=int), f"ring{n}", seed)


def two_rings(n_each: int, r1: float = 1.0, r2: float = 3.0, seed: int = 0) -> Dataset:
    """Two concentric rings; the radius gap keeps their kernels disjoint."""
    _require_size(n_each)
    a = ring(n_each, r1)
    b = ring(n_each, r2)
    pts = np.vstack([a.points, b.points])
    labels = np.repeat([0, 1], n_each)
    return Dataset(pts, labels, f"two_rings{2 * n_each}", seed)


def moons(n_each: int, noise_std: float = 0.05, offset: float = 0.3,
          seed: int = 0) -> Dataset:
    """Two interleaved semicircles with isotropic Gaussian noise.

    The second moon is mirrored, shifted right by one radius and raised by
    `offset`; smaller offsets interleave the moons more tightly.
    """
    _require_size(n_each)
    rng = np.random.default_rng(seed)
    t = np.linspace(0.0, np.pi, n_each)
    upper = np.column_stack([np.cos(t), np.sin(t)])
    lower = np.column_stack([1.0 - np.cos(t), offset - np.sin(t)])
    pts = np.vstack([upper, lower])
    pts = pts + rng.normal(0.0, noise_std, pts.shape)
    labels = np.repeat([0, 1], n_each)
    return Dataset(pts, labels, f"moons{2 * n_each}", seed)


def _equal_arc_params(n: int, t_lo: float, t_hi: float, radial_shift: float) -> np.ndarray:
    """Spiral angles that space points uniformly by arc length.

    Uniform-in-t sampling leaves holes comparable to the sheet gap; equal
    arc spacing keeps the within-sheet neighbor distance tight.
    """
    grid = np.linspace(t_lo, t_hi, 40 * n)
    speed = np.sqrt(1.0 + (grid + radial_shift) ** 2)
    arc = np.concatenate([[0.0], np.cumsum((speed[1:] + speed[:-1]) / 2 * np.diff(grid))])
    targets = (np.arange(n) + 0.5) / n * arc[-1]
    return np.interp(targets, arc, grid)


def double_swiss_roll(n_each: int, gap: float = np.pi, height: float = 1.0,
                      seed: int = 0) -> Dataset:
    """Two interleaved swiss rolls (r cos t, h, r sin t), t in [1.5pi, 4.5pi].

    The second roll has radius t + gap; the default gap of pi, half the
    2*pi sheet spacing, interleaves the sheets at maximal clearance.
    Points are spaced uniformly in arc length with random heights.
    """
    _require_size(n_each)
    rng = np.random.default_rng(seed)

    def roll(radial_shift):
        t = _equal_arc_params(n_each, 1.5 * np.pi, 4.5 * np.pi, radial_shift)
        h = height * rng.random(n_each)
        r = t + radial_shift
        return np.column_stack([r * np.cos(t), h, r * np.sin(t)])

    pts = np.vstack([roll(0.0), roll(gap)])
    labels = np.repeat([0, 1], n_each)
    return Dataset(pts, labels, f"double_swiss_roll{2 * n_each}", seed)


def trefoil_knot(n: int, seed: int = 0) -> Dataset:
    """Closed trefoil curve (sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t)."""
    _require_size(n)
    t = 2.0 * np.pi * np.arange(n) / n
    pts = np.column_stack([
        np.sin(t) + 2.0 * np.sin(2.0 * t),
        np.cos(t) - 2.0 * np.cos(2.0 * t),
        -np.sin(3.0 * t),
    ])
    return Dataset(pts, np.zeros(n, dtype=int), f"trefoil{n}", seed)


def grid2d_in_10d(side: int, noise_std: float = 0.1, seed: int = 0) -> Dataset:
    """Regular side-by-side 2D grid in dims 0-1; dims 2-9 are Gaussian noise."""
    if side < 2:
        raise ValueError("side must be >= 2")
    rng = np.random.default_rng(seed)
    axis = np.linspace(0.0, 1.0, side)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    n = side * side
    pts = np.zeros((n, 10))
    pts[:, 0] = gx.ravel()
    pts[:, 1] = gy.ravel()
    pts[:, 2:] = rng.normal(0.0, noise_std, (n, 8)) if noise_std > 0 else 0.0
    return Dataset(pts, np.zeros(n, dtype=int), f"grid{side}x{side}", seed)


def gaussian_blobs(n_each: int, centers, std: float = 1.0, seed: int = 0) -> Dataset:
    """Isotropic Gaussian clusters around the given centers."""
    _require_size(n_each)
    rng = np.random.default_rng(seed)
    centers = np.atleast_2d(np.asarray(centers, dtype=float))
    chunks = [rng.normal(c, std, (n_each, centers.shape[1])) for c in centers]
    labels = np.repeat(np.arange(len(centers)), n_each)
    return Dataset(np.vstack(chunks), labels, f"blobs{len(centers)}", seed)


def add_noise_dims(data: Dataset, multiplier: int = 5, noise_std: float = 0.05,
                   seed: int = 0) -> Dataset:
    """Append multiplier*d pure-noise dimensions; original coordinates stay."""
    rng = np.random.default_rng(seed)
    d = data.dim
    extra = multiplier * d
    noise = rng.normal(0.0, noise_std, (data.n, extra)) if noise_std > 0 else np.zeros((data.n, extra))
    pts = np.hstack([data.points, noise])
    return Dataset(pts, data.labels, f"{data.name}+noise{noise_std:g}", seed)


def save_csv(data: Dataset, path, with_labels: bool = True) -> None:
    """Write points (and labels, if present) as comma-separated rows."""
    path = Path(path)
    with path.open("w") as fh:
        cols = [f"x{j}" for j in range(data.dim)]
        if with_labels and data.labels is not None:
            cols.append("label")
        fh.write("# " + ",".join(cols) + "\n")
        for i in range(data.n):
            row = [repr(float(v)) for v in data.points[i]]
            if with_labels and data.labels is not None:
                row.append(str(int(data.labels[i])))
            fh.write(",".join(row) + "\n")


def load_csv(path, has_labels: bool = False) -> Dataset:
    """Read a rectangular numeric CSV; optional final integer label column.

    Lines starting with '#' are comments. Ragged rows and non-numeric cells
    are rejected with the offending row number.
    """
    path = Path(path)
    rows = []
    width = None
    with path.open() as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            cells = line.split(",")
            if width is None:
                width = len(cells)
            elif len(cells) != width:
                raise ValueError(f"{path.name}: ragged row at line {lineno}")
            try:
                rows.append([float(c) for c in cells])
            except ValueError:
                raise ValueError(
                    f"{path.name}: non-numeric cell at line {lineno}"
                ) from None
    if not rows:
        raise ValueError(f"{path.name}: no data rows")
    arr = np.asarray(rows, dtype=float)
    labels = None
    if has_labels:
        if arr.shape[1] < 2:
            raise ValueError(f"{path.name}: label column requested but only one column present")
        labels = arr[:, -1].astype(int)
        if not np.allclose(arr[:, -1], labels):
            raise ValueError(f"{path.name}: label column is not integral")
        arr = arr[:, :-1]
    return Dataset(arr, labels, path.stem)
