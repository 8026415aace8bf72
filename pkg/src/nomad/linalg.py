"""Dense symmetric linear algebra and the Lanczos extreme-eigenpair engine.

Everything in here is pure: functions take arrays (or SymMatrix) and return
fresh objects. Matrices are dense; the co-association kernels this toolkit
manipulates are dense by nature.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SymMatrix",
    "EigPair",
    "as_matrix",
    "gramian",
    "neg_half_sqdist",
    "project_out_ones",
    "lanczos_extreme",
    "min_eigenvalue",
    "ones_projector_matvec",
]

_ASYMMETRY_WARN = 1e-8


@dataclass(frozen=True)
class SymMatrix:
    """Dense n-by-n real symmetric matrix.

    Symmetry is enforced at construction by averaging (M + M.T) / 2; a
    warning is emitted when the input asymmetry exceeds 1e-8 relative
    (CSV-ingested matrices may carry rounding).
    """

    a: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValueError("matrix dimension must be >= 1")
        if not np.all(np.isfinite(a)):
            i, j = np.argwhere(~np.isfinite(a))[0]
            raise ValueError(f"non-finite entry at ({i}, {j})")
        asym = np.abs(a - a.T).max()
        scale = max(np.abs(a).max(), 1e-300)
        if asym > _ASYMMETRY_WARN * scale:
            warnings.warn(
                f"input asymmetry {asym:.3e} exceeds {_ASYMMETRY_WARN:g} relative; "
                "symmetrizing",
                stacklevel=2,
            )
        sym = (a + a.T) / 2.0
        sym.setflags(write=False)
        object.__setattr__(self, "a", sym)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.a, dtype=dtype)


def as_matrix(m) -> np.ndarray:
    """Return the underlying ndarray of a SymMatrix, or pass arrays through."""
    if isinstance(m, SymMatrix):
        return m.a
    return np.asarray(m, dtype=float)


@dataclass(frozen=True)
class EigPair:
    """An eigenpair with its actually measured residual ||A v - value v||."""

    value: float
    vector: np.ndarray = field(repr=False)
    residual: float
    converged: bool = True
    iterations: int = 0


def _check_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError(f"expected an n-by-d point array, got shape {pts.shape}")
    if pts.shape[0] < 1 or pts.shape[1] < 1:
        raise ValueError("need at least one point and one dimension")
    if not np.all(np.isfinite(pts)):
        i, j = np.argwhere(~np.isfinite(pts))[0]
        raise ValueError(f"non-finite coordinate at point {i}, dimension {j}")
    return pts


def gramian(points) -> SymMatrix:
    """Pairwise inner-product matrix of the rows of `points`."""
    pts = _check_points(points)
    return SymMatrix(pts @ pts.T)


def neg_half_sqdist(points) -> SymMatrix:
    """Minus one half of the squared Euclidean distance matrix.

    Equals D - (c 1^T + 1 c^T) / 2 with D the Gramian and c its diagonal,
    so for any Q with Q1 = 1 the trace objective differs from the Gramian
    one only by the constant tr(D).
    """
    pts = _check_points(points)
    d = pts @ pts.T
    c = np.diag(d)
    m = d - 0.5 * (c[:, None] + c[None, :])
    # clamp positive fuzz on the diagonal from cancellation
    np.fill_diagonal(m, 0.0)
    return SymMatrix(m)


def project_out_ones(m) -> SymMatrix:
    """Sandwich (I - E_n) M (I - E_n) with E_n = (1/n) 1 1^T.

    The result annihilates the all-ones direction on both sides; applying
    the sandwich twice is a no-op.
    """
    a = as_matrix(m)
    r = a - a.mean(axis=0, keepdims=True)
    r -= r.mean(axis=1, keepdims=True)
    return SymMatrix(r)


def ones_projector_matvec(a: np.ndarray):
    """Matvec closure for (I - E_n) A (I - E_n) without forming the sandwich."""

    def matvec(x: np.ndarray) -> np.ndarray:
        w = x - x.mean()
        y = a @ w
        return y - y.mean()

    return matvec


def lanczos_extreme(
    matvec,
    n: int,
    which: str = "largest",
    tol: float = 1e-8,
    max_iter: int = 300,
    seed: int = 0,
) -> EigPair:
    """Extreme algebraic eigenpair of a symmetric operator via Lanczos.

    Full reorthogonalization, seeded random start vector, restarted once on
    stagnation. `which` selects the largest or smallest algebraic end (the
    smallest is obtained by running on the negated operator, never by
    spectral shifting). The returned residual is measured explicitly; the
    convergence target is tol times the running spectral-norm estimate.

    A non-converged run returns the best pair found with converged=False;
    callers tolerant of crude eigenvectors may accept it.
    """
    if which not in ("largest", "smallest"):
        raise ValueError(f"which must be 'largest' or 'smallest', not {which!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if n < 1:
        raise ValueError("operator dimension must be >= 1")
    sign = 1.0 if which == "largest" else -1.0
    rng = np.random.default_rng(seed)

    if n == 1:
        v = np.ones(1)
        lam = float(matvec(v)[0])
        return EigPair(lam, v, 0.0, True, 1)

    def op(x):
        return sign * np.asarray(matvec(x), dtype=float)

    best: tuple[float, np.ndarray, float] | None = None
    total_iters = 0
    for restart in range(2):
        theta, y, basis, spec_est, iters, stalled = _lanczos_run(
            op, n, rng, tol, max_iter
        )
        total_iters += iters
        v = basis @ y
        v /= np.linalg.norm(v)
        av = op(v)
        lam = float(v @ av)
        res = float(np.linalg.norm(av - lam * v))
        if best is None or lam > best[0]:
            best = (lam, v, res)
        if res <= tol * max(spec_est, 1e-300) or not stalled:
            break
    lam, v, res = best
    spec_scale = max(abs(lam), 1e-300)
    converged = res <= tol * spec_scale * 1.001 or res <= tol
    return EigPair(sign * lam, v, res, bool(converged), total_iters)


def _lanczos_run(op, n, rng, tol, max_iter):
    """One full-reorthogonalized Lanczos sweep; returns the top Ritz pair."""
    m = min(n, max_iter)
    basis = np.empty((n, m))
    alphas = np.empty(m)
    betas = np.empty(m)
    q = rng.standard_normal(n)
    q /= np.linalg.norm(q)
    theta = 0.0
    y = np.array([1.0])
    spec_est = 0.0
    j = 0
    stalled = True
    for j in range(m):
        basis[:, j] = q
        u = op(q)
        a = float(q @ u)
        alphas[j] = a
        r = u - a * q
        if j > 0:
            r -= betas[j - 1] * basis[:, j - 1]
        # full reorthogonalization keeps the Ritz basis honest
        r -= basis[:, : j + 1] @ (basis[:, : j + 1].T @ r)
        b = float(np.linalg.norm(r))
        t_mat = np.diag(alphas[: j + 1])
        if j > 0:
            idx = np.arange(j)
            t_mat[idx, idx + 1] = betas[:j]
            t_mat[idx + 1, idx] = betas[:j]
        w, vecs = np.linalg.eigh(t_mat)
        theta = w[-1]
        y = vecs[:, -1]
        spec_est = max(spec_est, float(np.abs(w).max()))
        resid_est = b * abs(y[-1])
        if resid_est <= tol * max(spec_est, 1e-300):
            stalled = False
            break
        if b < 1e-14 * max(spec_est, 1.0):
            # invariant subspace exhausted; the Ritz pair is exact
            stalled = False
            break
        betas[j] = b
        q = r / b
    return theta, y, basis[:, : j + 1], spec_est, j + 1, stalled


def min_eigenvalue(m, tol: float = 1e-8, seed: int = 0) -> float:
    """Smallest algebraic eigenvalue of a symmetric matrix (diagnostics)."""
    a = as_matrix(m)
    pair = lanczos_extreme(
        lambda x: a @ x, a.shape[0], which="smallest", tol=tol, seed=seed
    )
    return pair.value
