import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def jacobi_spectrum(a, sweeps: int = 60, tol: float = 1e-13):
    """Cyclic Jacobi eigenvalue iteration; independent oracle for tests.

    Returns (eigenvalues ascending, eigenvector columns). Only meant for
    small matrices (n <= ~16).
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    for _ in range(sweeps):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        if off < tol * max(np.abs(np.diag(a)).max(), 1.0):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = 0.5 * np.arctan2(2.0 * a[p, q], a[q, q] - a[p, p])
                c, s = np.cos(theta), np.sin(theta)
                rot = np.eye(n)
                rot[p, p] = c
                rot[q, q] = c
                rot[p, q] = s
                rot[q, p] = -s
                a = rot.T @ a @ rot
                v = v @ rot
    w = np.diag(a).copy()
    order = np.argsort(w)
    return w[order], v[:, order]
