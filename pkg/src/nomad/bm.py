"""Low-rank nonnegative-factor heuristic for the trace-objective SDP.

The PSD variable is replaced by Y^T Y with Y an r-by-n factor kept inside
the box [0, 1]; the row-sum and trace constraints are enforced through an
augmented Lagrangian whose multipliers are updated between bound-
constrained quasi-Newton minimizations in Y. Nonconvex, no convergence
guarantee; its value is speed and the light it sheds on the cp-rank of
the convex solutions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .cgm import SdpProblem
from .linalg import as_matrix
from .snmf import SnmfConfig, snmf

__all__ = ["BmConfig", "BmState", "BmReport", "bm_lagrangian", "solve_nomad_bm"]


@dataclass
class BmConfig:
    r: int
    eta: float = 1.0
    sigma: float = 1.0
    varphi: float = 1.0
    max_outer: int = 200
    inner_tol: float = 1e-9
    inner_max_iter: int = 500
    feas_tol: float = 1e-5
    seed: int = 0
    box_upper: float = 1.0
    init_snmf_iters: int = 200

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("factor rank r must be >= 1")
        if min(self.eta, self.sigma, self.varphi, self.inner_tol,
               self.box_upper) <= 0:
            raise ValueError("eta, sigma, varphi, inner_tol, box_upper must be positive")


@dataclass
class BmState:
    Y: np.ndarray       # r-by-n factor, entries in [0, box_upper]
    mu: np.ndarray      # multiplier for Y^T Y 1 = 1
    lam: float          # multiplier for tr(Y^T Y) = K


@dataclass
class BmReport:
    objective: float                 # tr(D Y^T Y) in the original D units
    lagrangian_trace: list[float]
    feas_row_inf: float              # || Y^T Y 1 - 1 ||_inf
    feas_trace: float                # | tr(Y^T Y) - K |
    outer_iters: int
    converged: bool
    stagnated: bool

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "feas_row_inf": self.feas_row_inf,
            "feas_trace": self.feas_trace,
            "outer_iters": self.outer_iters,
            "converged": self.converged,
            "stagnated": self.stagnated,
            "lagrangian_trace": list(self.lagrangian_trace),
        }


def bm_lagrangian(Y, mu, lam, D_normalized, sigma: float, varphi: float,
                  K: float):
    """Augmented Lagrangian value and its exact gradient in the factor Y.

    D is expected pre-normalized by its Frobenius norm so that the trace
    term and the quadratic penalties live on one scale.
    """
    y = np.asarray(Y, dtype=float)
    d = as_matrix(D_normalized)
    mu = np.asarray(mu, dtype=float)
    r, n = y.shape
    if d.shape != (n, n) or mu.shape != (n,):
        raise ValueError("shape mismatch between Y, mu and D")

    yd = y @ d
    y1 = y @ np.ones(n)
    u = y.T @ y1 - 1.0                  # row-sum residual Y^T Y 1 - 1
    tr_q = float(np.sum(y * y))
    tdef = tr_q - K

    value = (
        -float(np.sum(yd * y))
        + 0.5 * sigma * float(u @ u)
        - float(mu @ u)
        + 0.5 * varphi * tdef * tdef
        - lam * tdef
    )
    w = sigma * u - mu
    grad = (
        -2.0 * yd
        + np.outer(y1, w)
        + np.outer(y @ w, np.ones(n))
        + (2.0 * (varphi * tdef - lam)) * y
    )
    return value, grad


def _init_factor(d_hat: np.ndarray, r: int, seed: int, box_upper: float,
                 snmf_iters: int) -> np.ndarray:
    """Nonnegative start: symmetric factorization of the positive part."""
    a = np.maximum(d_hat, 0.0)
    res = snmf(a, SnmfConfig(r=r, max_iter=snmf_iters, tol=1e-8, seed=seed))
    return np.clip(res.Y.T, 0.0, box_upper)


def solve_nomad_bm(problem: SdpProblem, config: BmConfig):
    """Alternate bound-constrained minimization in Y with multiplier steps.

    Returns (Y, Q = Y^T Y, report). Stagnation (no Lagrangian decrease over
    three consecutive outer rounds) stops the loop; the best iterate seen
    is returned, flagged via report.stagnated.
    """
    d_orig = problem.D.a
    n = problem.n
    K = float(problem.K)
    if config.r > n:
        raise ValueError(f"factor rank r={config.r} exceeds n={n}")
    scale = np.linalg.norm(d_orig)
    d_hat = d_orig / scale if scale > 0 else d_orig

    y = _init_factor(d_hat, config.r, config.seed, config.box_upper,
                     config.init_snmf_iters)
    state = BmState(Y=y, mu=np.zeros(n), lam=0.0)
    bounds = [(0.0, config.box_upper)] * (config.r * n)
    ones = np.ones(n)

    lagrangian_trace: list[float] = []
    best = (np.inf, state.Y.copy())
    no_progress = 0
    converged = False
    stagnated = False
    outer_done = 0

    for outer in range(1, config.max_outer + 1):
        mu_now, lam_now = state.mu, state.lam

        def fun(yflat):
            val, grad = bm_lagrangian(
                yflat.reshape(config.r, n), mu_now, lam_now, d_hat,
                config.sigma, config.varphi, K,
            )
            return val, grad.ravel()

        res = minimize(
            fun, state.Y.ravel(), jac=True, method="L-BFGS-B", bounds=bounds,
            options={"maxiter": config.inner_max_iter,
                     "ftol": config.inner_tol, "gtol": 1e-12},
        )
        state.Y = np.clip(res.x.reshape(config.r, n), 0.0, config.box_upper)

        u = state.Y.T @ (state.Y @ ones) - 1.0
        tdef = float(np.sum(state.Y * state.Y)) - K
        state.mu = state.mu - config.eta * config.sigma * u
        state.lam = state.lam - config.eta * config.varphi * tdef

        lagrangian_trace.append(float(res.fun))
        outer_done = outer
        resid = max(np.abs(u).max(), abs(tdef))
        # the multiplier loop drives the residual; track the closest-to-
        # feasible iterate and stall out when it stops improving
        if resid < best[0] * (1.0 - 1e-3):
            best = (resid, state.Y.copy())
            no_progress = 0
        else:
            no_progress += 1
            if no_progress >= 3:
                stagnated = True
                break
        if resid <= config.feas_tol:
            converged = True
            break

    y_final = best[1] if stagnated else state.Y
    q = y_final.T @ y_final
    u = q @ ones - 1.0
    report = BmReport(
        objective=float(np.sum(d_orig * q)),
        lagrangian_trace=lagrangian_trace,
        feas_row_inf=float(np.abs(u).max()),
        feas_trace=abs(float(np.trace(q)) - K),
        outer_iters=outer_done,
        converged=converged,
        stagnated=stagnated,
    )
    return y_final, q, report
