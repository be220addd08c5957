"""Classical sparse approximation baselines: OMP and lasso via ISTA.

The lasso objective here is ||A x - b||^2 + lambda_l1 * ||x||_1, i.e. the
quadratic term carries no 1/2 factor; per-iteration soft-thresholding uses
lambda_l1 / (2 L) accordingly.
"""
from __future__ import annotations

import numpy as np

from .solvers import least_squares

__all__ = ["omp", "lasso_ista", "soft_threshold", "lasso_objective"]


def omp(A: np.ndarray, b: np.ndarray, k: int) -> np.ndarray:
    """Orthogonal matching pursuit with exactly k selected columns.

    Per iteration: pick the column most correlated with the residual
    (ties break to the smallest index), refit least squares on the support
    so far, update the residual. Already-selected columns are excluded.
    """
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    M, N = A.shape
    if not 1 <= k <= min(M, N):
        raise ValueError(f"need 1 <= k <= min(M, N) = {min(M, N)}, got k={k}")
    residual = b.copy()
    support: list[int] = []
    z = np.zeros(0)
    for _ in range(k):
        corr = np.abs(A.T @ residual)
        corr[support] = -1.0
        j = int(np.argmax(corr))
        support.append(j)
        z = least_squares(A[:, support], b)
        residual = b - A[:, support] @ z
    x_hat = np.zeros(N)
    x_hat[support] = z
    return x_hat


def soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def lasso_objective(A, b, x, lambda_l1: float) -> float:
    r = A @ x - b
    return float(r @ r + lambda_l1 * np.abs(x).sum())


def _largest_gram_eigenvalue(gram: np.ndarray, iters: int = 100) -> float:
    v = np.ones(gram.shape[0]) / np.sqrt(gram.shape[0])
    for _ in range(iters):
        w = gram @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        v = w / norm
    return float(v @ gram @ v)


def lasso_ista(
    A: np.ndarray,
    b: np.ndarray,
    lambda_l1: float,
    max_iters: int = 10000,
    tol: float = 1e-9,
) -> np.ndarray:
    """Iterative soft-thresholding for the lasso objective.

    Step size 1/L against the half-gradient A^T (A x - b), where L is the
    largest eigenvalue of A^T A estimated by 100 power-iteration steps.
    Stops when the iterate moves less than ``tol`` in max-norm.
    """
    if lambda_l1 <= 0:
        raise ValueError(f"lambda_l1 must be positive, got {lambda_l1}")
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    gram = A.T @ A
    corr = A.T @ b
    L = _largest_gram_eigenvalue(gram)
    if L == 0.0:
        return np.zeros(A.shape[1])
    threshold = lambda_l1 / (2.0 * L)
    x = np.zeros(A.shape[1])
    for _ in range(max_iters):
        x_new = soft_threshold(x - (gram @ x - corr) / L, threshold)
        done = np.max(np.abs(x_new - x)) < tol
        x = x_new
        if done:
            break
    return x
