"""Synthetic sparse-coding instances with low-coherence sensing matrices.

An instance is a tuple (A, x_true, b, sigma, seed) with b = A @ x_true + v,
where v is i.i.d. Gaussian noise with standard deviation sigma. Sensing
matrices have unit-norm columns and are optimized for low mutual coherence
by gradient descent on || A^T A - I ||_F^2 with per-step column
renormalization.

All randomness is drawn from numpy's PCG64 generator seeded explicitly, so
every artifact is reproducible from (parameters, seed) alone.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import FixedPointFormat
from .rng import stable_hash64

__all__ = [
    "Instance",
    "mutual_coherence",
    "generate_low_coherence_matrix",
    "sample_sparse_signal",
    "synthesize_measurements",
    "make_instance",
    "normalize_columns",
    "save_matrix_csv",
    "load_matrix_csv",
]

DEFAULT_ALPHA = 0.02
DEFAULT_DESCENT_ITERS = 2000


@dataclass(frozen=True)
class Instance:
    """One synthetic recovery problem with known ground truth."""

    A: np.ndarray
    x_true: np.ndarray
    b: np.ndarray
    sigma: float
    seed: int

    @property
    def M(self) -> int:
        return self.A.shape[0]

    @property
    def N(self) -> int:
        return self.A.shape[1]


def normalize_columns(A: np.ndarray, rng: np.random.Generator | None = None) -> np.ndarray:
    """Rescale every column to unit L2 norm.

    A column of exact zeros cannot be normalized; it is redrawn from the
    standard normal distribution when a generator is supplied, otherwise
    rejected. Idempotent for already-normalized input.
    """
    A = np.array(A, dtype=np.float64, copy=True)
    while True:
        norms = np.linalg.norm(A, axis=0)
        zero = norms == 0.0
        if not np.any(zero):
            break
        if rng is None:
            raise ValueError("cannot normalize a zero column")
        A[:, zero] = rng.standard_normal((A.shape[0], int(zero.sum())))
    return A / norms


def mutual_coherence(A: np.ndarray) -> float:
    """Largest absolute inner product between two distinct columns."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[1] < 2:
        raise ValueError("mutual coherence requires a matrix with at least 2 columns")
    gram = np.abs(A.T @ A)
    np.fill_diagonal(gram, 0.0)
    return float(gram.max())


def generate_low_coherence_matrix(
    M: int,
    N: int,
    alpha: float = DEFAULT_ALPHA,
    K: int = DEFAULT_DESCENT_ITERS,
    seed: int = 0,
) -> np.ndarray:
    """Column-normalized M x N matrix with heuristically minimized coherence.

    Starts from a normalized standard-normal matrix and runs K gradient
    steps on || A^T A - I ||_F^2 (gradient 4 A (A^T A - I)) with step size
    alpha, renormalizing columns after every step. K=0 returns the
    normalized initialization unchanged.
    """
    if M < 1 or N < 2:
        raise ValueError(f"need M >= 1 and N >= 2, got M={M}, N={N}")
    if alpha <= 0:
        raise ValueError(f"step size alpha must be positive, got {alpha}")
    if K < 0:
        raise ValueError(f"iteration count K must be >= 0, got {K}")
    rng = np.random.default_rng(seed)
    A = normalize_columns(rng.standard_normal((M, N)), rng)
    eye = np.eye(N)
    for _ in range(K):
        grad = 4.0 * A @ (A.T @ A - eye)
        A = normalize_columns(A - alpha * grad, rng)
    return A


def sample_sparse_signal(
    N: int, k: int, fmt: FixedPointFormat, seed: int = 0
) -> np.ndarray:
    """k-sparse vector with support uniform over index subsets and each
    nonzero drawn uniformly from the coordinate's representable nonzero
    values (the single value 1 in the plain binary format)."""
    if fmt.N != N:
        raise ValueError(f"format describes {fmt.N} coordinates, expected {N}")
    if not 0 <= k <= N:
        raise ValueError(f"need 0 <= k <= N, got k={k}, N={N}")
    rng = np.random.default_rng(seed)
    x = np.zeros(N)
    support = rng.choice(N, size=k, replace=False)
    for i in support:
        values = fmt.values(int(i))
        nonzero = values[values != 0.0]
        x[i] = rng.choice(nonzero)
    return x


def synthesize_measurements(
    A: np.ndarray, x: np.ndarray, sigma: float, seed: int = 0
) -> np.ndarray:
    """Noisy measurements A @ x + v with v ~ Normal(0, sigma^2) i.i.d."""
    A = np.asarray(A, dtype=np.float64)
    x = np.asarray(x, dtype=np.float64)
    if A.ndim != 2 or x.shape != (A.shape[1],):
        raise ValueError(f"shape mismatch: A is {A.shape}, x is {x.shape}")
    if sigma < 0:
        raise ValueError(f"noise level sigma must be >= 0, got {sigma}")
    b = A @ x
    if sigma > 0:
        b = b + sigma * np.random.default_rng(seed).standard_normal(A.shape[0])
    return b


def make_instance(
    M: int,
    N: int,
    k: int,
    sigma: float,
    fmt: FixedPointFormat,
    seed: int,
    alpha: float = DEFAULT_ALPHA,
    descent_iters: int = DEFAULT_DESCENT_ITERS,
) -> Instance:
    """Full instance from a single seed; sub-seeds are derived per component."""
    A = generate_low_coherence_matrix(
        M, N, alpha=alpha, K=descent_iters, seed=stable_hash64(seed, "matrix")
    )
    x = sample_sparse_signal(N, k, fmt, seed=stable_hash64(seed, "signal"))
    b = synthesize_measurements(A, x, sigma, seed=stable_hash64(seed, "noise"))
    return Instance(A=A, x_true=x, b=b, sigma=float(sigma), seed=seed)


def save_matrix_csv(path, A) -> None:
    """Row-major CSV with '.'-decimal, exact round-trip formatting."""
    A = np.atleast_2d(np.asarray(A, dtype=np.float64))
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for row in A:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    """Inverse of :func:`save_matrix_csv`; 1-row files stay 2-D."""
    rows = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append([float(v) for v in line.split(",")])
    return np.asarray(rows, dtype=np.float64)
