"""Shared test utilities: random formats, independent brute-force oracles."""
from __future__ import annotations

import numpy as np

from sparsequbo import FixedPointFormat

D_CHOICES = (0.25, 0.5, 1.0, 2.0)


def random_format(rng: np.random.Generator, N: int, P: int) -> FixedPointFormat:
    """Random format whose zero level is exactly representable by construction
    (c_min = -d * level, so c_min + d * level == 0.0 in doubles)."""
    d = rng.choice(D_CHOICES, size=N)
    levels = rng.integers(0, 2**P, size=N)
    return FixedPointFormat(c_min=-d * levels, d=d, P=P)


def all_assignments(n_bits: int) -> np.ndarray:
    """(2**n_bits, n_bits) float matrix of every binary assignment."""
    n = np.arange(1 << n_bits, dtype=np.int64)
    return ((n[:, None] >> np.arange(n_bits)[None, :]) & 1).astype(np.float64)


def decode_all(fmt: FixedPointFormat, bits: np.ndarray) -> np.ndarray:
    """Vectorized decode of many spin vectors (rows); independent of the
    package decode path."""
    weights = 2.0 ** np.arange(fmt.P)
    blocks = bits[:, : fmt.N * fmt.P].reshape(bits.shape[0], fmt.N, fmt.P)
    return fmt.c_min[None, :] + fmt.d[None, :] * (blocks @ weights)


def representable_signals(fmt: FixedPointFormat) -> np.ndarray:
    """Every representable signal, one per row: the (2**P)**N level grid."""
    P, N = fmt.P, fmt.N
    n_levels = 2**P
    grid = np.arange(n_levels**N)
    digits = (grid[:, None] // n_levels ** np.arange(N)[None, :]) % n_levels
    return fmt.c_min[None, :] + fmt.d[None, :] * digits.astype(np.float64)


def brute_force_lagrangian(A, b, fmt, lam):
    """Exact minimum of ||A x - b||^2 + lam * ||x||_0 over representable x.

    Returns (best value, best x). Independent oracle: enumerates the signal
    grid directly, never touching the QUBO machinery.
    """
    X = representable_signals(fmt)
    residuals = ((X @ A.T - b[None, :]) ** 2).sum(axis=1)
    cardinality = (X != 0.0).sum(axis=1)
    objective = residuals + lam * cardinality
    idx = int(np.argmin(objective))
    return float(objective[idx]), X[idx]
