"""QUBO minimizers and the exhaustive k-sparse least-squares solver.

``solve_sa`` is a multi-restart single-flip Metropolis annealer with a
geometric temperature schedule. Two interchangeable kernels exist: a
compiled Cython extension and a pure-Python fallback; the compiled one is
picked automatically when importable (set ``SPARSEQUBO_FORCE_PURE=1`` to
override). Both produce bit-identical results for identical inputs.

``solve_exhaustive_qubo`` enumerates every assignment and is the oracle the
annealer is validated against; ``solve_exhaustive_sparse`` enumerates
k-column supports and refits least squares on each, which is exact for the
cardinality-constrained problem.
"""
from __future__ import annotations

import itertools
import math
import os
import time
from dataclasses import dataclass

import numpy as np

from . import _sa_py
from .encoding import decode_vector
from .qubo import QuboProblem
from .rng import SplitMix64, stable_hash64

__all__ = [
    "AnnealSchedule",
    "SolveResult",
    "default_schedule",
    "solve_sa",
    "solve_exhaustive_qubo",
    "least_squares",
    "solve_exhaustive_sparse",
    "sa_backend_name",
]

_backends = {"pure": _sa_py}
try:  # pragma: no cover - exercised only when the extension is missing
    if not os.environ.get("SPARSEQUBO_FORCE_PURE"):
        from . import _sa_core

        _backends["compiled"] = _sa_core
except ImportError:
    pass

_DEFAULT_BACKEND = "compiled" if "compiled" in _backends else "pure"

MAX_EXHAUSTIVE_SPINS = 26
MAX_SUPPORTS = 10**7


def sa_backend_name() -> str:
    """Name of the kernel ``solve_sa`` uses by default."""
    return _backends[_DEFAULT_BACKEND].BACKEND_NAME


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric cooling schedule plus restart/seed bookkeeping."""

    t_start: float
    t_end: float
    sweeps: int = 2000
    restarts: int = 32
    seed: int = 0

    def __post_init__(self):
        if not self.t_start > self.t_end > 0:
            raise ValueError(
                f"need t_start > t_end > 0, got {self.t_start}, {self.t_end}"
            )
        if self.sweeps < 1 or self.restarts < 1:
            raise ValueError("sweeps and restarts must be >= 1")

    @property
    def t_ratio(self) -> float:
        if self.sweeps == 1:
            return 1.0
        return (self.t_end / self.t_start) ** (1.0 / (self.sweeps - 1))


def default_schedule(
    problem: QuboProblem, sweeps: int = 2000, restarts: int = 32, seed: int = 0
) -> AnnealSchedule:
    """Schedule with problem-adapted temperatures.

    The starting temperature is the largest |dE| seen over 100 random probe
    flips from a random assignment, the final temperature 1e-3 of that, so
    no per-problem hand tuning is needed.
    """
    W = problem.W
    D = problem.n_spins
    rng = SplitMix64(stable_hash64(seed, "temperature-probe"))
    q = np.array([rng.next_u64() & 1 for _ in range(D)], dtype=np.float64)
    f = W @ q
    diag = W.diagonal()
    scale = 0.0
    for _ in range(100):
        a = rng.next_below(D)
        delta = 1.0 - 2.0 * q[a]
        dE = delta * (2.0 * (f[a] - diag[a] * q[a]) + diag[a])
        scale = max(scale, abs(dE))
    if scale == 0.0:
        scale = 1.0
    return AnnealSchedule(
        t_start=scale, t_end=1e-3 * scale, sweeps=sweeps, restarts=restarts, seed=seed
    )


@dataclass(frozen=True)
class SolveResult:
    """Minimizer found by a QUBO solver.

    ``x_hat`` is the decoded signal (ancillas stripped) when the problem
    carries an encoding format, else None.
    """

    q_best: np.ndarray
    energy: float
    x_hat: np.ndarray | None
    restarts_run: int
    best_restart: int
    wall_time: float

    def to_json_dict(self) -> dict:
        return {
            "energy": self.energy,
            "x_hat": None if self.x_hat is None else self.x_hat.tolist(),
            "q_best": self.q_best.astype(int).tolist(),
            "restarts_run": self.restarts_run,
            "best_restart": self.best_restart,
            "wall_time": self.wall_time,
        }


def _finish(problem, q_best, energy, restarts_run, best_restart, t0) -> SolveResult:
    x_hat = None
    if problem.fmt is not None:
        x_hat = decode_vector(problem.fmt, q_best)
    return SolveResult(
        q_best=np.asarray(q_best, dtype=np.int8),
        energy=float(energy),
        x_hat=x_hat,
        restarts_run=restarts_run,
        best_restart=best_restart,
        wall_time=time.perf_counter() - t0,
    )


def solve_sa(
    problem: QuboProblem,
    schedule: AnnealSchedule | None = None,
    backend: str = "auto",
) -> SolveResult:
    """Simulated annealing minimization; deterministic given the schedule seed."""
    t0 = time.perf_counter()
    if schedule is None:
        schedule = default_schedule(problem)
    if backend == "auto":
        backend = _DEFAULT_BACKEND
    if backend not in _backends:
        raise ValueError(
            f"backend {backend!r} not available; have {sorted(_backends)}"
        )
    kernel = _backends[backend]
    q_best, energy, best_restart = kernel.sa_minimize(
        problem.W,
        problem.h,
        schedule.t_start,
        schedule.t_ratio,
        schedule.sweeps,
        schedule.restarts,
        schedule.seed & 0xFFFFFFFFFFFFFFFF,
    )
    return _finish(problem, q_best, energy, schedule.restarts, best_restart, t0)


def enumerate_spin_chunks(D: int, chunk: int = 1 << 16):
    """Yield (offset, bits) covering all 2**D assignments in lexicographic
    order of the spin vector (spin 0 is the most significant position)."""
    shifts = np.arange(D - 1, -1, -1, dtype=np.int64)
    total = 1 << D
    for lo in range(0, total, chunk):
        n = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        yield lo, ((n[:, None] >> shifts[None, :]) & 1).astype(np.float64)


def solve_exhaustive_qubo(
    problem: QuboProblem, max_spins: int = MAX_EXHAUSTIVE_SPINS
) -> SolveResult:
    """Global minimum by enumeration; ties go to the lexicographically
    smallest assignment. Refuses problems above ``max_spins``."""
    t0 = time.perf_counter()
    D = problem.n_spins
    if D > max_spins:
        raise ValueError(
            f"exhaustive enumeration of {D} spins exceeds the cap of {max_spins}"
        )
    best_energy = math.inf
    best_q = np.zeros(D, dtype=np.int8)
    for _, bits in enumerate_spin_chunks(D):
        energies = problem.energies(bits)
        idx = int(np.argmin(energies))
        if energies[idx] < best_energy:
            best_energy = float(energies[idx])
            best_q = bits[idx].astype(np.int8)
    return _finish(problem, best_q, best_energy, 1, 0, t0)


def least_squares(A_s: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimizer of ||A_s z - b||^2; minimum-norm solution when the normal
    equations are singular or have condition number above ~1e12."""
    A_s = np.asarray(A_s, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if A_s.ndim == 1:
        A_s = A_s[:, None]
    z, *_ = np.linalg.lstsq(A_s, b, rcond=1e-12)
    return z


def solve_exhaustive_sparse(
    A: np.ndarray, b: np.ndarray, k: int, max_supports: int = MAX_SUPPORTS
) -> np.ndarray:
    """Exact solver of the k-sparse least-squares problem.

    Refits least squares on every size-k column subset and keeps the first
    support whose residual strictly beats the best so far, starting from
    the all-zero solution with residual ||b||^2. Exhaustive, hence guarded:
    refuses when the number of supports exceeds ``max_supports``.
    """
    A = np.asarray(A, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    M, N = A.shape
    if not 0 <= k <= N:
        raise ValueError(f"need 0 <= k <= N, got k={k}, N={N}")
    n_supports = math.comb(N, k)
    if n_supports > max_supports:
        raise ValueError(
            f"{n_supports} supports of size {k} exceed the cap of {max_supports}"
        )
    x_hat = np.zeros(N)
    if k == 0:
        return x_hat
    best_residual = float(b @ b)
    best_support = None

    gram = A.T @ A
    corr = A.T @ b
    bb = float(b @ b)
    combos_iter = itertools.combinations(range(N), k)
    chunk_size = max(1, min(65536, n_supports))
    while True:
        chunk = list(itertools.islice(combos_iter, chunk_size))
        if not chunk:
            break
        S = np.asarray(chunk, dtype=np.intp)
        G = gram[S[:, :, None], S[:, None, :]]
        c = corr[S]
        try:
            z = np.linalg.solve(G, c[..., None])[..., 0]
        except np.linalg.LinAlgError:
            z = np.stack([least_squares(A[:, s], b) for s in chunk])
        residuals = bb - 2.0 * np.einsum("ij,ij->i", z, c) + np.einsum(
            "ij,ijk,ik->i", z, G, z
        )
        idx = int(np.argmin(residuals))
        if residuals[idx] < best_residual:
            best_residual = float(residuals[idx])
            best_support = chunk[idx]

    if best_support is not None:
        support = list(best_support)
        x_hat[support] = least_squares(A[:, support], b)
    return x_hat
