"""Pure-Python simulated annealing kernel.

Reference implementation of the annealing loop; the compiled Cython kernel
in ``_sa_core.pyx`` mirrors it operation for operation (same PRNG, same
floating-point evaluation order), so both backends return bit-identical
results for identical inputs. Keep the two files in sync.

Kernel contract: minimize q^T W q + h over binary q by single-flip
Metropolis sweeps with a geometric temperature schedule. One sweep proposes
every spin once, in a random order fixed per restart. A flip of spin ``a``
changes the energy by

    dE = (1 - 2 q[a]) * (2 * (f[a] - W[a,a] * q[a]) + W[a,a])

where f = W @ q is a local-field cache updated in O(D) on every accepted
flip, making rejected proposals O(1).
"""
from __future__ import annotations

import math

import numpy as np

from .rng import SplitMix64, restart_stream_seed

BACKEND_NAME = "pure-python"


def _energy_from_scratch(W, q, h):
    # Row-partial accumulation order; the compiled kernel sums identically.
    E = h
    active = [b for b in range(len(q)) if q[b]]
    for a in active:
        row = W[a]
        t = 0.0
        for b in active:
            t += row[b]
        E += t
    return E


def sa_minimize(W, h, t_start, t_ratio, sweeps, restarts, seed):
    """Best assignment over all restarts.

    Returns (q_best uint8 array, energy, best_restart); the energy is
    recomputed from scratch for the returned assignment.
    """
    W = np.ascontiguousarray(W, dtype=np.float64)
    D = W.shape[0]
    diag = W.diagonal().copy()

    best_energy = math.inf
    best_q = np.zeros(D, dtype=np.uint8)
    best_restart = 0

    for r in range(restarts):
        rng = SplitMix64(restart_stream_seed(seed, r))
        q = [rng.next_u64() & 1 for _ in range(D)]

        order = list(range(D))
        for j in range(D - 1, 0, -1):
            t = rng.next_below(j + 1)
            order[j], order[t] = order[t], order[j]

        f = np.zeros(D)
        for b in range(D):
            if q[b]:
                f += W[:, b]
        E = h
        for a in range(D):
            if q[a]:
                E += f[a]

        rbest_energy = E
        rbest_q = list(q)
        T = t_start
        for _ in range(sweeps):
            for pos in range(D):
                a = order[pos]
                qa = q[a]
                delta = 1.0 - 2.0 * qa
                dE = delta * (2.0 * (f[a] - diag[a] * qa) + diag[a])
                if dE > 0.0 and not rng.next_double() < math.exp(-dE / T):
                    continue
                q[a] = 1 - qa
                E += dE
                f += delta * W[a]
                if E < rbest_energy:
                    rbest_energy = E
                    rbest_q = list(q)
            T *= t_ratio

        exact = _energy_from_scratch(W, rbest_q, h)
        if exact < best_energy:
            best_energy = exact
            best_q = np.array(rbest_q, dtype=np.uint8)
            best_restart = r

    return best_q, best_energy, best_restart
