# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled simulated annealing kernel.

Bit-identical twin of ``_sa_py.sa_minimize``: same splitmix64 stream, same
floating-point evaluation order, same tie handling. Any change here must be
mirrored there (and vice versa); ``tests/test_solvers.py`` cross-checks the
two backends.
"""
import numpy as np

cimport numpy as cnp
from libc.math cimport exp, INFINITY

cnp.import_array()

BACKEND_NAME = "compiled"

cdef unsigned long long GOLDEN = 0x9E3779B97F4A7C15u


cdef inline unsigned long long mix64(unsigned long long z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9u
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBu
    return z ^ (z >> 31)


cdef inline unsigned long long next_u64(unsigned long long* state) noexcept nogil:
    state[0] = state[0] + GOLDEN
    return mix64(state[0])


cdef inline double next_double(unsigned long long* state) noexcept nogil:
    return <double>(next_u64(state) >> 11) * (1.0 / 9007199254740992.0)


cdef double _energy_from_scratch(double[:, ::1] W, unsigned char[::1] q,
                                 double h, Py_ssize_t D) noexcept nogil:
    cdef double E = h
    cdef double t
    cdef Py_ssize_t a, b
    for a in range(D):
        if q[a]:
            t = 0.0
            for b in range(D):
                if q[b]:
                    t += W[a, b]
            E += t
    return E


def sa_minimize(W, double h, double t_start, double t_ratio,
                Py_ssize_t sweeps, Py_ssize_t restarts, unsigned long long seed):
    """Best assignment over all restarts; see the pure-Python twin for the
    algorithm description."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] W_arr = \
        np.ascontiguousarray(W, dtype=np.float64)
    cdef double[:, ::1] Wv = W_arr
    cdef Py_ssize_t D = Wv.shape[0]

    cdef cnp.ndarray[cnp.uint8_t, ndim=1] best_q_arr = np.zeros(D, dtype=np.uint8)
    cdef unsigned char[::1] best_q = best_q_arr
    q_arr = np.zeros(D, dtype=np.uint8)
    rbest_arr = np.zeros(D, dtype=np.uint8)
    cdef unsigned char[::1] q = q_arr
    cdef unsigned char[::1] rbest_q = rbest_arr
    order_arr = np.zeros(D, dtype=np.int64)
    cdef long long[::1] order = order_arr
    f_arr = np.zeros(D, dtype=np.float64)
    diag_arr = np.ascontiguousarray(np.diagonal(W_arr)).copy()
    cdef double[::1] f = f_arr
    cdef double[::1] diag = diag_arr

    cdef double best_energy = INFINITY
    cdef Py_ssize_t best_restart = 0

    cdef unsigned long long state
    cdef Py_ssize_t r, j, a, b, pos, sweep
    cdef long long t
    cdef unsigned char qa
    cdef double delta, dE, E, T, exact, rbest_energy

    with nogil:
        for r in range(restarts):
            state = mix64(seed ^ (GOLDEN * (<unsigned long long>r + 1u)))

            for j in range(D):
                q[j] = <unsigned char>(next_u64(&state) & 1u)

            for j in range(D):
                order[j] = j
            for j in range(D - 1, 0, -1):
                t = <long long>(next_u64(&state) % (<unsigned long long>j + 1u))
                order[j], order[t] = order[t], order[j]

            for a in range(D):
                f[a] = 0.0
            for b in range(D):
                if q[b]:
                    for a in range(D):
                        f[a] += Wv[a, b]
            E = h
            for a in range(D):
                if q[a]:
                    E += f[a]

            rbest_energy = E
            for a in range(D):
                rbest_q[a] = q[a]
            T = t_start
            for sweep in range(sweeps):
                for pos in range(D):
                    a = order[pos]
                    qa = q[a]
                    delta = 1.0 - 2.0 * qa
                    dE = delta * (2.0 * (f[a] - diag[a] * qa) + diag[a])
                    if dE > 0.0 and not next_double(&state) < exp(-dE / T):
                        continue
                    q[a] = 1 - qa
                    E += dE
                    for b in range(D):
                        f[b] += delta * Wv[a, b]
                    if E < rbest_energy:
                        rbest_energy = E
                        for b in range(D):
                            rbest_q[b] = q[b]
                T *= t_ratio

            exact = _energy_from_scratch(Wv, rbest_q, h, D)
            if exact < best_energy:
                best_energy = exact
                for a in range(D):
                    best_q[a] = rbest_q[a]
                best_restart = r

    return best_q_arr, best_energy, int(best_restart)
