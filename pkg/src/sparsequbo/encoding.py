"""Fixed-point spin encoding of real-valued signals.

Each signal coordinate ``x[i]`` is represented by ``P`` binary spins as

    x[i] = c_min[i] + d[i] * sum_p bits[p] * 2**p        (p = 0 .. P-1)

i.e. an unsigned P-bit integer scaled by ``d[i]`` and shifted by
``c_min[i]``. Spin vectors are flat numpy arrays laid out coordinate-major:
bits of coordinate 0 first (least significant bit first), then coordinate 1,
and so on; optional ancilla slots (one per coordinate, used by the
cardinality builder for P >= 3) are appended after all data bits.

Every format must be able to represent the value 0 exactly, otherwise a
coordinate could never be counted as "off" by the cardinality term. The
constructor enforces this bit-exactly: ``c_min[i] + d[i]*t`` must equal
0.0 in double arithmetic for some integer ``t`` in ``[0, 2**P - 1]``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "FixedPointFormat",
    "decode_coordinate",
    "zero_code",
    "encode_vector",
    "decode_vector",
]

# Relative slack when matching arbitrary reals against representable values.
ENCODE_RTOL = 1e-9


@dataclass(frozen=True)
class FixedPointFormat:
    """Per-coordinate fixed-point encoding parameters.

    Attributes:
        c_min: length-N array, smallest representable value per coordinate.
        d: length-N array of positive scale factors.
        P: number of bits per coordinate.
    """

    c_min: np.ndarray
    d: np.ndarray
    P: int

    def __post_init__(self):
        c_min = np.atleast_1d(np.asarray(self.c_min, dtype=np.float64))
        d = np.atleast_1d(np.asarray(self.d, dtype=np.float64))
        if c_min.ndim != 1 or d.ndim != 1 or c_min.shape != d.shape:
            raise ValueError("c_min and d must be 1-D arrays of equal length")
        if not int(self.P) >= 1:
            raise ValueError(f"P must be >= 1, got {self.P}")
        if np.any(d <= 0):
            raise ValueError("all scale factors d must be positive")
        object.__setattr__(self, "c_min", c_min)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "P", int(self.P))
        # Zero must be representable exactly on every coordinate.
        levels = np.rint(-c_min / d)
        bad = (levels < 0) | (levels > 2**self.P - 1) | (c_min + d * levels != 0.0)
        if np.any(bad):
            i = int(np.flatnonzero(bad)[0])
            raise ValueError(
                f"coordinate {i}: zero is not exactly representable with "
                f"c_min={c_min[i]!r}, d={d[i]!r}, P={self.P}"
            )
        object.__setattr__(self, "_zero_levels", levels.astype(np.int64))

    @classmethod
    def uniform(cls, N: int, c_min: float, d: float, P: int) -> "FixedPointFormat":
        """Format with identical (c_min, d) on all N coordinates."""
        return cls(np.full(N, float(c_min)), np.full(N, float(d)), P)

    @property
    def N(self) -> int:
        return self.c_min.shape[0]

    @property
    def n_data_spins(self) -> int:
        return self.N * self.P

    def zero_levels(self) -> np.ndarray:
        """Integer level of the zero value, per coordinate."""
        return self._zero_levels.copy()

    def values(self, i: int) -> np.ndarray:
        """All 2**P representable values of coordinate i, in level order."""
        return self.c_min[i] + self.d[i] * np.arange(2**self.P, dtype=np.float64)

    def to_dict(self) -> dict:
        """JSON-friendly form; scalars when uniform across coordinates."""
        c_min = self.c_min
        d = self.d
        return {
            "N": self.N,
            "P": self.P,
            "c_min": float(c_min[0]) if np.all(c_min == c_min[0]) else c_min.tolist(),
            "d": float(d[0]) if np.all(d == d[0]) else d.tolist(),
        }

    @classmethod
    def from_dict(cls, spec: dict) -> "FixedPointFormat":
        N = int(spec["N"])
        c_min = spec["c_min"]
        d = spec["d"]
        c_min = np.full(N, float(c_min)) if np.isscalar(c_min) else np.asarray(c_min, float)
        d = np.full(N, float(d)) if np.isscalar(d) else np.asarray(d, float)
        return cls(c_min, d, int(spec["P"]))


def _bit_weights(P: int) -> np.ndarray:
    return np.power(2.0, np.arange(P))


def decode_coordinate(fmt: FixedPointFormat, i: int, bits) -> float:
    """Value of coordinate i for one P-bit block (least significant bit first)."""
    bits = np.asarray(bits, dtype=np.float64)
    if bits.shape != (fmt.P,):
        raise ValueError(f"expected {fmt.P} bits, got shape {bits.shape}")
    level = float(bits @ _bit_weights(fmt.P))
    return float(fmt.c_min[i] + fmt.d[i] * level)


def zero_code(fmt: FixedPointFormat, i: int) -> np.ndarray:
    """The unique bit block of coordinate i that decodes to exactly 0."""
    level = int(fmt._zero_levels[i])
    return np.array([(level >> p) & 1 for p in range(fmt.P)], dtype=np.int8)


def zero_codes(fmt: FixedPointFormat) -> np.ndarray:
    """N x P matrix of zero codes (row i is ``zero_code(fmt, i)``)."""
    levels = fmt._zero_levels[:, None]
    return ((levels >> np.arange(fmt.P)[None, :]) & 1).astype(np.int8)


def encode_vector(
    fmt: FixedPointFormat, x, with_ancilla: bool = False
) -> np.ndarray:
    """Spin vector representing x; inverse of :func:`decode_vector`.

    Every entry must match a representable value within ``ENCODE_RTOL * d[i]``.
    Ancilla slots, when requested, are appended zero-initialized.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (fmt.N,):
        raise ValueError(f"expected vector of length {fmt.N}, got shape {x.shape}")
    levels = np.rint((x - fmt.c_min) / fmt.d)
    reachable = (levels >= 0) & (levels <= 2**fmt.P - 1)
    exact = np.abs(x - (fmt.c_min + fmt.d * levels)) <= ENCODE_RTOL * fmt.d
    bad = ~(reachable & exact)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ValueError(
            f"x[{i}]={x[i]!r} is not representable "
            f"(c_min={fmt.c_min[i]!r}, d={fmt.d[i]!r}, P={fmt.P})"
        )
    bits = ((levels.astype(np.int64)[:, None] >> np.arange(fmt.P)[None, :]) & 1)
    q = bits.astype(np.int8).reshape(-1)
    if with_ancilla:
        q = np.concatenate([q, np.zeros(fmt.N, dtype=np.int8)])
    return q


def decode_vector(fmt: FixedPointFormat, q) -> np.ndarray:
    """Signal represented by a spin vector; ancilla tail, if present, is ignored."""
    q = np.asarray(q)
    nd = fmt.n_data_spins
    if q.ndim != 1 or q.shape[0] not in (nd, nd + fmt.N):
        raise ValueError(
            f"expected spin vector of length {nd} or {nd + fmt.N}, got shape {q.shape}"
        )
    blocks = q[:nd].astype(np.float64).reshape(fmt.N, fmt.P)
    return fmt.c_min + fmt.d * (blocks @ _bit_weights(fmt.P))
