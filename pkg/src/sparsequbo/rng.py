"""Seed derivation and the small integer PRNG used by the annealing kernels.

Two kinds of randomness are used in this package:

* Instance generation (Gaussian matrices, noise, support sampling) uses
  ``numpy.random.Generator`` seeded explicitly at every call site.
* The annealing kernels use splitmix64, a 64-bit-state generator that is
  reimplemented verbatim in the compiled kernel, so the compiled and the
  pure-Python backends consume identical random streams and produce
  bit-identical results.

``stable_hash64`` derives independent sub-seeds from structured keys
(experiment cell coordinates, restart indices) without any ordering
dependence between cells.
"""
from __future__ import annotations

import struct

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


def mix64(z: int) -> int:
    """splitmix64 finalizer: bijective avalanche mix of a 64-bit word."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


class SplitMix64:
    """Minimal counter-based PRNG with exactly 64 bits of state.

    Chosen for the annealing kernels because it is trivial to replicate in
    C with identical output, which keeps the two solver backends
    interchangeable down to the last bit.
    """

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        return mix64(self.state)

    def next_double(self) -> float:
        """Uniform double in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _INV53

    def next_below(self, n: int) -> int:
        """Uniform-ish integer in [0, n); modulo bias is negligible for n << 2**64."""
        return self.next_u64() % n


def restart_stream_seed(seed: int, restart: int) -> int:
    """Initial splitmix64 state of one annealing restart.

    Mirrored in the compiled kernel; do not change one without the other.
    """
    return mix64((seed ^ ((_GOLDEN * (restart + 1)) & _MASK64)) & _MASK64)


def _chunks_of(part) -> list[int]:
    if isinstance(part, bool):
        raise TypeError("ambiguous hash input: bool")
    if isinstance(part, int):
        return [part & _MASK64, (part >> 64) & _MASK64]
    if isinstance(part, float):
        return [struct.unpack("<Q", struct.pack("<d", part))[0]]
    if isinstance(part, str):
        part = part.encode("utf-8")
    if isinstance(part, bytes):
        padded = part + b"\x00" * (-len(part) % 8)
        words = [
            struct.unpack_from("<Q", padded, i)[0] for i in range(0, len(padded), 8)
        ]
        return [len(part) & _MASK64] + words
    raise TypeError(f"cannot hash value of type {type(part).__name__}")


def stable_hash64(*parts) -> int:
    """Deterministic 64-bit hash of a mixed tuple of ints/floats/strings.

    Stable across runs, platforms and process boundaries (unlike ``hash``),
    so experiment cells can be seeded independently of execution order.
    """
    state = 0x5DEECE66D1CE4E5B
    for part in parts:
        for word in _chunks_of(part):
            state = mix64(state ^ word)
        state = mix64(state + _GOLDEN)
    return state
