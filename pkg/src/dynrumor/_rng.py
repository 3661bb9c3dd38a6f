"""Counter-based random streams.

Every draw is a pure function of ``(seed, stream, key_a, key_b)``: a
splitmix64-style finalizer applied to a golden-ratio key chain.  There is no
mutable generator state, so simulations replay exactly from their seed, trials
can run in parallel without coordination, and the compiled and pure-Python
engines produce bit-identical draws.

Streams keep unrelated draws independent even when the integer keys collide:
``TICK`` feeds clock gaps (key = (vertex, tick index)), ``CHOICE`` neighbour
selection (same keys), ``SYNC`` the round-based engine (key = (vertex, round)),
``REDRAW`` the test-only redraw-at-boundaries engine, ``SCHEDULE`` per-step
seeds of adaptive schedules, and ``TRIAL`` per-trial seed derivation.
"""

from __future__ import annotations

import math

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB

TICK = 1
CHOICE = 2
SYNC = 3
REDRAW = 4
SCHEDULE = 5
TRIAL = 6

_U = np.uint64


def _finalize(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def keyed_u64(seed: int, stream: int, a: int = 0, b: int = 0) -> int:
    """Hash the key tuple to a uniform 64-bit word."""
    h = seed & _MASK
    h = _finalize((h + _GOLDEN * (stream + 1)) & _MASK)
    h = _finalize((h + _GOLDEN * ((a & _MASK) + 1)) & _MASK)
    h = _finalize((h + _GOLDEN * ((b & _MASK) + 1)) & _MASK)
    return h


def keyed_uniform(seed: int, stream: int, a: int = 0, b: int = 0) -> float:
    """Uniform draw strictly inside (0, 1); exactly representable."""
    return ((keyed_u64(seed, stream, a, b) >> 12) + 0.5) * 2.0**-52


def keyed_exponential(rate: float, seed: int, stream: int, a: int = 0, b: int = 0) -> float:
    return -math.log(keyed_uniform(seed, stream, a, b)) / rate


def keyed_choice(n_options: int, seed: int, stream: int, a: int = 0, b: int = 0) -> int:
    """Uniform index in [0, n_options)."""
    j = int(keyed_uniform(seed, stream, a, b) * n_options)
    return n_options - 1 if j >= n_options else j


def _finalize_vec(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U(30))) * _U(_MIX1)
    z = (z ^ (z >> _U(27))) * _U(_MIX2)
    return z ^ (z >> _U(31))


def keyed_u64_vec(seed: int, stream: int, a: np.ndarray, b: int = 0) -> np.ndarray:
    """Vector counterpart of :func:`keyed_u64` over the ``a`` key axis.

    Matches the scalar function bit for bit (wrap-around uint64 arithmetic).
    """
    h0 = _finalize(((seed & _MASK) + _GOLDEN * (stream + 1)) & _MASK)
    b_term = (_GOLDEN * (((b & _MASK) + 1) & _MASK)) & _MASK
    h = _U(h0) + _U(_GOLDEN) * (a.astype(np.uint64) + _U(1))
    h = _finalize_vec(h)
    h = h + _U(b_term)
    return _finalize_vec(h)


def keyed_uniform_vec(seed: int, stream: int, a: np.ndarray, b: int = 0) -> np.ndarray:
    return ((keyed_u64_vec(seed, stream, a, b) >> _U(12)).astype(np.float64) + 0.5) * 2.0**-52


def derive_seed(seed: int, stream: int, a: int = 0, b: int = 0) -> int:
    """A fresh 64-bit seed for a child RNG (schedules, trials)."""
    return keyed_u64(seed, stream, a, b)
