"""Counter-based RNG: determinism, bit-compatibility, distribution checks."""

import math

import numpy as np
import scipy.stats

from dynrumor import _rng

ALPHA = 0.01
SAMPLES = 20000


def test_keyed_u64_is_deterministic():
    a = _rng.keyed_u64(42, _rng.TICK, 7, 9)
    b = _rng.keyed_u64(42, _rng.TICK, 7, 9)
    assert a == b
    assert 0 <= a < 2**64


def test_keyed_u64_distinct_keys_differ():
    base = _rng.keyed_u64(42, _rng.TICK, 7, 9)
    assert _rng.keyed_u64(43, _rng.TICK, 7, 9) != base
    assert _rng.keyed_u64(42, _rng.CHOICE, 7, 9) != base
    assert _rng.keyed_u64(42, _rng.TICK, 8, 9) != base
    assert _rng.keyed_u64(42, _rng.TICK, 7, 10) != base


def test_seed_wraps_at_64_bits():
    assert _rng.keyed_u64(2**64 + 5, _rng.TICK, 1, 2) == _rng.keyed_u64(5, _rng.TICK, 1, 2)


def test_uniform_is_in_open_interval():
    for i in range(2000):
        u = _rng.keyed_uniform(123, _rng.CHOICE, i, 0)
        assert 0.0 < u < 1.0


def test_uniform_reconstructs_from_u64():
    for i in range(100):
        z = _rng.keyed_u64(9, _rng.TICK, i, 3)
        u = _rng.keyed_uniform(9, _rng.TICK, i, 3)
        assert u == ((z >> 12) + 0.5) * 2.0**-52


def test_vector_matches_scalar_bit_for_bit():
    a = np.arange(500, dtype=np.int64)
    for seed in (0, 1, 987654321, 2**63 + 11):
        for b in (0, 3, 2**40 + 1):
            vec = _rng.keyed_u64_vec(seed, _rng.SYNC, a, b)
            scalar = np.array(
                [_rng.keyed_u64(seed, _rng.SYNC, int(x), b) for x in a], dtype=np.uint64
            )
            assert np.array_equal(vec, scalar)
            uvec = _rng.keyed_uniform_vec(seed, _rng.SYNC, a, b)
            uscalar = np.array(
                [_rng.keyed_uniform(seed, _rng.SYNC, int(x), b) for x in a]
            )
            assert np.array_equal(uvec, uscalar)


def test_uniform_passes_ks():
    u = _rng.keyed_uniform_vec(2024, _rng.TICK, np.arange(SAMPLES, dtype=np.int64), 0)
    _, p = scipy.stats.kstest(u, "uniform")
    assert p > ALPHA


def test_exponential_passes_ks():
    rate = 3.0
    x = np.array(
        [_rng.keyed_exponential(rate, 77, _rng.TICK, i, 0) for i in range(SAMPLES)]
    )
    _, p = scipy.stats.kstest(x, "expon", args=(0, 1.0 / rate))
    assert p > ALPHA
    assert np.all(x > 0)


def test_choice_is_uniform_chi_square():
    d = 7
    counts = np.zeros(d, dtype=np.int64)
    for i in range(SAMPLES):
        j = _rng.keyed_choice(d, 5, _rng.CHOICE, i, 0)
        assert 0 <= j < d
        counts[j] += 1
    _, p = scipy.stats.chisquare(counts)
    assert p > ALPHA


def test_choice_never_reaches_bound_on_power_of_two():
    # int(u * d) can round to d when u is close to 1 and d is a power of
    # two; the clamp must keep the index in range.
    d = 8
    for i in range(SAMPLES):
        assert _rng.keyed_choice(d, 99, _rng.CHOICE, i, 1) < d


def test_streams_are_uncorrelated():
    a = np.arange(SAMPLES, dtype=np.int64)
    u1 = _rng.keyed_uniform_vec(11, _rng.TICK, a, 0)
    u2 = _rng.keyed_uniform_vec(11, _rng.CHOICE, a, 0)
    r, _ = scipy.stats.pearsonr(u1, u2)
    assert abs(r) < 0.05


def test_derive_seed_spreads_over_trials():
    seeds = {_rng.derive_seed(1, _rng.TRIAL, i) for i in range(10000)}
    assert len(seeds) == 10000


def test_exponential_mean_matches_rate():
    rate = 0.5
    x = np.array(
        [_rng.keyed_exponential(rate, 3, _rng.TICK, i, 2) for i in range(SAMPLES)]
    )
    assert math.isclose(x.mean(), 1.0 / rate, rel_tol=0.05)
