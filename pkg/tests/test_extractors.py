"""Extractors and limited-independence samplers."""

import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from prlab import extractors as ext
from prlab.corrlab import output_distribution, tv_distance, uniform_distribution
from prlab.errors import LengthMismatch, OutputTooLong, ParameterOutOfRange


def test_bit_fixing_source_basics():
    src = ext.BitFixingSource.make(5, {0: 1, 3: 0})
    assert src.min_entropy == 3
    assert src.free_positions == [1, 2, 4]
    values = list(src.enumerate())
    assert len(values) == 8
    for v in values:
        assert v & 1 == 1 and not (v >> 3) & 1


def test_enumerate_sources_count():
    # C(4,2) supports x 2^2 fixings.
    sources = list(ext.enumerate_bit_fixing_sources(4, 2))
    assert len(sources) == 6 * 4


# ---------------------------------------------------------------------------
# parity_blocks


def test_parity_blocks_worked_example():
    # Blocks (1,1) and (0,1) -> parities (0, 1).
    x = 0b1011  # block 0 = bits 0,1 = 11; block 1 = bits 2,3 = 10
    assert ext.parity_blocks(2, 2, x) == 0b10


def test_parity_blocks_r1_identity():
    for x in range(32):
        assert ext.parity_blocks(5, 1, x) == x


def test_parity_blocks_uniform_when_each_block_free():
    # One free bit per block: output distribution is exactly uniform.
    m, r = 2, 3
    src = ext.BitFixingSource.make(m * r, {1: 1, 2: 0, 3: 1, 5: 0})
    dist = output_distribution(lambda x: ext.parity_blocks(m, r, x), src.enumerate(), m)
    assert tv_distance(dist, uniform_distribution(m)) == 0


def test_parity_blocks_length_check():
    with pytest.raises(LengthMismatch):
        ext.parity_blocks(2, 2, 0b10000)


# ---------------------------------------------------------------------------
# Toeplitz / leftover-hash extraction


def test_lhl_zero_seed_gives_zero():
    for x in range(256):
        assert ext.lhl_extract(x, 0, 8, 3) == 0


def test_lhl_identity_seed():
    e = ext.LinearSeededExtractor(4, 4)
    seed = e.identity_seed()
    for x in range(16):
        assert e.extract(x, seed) == x


def test_lhl_linearity_random():
    rng = random.Random(2)
    for _ in range(1000):
        n = rng.choice([4, 6, 8, 10])
        m = rng.randrange(1, n + 1)
        seed = rng.getrandbits(2 * n)
        x, y = rng.getrandbits(n), rng.getrandbits(n)
        lhs = ext.lhl_extract(x ^ y, seed, n, m)
        rhs = ext.lhl_extract(x, seed, n, m) ^ ext.lhl_extract(y, seed, n, m)
        assert lhs == rhs


def test_lhl_output_too_long():
    with pytest.raises(OutputTooLong):
        ext.lhl_extract(0, 0, 4, 5)


def test_toeplitz_matrix_structure():
    # Constant along diagonals: T[i][j] depends only on i - j.
    seed = 0b1011001101
    rows = ext.toeplitz_row_masks(seed, 6, 4)
    for i in range(1, 4):
        for j in range(1, 6):
            assert ((rows[i] >> j) & 1) == ((rows[i - 1] >> (j - 1)) & 1)


# ---------------------------------------------------------------------------
# Odd-cycle walk


def test_kz_all_zero_all_one_endpoints():
    n, m, M = 10, 4, 31

    def fold(v):
        return v - (1 << m) if v >= (1 << m) else v

    assert ext.kz_extract(0, n, m, M) == fold((-n) % M)
    assert ext.kz_extract((1 << n) - 1, n, m, M) == fold(n % M)


def test_kz_every_bit_matters():
    # Flipping one bit moves the endpoint by +-2, nonzero on an odd cycle.
    rng = random.Random(5)
    M = 31

    def endpoint(y, n):
        v = 0
        for i in range(n):
            v += 1 if (y >> i) & 1 else -1
        return v % M

    for _ in range(50):
        x = rng.getrandbits(8)
        for i in range(8):
            assert endpoint(x, 8) != endpoint(x ^ (1 << i), 8)


def test_kz_rejects_even_cycle():
    with pytest.raises(ParameterOutOfRange):
        ext.kz_extract(0, 4, 2, 8)


def test_kz_baseline_n16_m4_k12():
    # Regression: exhaustive 2^12 enumeration of one 12-free-bit source
    # on the 31-cycle.  The frozen value is the measured distance; the
    # walk mixes poorly at 16 steps and the baseline records that.
    n, m, M = 16, 4, 31
    src = ext.BitFixingSource.make(n, {3: 1, 7: 0, 11: 1, 15: 0})
    dist = output_distribution(lambda x: ext.kz_extract(x, n, m, M), src.enumerate(), m)
    tv = tv_distance(dist, uniform_distribution(m))
    assert tv == Fraction(1109, 2048)


# ---------------------------------------------------------------------------
# k-wise and almost-k-wise samplers


def exhaustive_marginals(n, k, sampler, seed_len):
    """Tally all k-subset marginals over the full seed space."""
    counts = {}
    for positions in combinations(range(n), k):
        for pattern in range(1 << k):
            counts[(positions, pattern)] = 0
    for seed in range(1 << seed_len):
        x = sampler(seed)
        for positions in combinations(range(n), k):
            pattern = 0
            for t, i in enumerate(positions):
                pattern |= ((x >> i) & 1) << t
            counts[(positions, pattern)] += 1
    return counts


def test_kwise_k1_marginals_uniform():
    n, k = 8, 1
    sl = ext.kwise_seed_len(n, k)
    counts = exhaustive_marginals(n, 1, lambda s: ext.sample_kwise(n, k, s), sl)
    expected = (1 << sl) // 2
    assert all(c == expected for c in counts.values())


def test_kwise_k2_n4_pairwise_uniform():
    n, k = 4, 2
    sl = ext.kwise_seed_len(n, k)
    counts = exhaustive_marginals(n, 2, lambda s: ext.sample_kwise(n, k, s), sl)
    expected = (1 << sl) // 4
    assert all(c == expected for c in counts.values())


def test_kwise_k3_n8_triple_uniform():
    n, k = 8, 3
    sl = ext.kwise_seed_len(n, k)
    counts = exhaustive_marginals(n, 3, lambda s: ext.sample_kwise(n, k, s), sl)
    expected = (1 << sl) // 8
    assert all(c == expected for c in counts.values())


def test_almost_kwise_marginals_within_delta():
    # Exhaustive over the full seed space, organized as the cartesian
    # product of the exact-component and small-bias-component seeds and
    # tallied with numpy (2^23 joint seeds).
    import numpy as np

    n, k, delta = 8, 3, 1 / 16
    kl = ext.kwise_seed_len(n, k)
    sbl = ext.smallbias_seed_len(n, delta)
    assert ext.almost_kwise_seed_len(n, k, delta) == kl + sbl
    exact = np.array(
        [ext.sample_kwise(n, k, s) for s in range(1 << kl)], dtype=np.uint16
    )
    sb = np.array(
        [ext.sample_smallbias(n, delta, s) for s in range(1 << sbl)], dtype=np.uint16
    )
    joint = exact[None, :] ^ sb[:, None]
    total = joint.size
    for positions in combinations(range(n), 3):
        pattern = np.zeros_like(joint)
        for t, i in enumerate(positions):
            pattern |= ((joint >> i) & 1) << t
        counts = np.bincount(pattern.ravel(), minlength=8)
        for c in counts:
            assert abs(Fraction(int(c), total) - Fraction(1, 8)) <= Fraction(1, 16)


def test_smallbias_subset_bias():
    # Every nonempty parity of output bits is eps-biased over the seed.
    n, eps = 6, 0.25
    sl = ext.smallbias_seed_len(n, eps)
    total = 1 << sl
    samples = [ext.sample_smallbias(n, eps, seed) for seed in range(total)]
    for subset_mask in range(1, 1 << n):
        acc = sum(1 if (x & subset_mask).bit_count() & 1 == 0 else -1 for x in samples)
        assert abs(acc) / total <= eps + 1e-12


def test_ber_sampler_d1_all_ones():
    assert ext.sample_ber_almost_kwise(6, 1, 2, 0.0, 0) == 0b111111


def test_ber_sampler_d2_single_string_marginals():
    n, d, ell = 8, 2, 3
    sl = ext.ber_seed_len(n, d, ell, 0.0)
    total = 1 << sl
    for i in range(n):
        ones = sum(
            (ext.sample_ber_almost_kwise(n, d, ell, 0.0, s) >> i) & 1
            for s in range(total)
        )
        assert ones * 2 == total


def test_ber_sampler_d4_marginals_quarter():
    n, d, ell = 8, 4, 2
    sl = ext.ber_seed_len(n, d, ell, 0.0)
    total = 1 << sl
    for i in range(0, n, 3):
        ones = sum(
            (ext.sample_ber_almost_kwise(n, d, ell, 0.0, s) >> i) & 1
            for s in range(total)
        )
        assert ones * 4 == total


def test_ber_sampler_d4_pair_marginals_close():
    # ell = 2 marginals of the AND of two exact 2-wise strings are exactly
    # Ber(1/4)^2 on every coordinate pair.
    n, d, ell = 6, 4, 2
    sl = ext.ber_seed_len(n, d, ell, 0.0)
    total = 1 << sl
    for (i, j) in combinations(range(n), 2):
        joint = {}
        for s in range(total):
            z = ext.sample_ber_almost_kwise(n, d, ell, 0.0, s)
            key = ((z >> i) & 1, (z >> j) & 1)
            joint[key] = joint.get(key, 0) + 1
        for (bi, bj), c in joint.items():
            p = Fraction(c, total)
            expected = Fraction(1, 4) if bi else Fraction(3, 4)
            expected *= Fraction(1, 4) if bj else Fraction(3, 4)
            assert p == expected


def test_ber_sampler_rounds_up_non_power():
    # d = 3 behaves like d = 4 (rounding up only restricts more).
    n, ell = 6, 2
    assert ext.ber_seed_len(n, 3, ell, 0.0) == ext.ber_seed_len(n, 4, ell, 0.0)


def test_sampler_parameter_validation():
    with pytest.raises(ParameterOutOfRange):
        ext.sample_kwise(4, 0, 0)
    with pytest.raises(ParameterOutOfRange):
        ext.sample_kwise(4, 5, 0)
    with pytest.raises(ParameterOutOfRange):
        ext.sample_ber_almost_kwise(4, 0, 1, 0.0, 0)


@given(st.integers(0, 2**20 - 1), st.integers(0, 2**10 - 1), st.integers(0, 2**10 - 1))
@settings(max_examples=200)
def test_lhl_linearity_property(seed, x, y):
    n, m = 10, 5
    lhs = ext.lhl_extract(x ^ y, seed, n, m)
    rhs = ext.lhl_extract(x, seed, n, m) ^ ext.lhl_extract(y, seed, n, m)
    assert lhs == rhs
