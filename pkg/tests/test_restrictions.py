"""Restriction algebra: sampling, composition, application, star-merge."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from prlab import restrictions as rst
from prlab.models import BooleanFunction
from prlab.errors import ArityMismatch, InvalidProbability, LengthMismatch


def test_string_round_trip():
    r = rst.Restriction.from_string("10*1*")
    assert r.to_string() == "10*1*"
    assert r.alive() == [2, 4]
    assert r.star_count() == 2


def test_sample_rp_extremes():
    rng = random.Random(7)
    all_star = rst.sample_rp(6, 1.0, rng)
    assert all_star.star_count() == 6
    none_star = rst.sample_rp(6, 0.0, rng)
    assert none_star.star_count() == 0


def test_sample_rp_rejects_bad_probability():
    with pytest.raises(InvalidProbability):
        rst.sample_rp(4, 1.5, random.Random(0))


def test_sample_rp_star_fraction_concentrates():
    # p = 1/2, n = 10^4: the star count should land within 5 sigma.
    rng = random.Random(20260810)
    n = 10_000
    r = rst.sample_rp(n, 0.5, rng)
    mean, sigma = n / 2, (n * 0.25) ** 0.5
    assert abs(r.star_count() - mean) <= 5 * sigma


def test_sample_rp_fixed_bits_roughly_uniform():
    rng = random.Random(99)
    r = rst.sample_rp(10_000, 0.0, rng)
    ones = r.fixed_bits.bit_count()
    assert abs(ones - 5000) <= 5 * 50


def test_compose_identities():
    rho = rst.Restriction.from_string("1*0")
    stars = rst.Restriction.all_star(3)
    assert rst.compose(rho, stars) == rho
    assert rst.compose(stars, rho) == rho


def test_compose_worked_example():
    r1 = rst.Restriction.from_string("1**")
    r2 = rst.Restriction.from_string("00*")
    assert rst.compose(r1, r2).to_string() == "10*"


def test_compose_length_mismatch():
    with pytest.raises(LengthMismatch):
        rst.compose(rst.Restriction.all_star(3), rst.Restriction.all_star(4))


@given(st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1),
       st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1), st.integers(0, 2**32 - 1))
@settings(max_examples=200)
def test_compose_associative(m1, b1, m2, b2, m3, b3):
    n = 32
    r1 = rst.Restriction(n, m1, b1 & m1)
    r2 = rst.Restriction(n, m2, b2 & m2)
    r3 = rst.Restriction(n, m3, b3 & m3)
    assert rst.compose(r1, rst.compose(r2, r3)) == rst.compose(rst.compose(r1, r2), r3)


@given(st.integers(0, 2**16 - 1), st.integers(0, 2**16 - 1))
@settings(max_examples=100)
def test_alive_of_compose_is_intersection(m1, m2):
    n = 16
    r1 = rst.Restriction(n, m1, 0)
    r2 = rst.Restriction(n, m2, 0)
    composed = rst.compose(r1, r2)
    assert set(composed.alive()) == set(r1.alive()) & set(r2.alive())


def test_apply_all_star_is_identity():
    f = BooleanFunction.parity(4)
    g = rst.apply(f, rst.Restriction.all_star(4))
    for x in range(16):
        assert g.eval(x) == f.eval(x)


def test_apply_worked_example():
    # x1 xor x2 restricted by "1*" becomes 1 xor x2.
    f = BooleanFunction.parity(2)
    g = rst.apply(f, rst.Restriction.from_string("1*"))
    assert g.eval(0b00) == 1
    assert g.eval(0b10) == 0


def test_apply_arity_mismatch():
    with pytest.raises(ArityMismatch):
        rst.apply(BooleanFunction.parity(3), rst.Restriction.all_star(4))


def test_apply_matches_direct_substitution_random():
    rng = random.Random(5)
    for _ in range(25):
        n = rng.randrange(2, 11)
        table = rng.getrandbits(1 << n)
        f = BooleanFunction.from_table(n, table)
        rho = rst.sample_rp(n, 0.4, rng)
        g = rst.apply(f, rho)
        for x in range(1 << n):
            # Direct substitution: build the merged input by hand.
            merged = 0
            for i in range(n):
                if (rho.fixed_mask >> i) & 1:
                    merged |= ((rho.fixed_bits >> i) & 1) << i
                else:
                    merged |= ((x >> i) & 1) << i
            assert g.eval(x) == f.eval(merged)


def test_apply_ignores_fixed_coordinates():
    rng = random.Random(11)
    for _ in range(10):
        n = 12
        f = BooleanFunction.from_table(n, rng.getrandbits(1 << n))
        rho = rst.sample_rp(n, 0.3, rng)
        g = rst.apply(f, rho)
        for _ in range(50):
            x = rng.getrandbits(n)
            for i in range(n):
                if (rho.fixed_mask >> i) & 1:
                    assert g.eval(x) == g.eval(x ^ (1 << i))


def test_star_merge_cases():
    assert rst.star_merge(0b0110, 0b0000, 4).to_string() == "0110"
    assert rst.star_merge(0b0110, 0b1111, 4).to_string() == "****"
    # Display 101 with display 010: x0 kept, x1 starred, x2 kept.
    r = rst.star_merge(0b101, 0b010, 3)
    assert r.to_string() == "1*1"


def test_star_merge_alive_count_is_weight():
    rng = random.Random(3)
    for _ in range(100):
        x = rng.getrandbits(16)
        z = rng.getrandbits(16)
        assert rst.star_merge(x, z, 16).star_count() == z.bit_count()


def test_star_merge_length_check():
    with pytest.raises(LengthMismatch):
        rst.star_merge(0b10000, 0, 4)
