"""Hard functions: GIP, RW, FFM, ExtFFM, extractor composition."""

import random

import pytest

from prlab import gf2, hardfn
from prlab.extractors import BlockParity, IdentityMap, LinearSeededExtractor
from prlab.errors import ShapeMismatch, SpecMismatch
from prlab.models import BooleanFunction

from oracles import rw_direct

F4 = gf2.field_new(2, 0b111)


def test_blocked_input_accessors():
    bi = hardfn.BlockedInput(8, 4)
    x = 0b11_01_00_10
    assert bi.blocks(x) == [0b10, 0b00, 0b01, 0b11]
    assert bi.block(x, 2) == 0b01
    assert bi.without(x, 1) == [0b10, 0b01, 0b11]
    assert bi.assemble([0b10, 0b00, 0b01, 0b11]) == x


def test_blocked_input_rejects_bad_shape():
    with pytest.raises(ShapeMismatch):
        hardfn.BlockedInput(10, 4)


def test_gip_k1_is_parity():
    for x in range(16):
        assert hardfn.gip(4, 1, [x]) == x.bit_count() & 1


def test_gip_worked_example():
    # Blocks (1,1) and (1,0): 1*1 + 1*0 = 1.
    assert hardfn.gip(2, 2, [0b11, 0b01]) == 1


def test_gip_matches_inner_product_exhaustively():
    for x in range(8):
        for y in range(8):
            assert hardfn.gip(3, 2, [x, y]) == gf2.inner_product(x, y, 3)


def test_rw_trivial_shapes():
    for x in range(2):
        assert hardfn.rw(1, 1, 1, x) == x
    for x in range(4):
        assert hardfn.rw(1, 2, 1, x) == ((x >> 0) & 1) & ((x >> 1) & 1)


def test_rw_2_2_2_matches_direct_oracle():
    for x in range(1 << 8):
        assert hardfn.rw(2, 2, 2, x) == rw_direct(2, 2, 2, x)


def test_rw_factorization_small_shapes():
    for (m, k, r) in [(1, 2, 3), (3, 2, 1), (2, 3, 2), (4, 2, 2)]:
        n = m * k * r
        for x in range(1 << n):
            assert hardfn.rw(m, k, r, x) == rw_direct(m, k, r, x)


def test_ffm_zero_block_annihilates():
    for x in range(4):
        assert hardfn.ffm(2, x << 2, F4) == 0  # block 0 is zero


def test_ffm_all_ones_blocks():
    x = 0b01_01  # both blocks are the element 1
    assert hardfn.ffm(2, x, F4) == 1


def test_ffm_generator_square():
    # Both blocks are x (0b10): x*x = x+1, lsb 1.
    assert hardfn.ffm(2, 0b10_10, F4) == 1


def test_ffm_block_permutation_invariance():
    for d in (2, 3):
        bi = hardfn.BlockedInput(2 * d, d)
        for x in range(1 << (2 * d)):
            blocks = bi.blocks(x)
            rev = bi.assemble(list(reversed(blocks)))
            assert hardfn.ffm(d, x, F4) == hardfn.ffm(d, rev, F4)


def test_extffm_identity_seed_reduces_to_ffm():
    e = LinearSeededExtractor(2, 2)
    w = e.identity_seed()
    for x in range(16):
        assert hardfn.extffm(2, x, w, e, F4) == hardfn.ffm(2, x, F4)


def test_extffm_zero_extraction_kills():
    e = LinearSeededExtractor(2, 2)
    # Zero seed maps everything to 0.
    for x in range(16):
        assert hardfn.extffm(2, x, 0, e, F4) == 0


def test_extffm_matches_hand_composition():
    rng = random.Random(9)
    e = LinearSeededExtractor(2, 2)
    for _ in range(200):
        x = rng.getrandbits(4)
        w = rng.getrandbits(4)
        b0, b1 = x & 0b11, (x >> 2) & 0b11
        y0 = e.extract(b0, w)
        y1 = e.extract(b1, w)
        expected = F4.mul_int(y0, y1) & 1
        assert hardfn.extffm(2, x, w, e, F4) == expected


def test_extffm_output_width_must_match_field():
    e = LinearSeededExtractor(4, 2)
    with pytest.raises(SpecMismatch):
        hardfn.extffm(2, 0, 0, e, gf2.field_new(3))


def test_extffm_linear_in_last_block_when_others_fixed():
    # With blocks 0..d-2 fixed, x -> extffm(...) is linear over F_2 in the
    # last block: check superposition through random fixings and seeds.
    rng = random.Random(13)
    e = LinearSeededExtractor(3, 3)
    spec = gf2.field_new(3)
    bi = hardfn.BlockedInput(6, 2)
    for _ in range(100):
        w = rng.getrandbits(6)
        fixed = rng.getrandbits(3)
        for a in range(8):
            for b in range(8):
                fa = hardfn.extffm(2, bi.assemble([fixed, a]), w, e, spec)
                fb = hardfn.extffm(2, bi.assemble([fixed, b]), w, e, spec)
                fab = hardfn.extffm(2, bi.assemble([fixed, a ^ b]), w, e, spec)
                assert fab == fa ^ fb


def test_extffm_function_layout():
    e = LinearSeededExtractor(2, 2)
    f = hardfn.extffm_function(2, e, F4)
    assert f.arity == 4 + 4
    assert f.x_bits == 4 and f.seed_bits == 4
    rng = random.Random(15)
    for _ in range(50):
        x = rng.getrandbits(4)
        w = rng.getrandbits(4)
        assert f.eval(x | (w << 4)) == hardfn.extffm(2, x, w, e, F4)


def test_compose_ext_identity():
    f = BooleanFunction.parity(6)
    g = hardfn.compose_ext(f, IdentityMap(3), 2)
    for x in range(64):
        assert g.eval(x) == f.eval(x)


def test_compose_ext_gip_parity_is_rw():
    m, k, r = 2, 2, 2
    f = hardfn.gip_function(m, k)
    g = hardfn.compose_ext(f, BlockParity(m, r), k)
    for x in range(1 << (m * k * r)):
        assert g.eval(x) == hardfn.rw(m, k, r, x)


def test_compose_ext_parity_of_parities():
    f = BooleanFunction.parity(4)
    g = hardfn.compose_ext(f, BlockParity(2, 3), 2)
    for x in range(1 << 12):
        assert g.eval(x) == x.bit_count() & 1


def test_compose_ext_shape_check():
    with pytest.raises(ShapeMismatch):
        hardfn.compose_ext(BooleanFunction.parity(5), BlockParity(2, 2), 2)


def test_compose_ext_preserves_block_ignorance():
    # If f ignores its second m-bit block, the composition ignores X_2.
    m, r, k = 2, 2, 3

    def f_fn(y):
        # Depends only on blocks 0 and 2 of three 2-bit blocks.
        return ((y >> 0) & 1) ^ ((y >> 5) & 1)

    f = BooleanFunction.from_callable(k * m, f_fn)
    g = hardfn.compose_ext(f, BlockParity(m, r), k)
    bi = hardfn.BlockedInput(k * m * r, k)
    rng = random.Random(77)
    for _ in range(300):
        x = rng.getrandbits(bi.n)
        x2 = bi.assemble(
            [bi.block(x, 0), rng.getrandbits(m * r), bi.block(x, 2)]
        )
        assert g.eval(x) == g.eval(x2)
