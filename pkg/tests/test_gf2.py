"""Field arithmetic against the schoolbook oracle and pinned conventions."""

import pytest

from prlab import gf2
from prlab.errors import DegreeMismatch, ReducibleModulus, SpecMismatch, LengthMismatch

from oracles import schoolbook_gf_mul, irreducible_by_trial_division

F4 = gf2.field_new(2, 0b111)
F16 = gf2.field_new(4)
F256 = gf2.field_new(8, 0x11B)


def test_field_new_accepts_degree2_irreducible():
    spec = gf2.field_new(2, 0b111)
    assert spec.width == 2 and spec.modulus == 0b111


def test_field_new_rejects_reducible():
    # x^2 + 1 = (x+1)^2
    with pytest.raises(ReducibleModulus):
        gf2.field_new(2, 0b101)


def test_field_new_rejects_degree_mismatch():
    with pytest.raises(DegreeMismatch):
        gf2.field_new(3, 0b111)


def test_aes_modulus_is_irreducible_by_trial_division():
    assert irreducible_by_trial_division(0x11B)
    spec = gf2.field_new(8, 0x11B)
    assert spec.order == 256


def test_default_moduli_pinned():
    # Lexicographically-first irreducible polynomial per width.
    expected = {1: 0x2, 2: 0x7, 3: 0xB, 4: 0x13, 5: 0x25, 6: 0x43,
                7: 0x83, 8: 0x11B, 9: 0x203, 10: 0x409}
    for w, m in expected.items():
        assert gf2.default_modulus(w) == m
        assert irreducible_by_trial_division(m)


def test_add_identity_and_involution():
    zero = F16.element(0)
    for a in F16.elements():
        assert gf2.gf_add(a, zero) == a
        assert gf2.gf_add(a, a).value == 0


def test_add_is_xor_in_f4():
    assert gf2.gf_add(F4.element(0b10), F4.element(0b11)).value == 0b01


def test_mul_identity():
    one = F256.element(1)
    for v in range(0, 256, 17):
        a = F256.element(v)
        assert gf2.gf_mul(a, one) == a


def test_mul_f4_generator_square():
    # x * x = x + 1 once reduced by x^2 + x + 1.
    assert gf2.gf_mul(F4.element(0b10), F4.element(0b10)).value == 0b11


def test_mul_matches_schoolbook_oracle_on_all_f256_pairs():
    for a in range(256):
        for b in range(256):
            assert F256.mul_int(a, b) == schoolbook_gf_mul(a, b, 0x11B)


def test_known_inverse_pair():
    assert F256.mul_int(0x53, 0xCA) == 0x01


def test_ring_axioms_f4_f16_exhaustive():
    for spec in (F4, F16):
        q = spec.order
        for a in range(q):
            for b in range(q):
                assert spec.mul_int(a, b) == spec.mul_int(b, a)
                for c in range(q):
                    assert spec.mul_int(spec.mul_int(a, b), c) == spec.mul_int(
                        a, spec.mul_int(b, c)
                    )
                    assert spec.mul_int(a, b ^ c) == spec.mul_int(a, b) ^ spec.mul_int(a, c)


@pytest.mark.parametrize("width", range(1, 9))
def test_every_nonzero_element_has_inverse(width):
    spec = gf2.field_new(width)
    q = spec.order
    for a in range(1, q):
        assert any(spec.mul_int(a, b) == 1 for b in range(1, q))


def test_lsb():
    assert gf2.lsb(F256.element(0x01)) == 1
    assert gf2.lsb(F4.element(0b10)) == 0
    assert gf2.lsb(F256.element(0)) == 0


def test_inner_product():
    assert gf2.inner_product(0b1011, 0, 4) == 0
    assert gf2.inner_product(0b11, 0b11, 2) == 0
    # Display strings 101 and 110 share exactly their first coordinate.
    assert gf2.inner_product(0b101, 0b011, 3) == 1
    with pytest.raises(LengthMismatch):
        gf2.inner_product(0b111, 0b1, 2)


def test_character_trivial_and_identity():
    for spec in (F4, F16):
        zero = spec.element(0)
        one = spec.element(1)
        for x in spec.elements():
            assert gf2.character(zero, x) == 0
            assert gf2.character(one, x) == gf2.lsb(x)


def test_character_f4_worked_example():
    # c = x, arg = x+1: lsb(x^2 + x) = lsb(1) = 1.
    assert gf2.character(F4.element(0b10), F4.element(0b11)) == 1


@pytest.mark.parametrize("width", range(1, 9))
def test_character_additivity_exhaustive(width):
    # All (c, a, b) triples; the a-b plane is checked as one vectorized
    # comparison per c, which is still the full 2^(3w) enumeration.
    import numpy as np

    spec = gf2.field_new(width)
    q = spec.order
    xor_plane = np.bitwise_xor.outer(np.arange(q), np.arange(q))
    for c in range(q):
        chi = np.array([spec.mul_int(c, x) & 1 for x in range(q)], dtype=np.uint8)
        lhs = chi[xor_plane]
        rhs = chi[:, None] ^ chi[None, :]
        assert np.array_equal(lhs, rhs)


@pytest.mark.parametrize("width", range(1, 9))
def test_character_nontrivial_balance(width):
    spec = gf2.field_new(width)
    for c in range(1, spec.order):
        ce = spec.element(c)
        ones = sum(gf2.character(ce, x) for x in spec.elements())
        assert ones == spec.order // 2


def test_both_character_forms_enumerate_same_set():
    # Pointwise different per c in general, but the same set of functions.
    mul_tables = {
        tuple(gf2.character(F16.element(c), x) for x in F16.elements())
        for c in range(16)
    }
    ip_tables = {
        tuple(gf2.character_ip(F16.element(c), x) for x in F16.elements())
        for c in range(16)
    }
    assert mul_tables == ip_tables
    assert len(mul_tables) == 16


def test_spec_mismatch_rejected():
    with pytest.raises(SpecMismatch):
        gf2.gf_add(F4.element(1), F16.element(1))
    with pytest.raises(SpecMismatch):
        gf2.gf_mul(F4.element(1), F16.element(1))


def test_spec_serialization_round_trip():
    obj = F256.to_json()
    assert obj == {"width": 8, "modulus": "11b"}
    assert gf2.FieldSpec.from_json(obj) == F256
