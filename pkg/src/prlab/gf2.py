"""Arithmetic in F_{2^w}: field specs, elements, characters, inner products.

Elements are w-bit coefficient vectors stored as ints: bit i is the
coefficient of x^i, so index 0 is the constant term and ``lsb`` is just
bit 0.  Shorter literals are implicitly zero-padded at the high end.

A FieldSpec pins the width w and an irreducible degree-w modulus.  The
default modulus for each width is the lexicographically-first irreducible
polynomial (by integer value of the coefficient vector); the table for
small widths is pinned in the tests so results stay reproducible.

Additive characters: chi_c(x) can be presented either as <x, c> or as
chi(c*x) for a fixed nontrivial base character chi.  Both enumerate the
same set of 2^w characters but differ pointwise per c.  This repository
fixes the base character chi := lsb and all experiments use the
``character`` (chi(c*x)) form; ``character_ip`` exposes the inner-product
form for completeness.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DegreeMismatch, LengthMismatch, ReducibleModulus, SpecMismatch
from ._bits import parity, to_hex

# Trial division is the construction-time irreducibility check up to this
# width; beyond it we fall back to Rabin's test (trial division would need
# 2^(w/2) candidate divisors).
_TRIAL_DIVISION_MAX_WIDTH = 24


def poly_degree(p: int) -> int:
    """Degree of a polynomial over F_2 (int encoding); -1 for the zero poly."""
    return p.bit_length() - 1


def poly_mul(a: int, b: int) -> int:
    """Carryless (polynomial) product over F_2, no reduction."""
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def poly_divmod(a: int, m: int) -> tuple[int, int]:
    """Long division of a by m over F_2[x]; returns (quotient, remainder)."""
    if m == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    dm = poly_degree(m)
    q = 0
    while a and poly_degree(a) >= dm:
        shift = poly_degree(a) - dm
        q |= 1 << shift
        a ^= m << shift
    return q, a


def poly_mod(a: int, m: int) -> int:
    return poly_divmod(a, m)[1]


def _is_irreducible_trial_division(p: int) -> bool:
    d = poly_degree(p)
    if d <= 0:
        return False
    if d == 1:
        return True
    # p is reducible iff it has a factor of degree <= d/2.
    for q in range(2, 1 << (d // 2 + 1)):
        if poly_mod(p, q) == 0:
            return False
    return True


def _poly_mulmod(a: int, b: int, m: int) -> int:
    return poly_mod(poly_mul(a, b), m)


def _poly_powmod(a: int, e: int, m: int) -> int:
    r = 1
    while e:
        if e & 1:
            r = _poly_mulmod(r, a, m)
        a = _poly_mulmod(a, a, m)
        e >>= 1
    return r


def _poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def _prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def _is_irreducible_rabin(p: int) -> bool:
    d = poly_degree(p)
    if d <= 0:
        return False
    x = 2  # the polynomial "x"
    # x^(2^d) == x mod p, and gcd(x^(2^(d/q)) - x, p) == 1 for prime q | d.
    if _poly_powmod(x, 1 << d, p) != x:
        return False
    for q in _prime_factors(d):
        h = _poly_powmod(x, 1 << (d // q), p) ^ x
        if _poly_gcd(h, p) != 1:
            return False
    return True


def is_irreducible(p: int) -> bool:
    """Irreducibility over F_2; trial division at small degree, Rabin above."""
    if poly_degree(p) <= _TRIAL_DIVISION_MAX_WIDTH:
        return _is_irreducible_trial_division(p)
    return _is_irreducible_rabin(p)


@lru_cache(maxsize=None)
def default_modulus(width: int) -> int:
    """Lexicographically-first irreducible polynomial of the given degree."""
    if width < 1:
        raise DegreeMismatch(f"width must be >= 1, got {width}")
    m = 1 << width
    while not is_irreducible(m):
        m += 1
    return m


@dataclass(frozen=True)
class FieldSpec:
    """A validated description of F_{2^width}.

    modulus bit i is the coefficient of x^i; the leading bit (index
    ``width``) must be set.  Construct via :func:`field_new` to get the
    irreducibility check.
    """

    width: int
    modulus: int

    @property
    def order(self) -> int:
        return 1 << self.width

    def element(self, value: int) -> "FieldElement":
        return FieldElement(value & ((1 << self.width) - 1), self)

    def elements(self):
        """All field elements in integer order."""
        for v in range(self.order):
            yield FieldElement(v, self)

    # Raw-int fast paths; semantics identical to the FieldElement ops.
    def add_int(self, a: int, b: int) -> int:
        return a ^ b

    def mul_int(self, a: int, b: int) -> int:
        r = 0
        mod = self.modulus
        top = 1 << self.width
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= mod
        return r

    def pow_int(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul_int(r, a)
            a = self.mul_int(a, a)
            e >>= 1
        return r

    def inv_int(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self.pow_int(a, self.order - 2)

    def to_json(self) -> dict:
        return {"width": self.width, "modulus": to_hex(self.modulus, self.width + 1)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return field_new(int(obj["width"]), int(obj["modulus"], 16))

    def __repr__(self) -> str:
        return f"FieldSpec(width={self.width}, modulus=0x{self.modulus:x})"


@dataclass(frozen=True)
class FieldElement:
    """An element of F_{2^w}: w-bit coefficient vector plus its spec."""

    value: int
    spec: FieldSpec

    def __post_init__(self):
        if self.value < 0 or self.value >= (1 << self.spec.width):
            raise LengthMismatch(
                f"value 0x{self.value:x} does not fit in {self.spec.width} bits"
            )

    def __xor__(self, other: "FieldElement") -> "FieldElement":
        return gf_add(self, other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        return gf_mul(self, other)

    def to_hex(self) -> str:
        return to_hex(self.value, self.spec.width)

    def __repr__(self) -> str:
        return f"FieldElement(0x{self.value:x}, w={self.spec.width})"


def field_new(width: int, modulus: int | None = None) -> FieldSpec:
    """Build a FieldSpec, verifying degree and irreducibility of the modulus."""
    if width < 1:
        raise DegreeMismatch(f"width must be >= 1, got {width}")
    if modulus is None:
        modulus = default_modulus(width)
    if poly_degree(modulus) != width:
        raise DegreeMismatch(
            f"modulus 0x{modulus:x} has degree {poly_degree(modulus)}, expected {width}"
        )
    if not is_irreducible(modulus):
        raise ReducibleModulus(f"modulus 0x{modulus:x} factors over F_2")
    return FieldSpec(width=width, modulus=modulus)


def _check_same_spec(a: FieldElement, b: FieldElement):
    if a.spec != b.spec:
        raise SpecMismatch(f"mixed field specs: {a.spec} vs {b.spec}")


def gf_add(a: FieldElement, b: FieldElement) -> FieldElement:
    """Field addition: bitwise XOR of coefficient vectors."""
    _check_same_spec(a, b)
    return FieldElement(a.value ^ b.value, a.spec)


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    """Carryless product reduced modulo the spec's modulus."""
    _check_same_spec(a, b)
    return FieldElement(a.spec.mul_int(a.value, b.value), a.spec)


def lsb(a: FieldElement) -> int:
    """Constant-term coefficient (bit at index 0)."""
    return a.value & 1


def inner_product(x: int, y: int, n: int | None = None) -> int:
    """<x, y> over F_2: parity of the bitwise AND.

    n, when given, is checked against both operands' bit lengths.
    """
    if n is not None:
        if x.bit_length() > n or y.bit_length() > n:
            raise LengthMismatch(
                f"operands exceed declared length {n}: {x.bit_length()}, {y.bit_length()}"
            )
    return parity(x & y)


def character(c: FieldElement, x: FieldElement) -> int:
    """The additive character chi_c(x) := lsb(c * x).

    The base character chi is fixed to lsb; chi_0 is the trivial character.
    """
    _check_same_spec(c, x)
    return c.spec.mul_int(c.value, x.value) & 1


def character_ip(c: FieldElement, x: FieldElement) -> int:
    """The inner-product presentation chi_c(x) := <x, c>.

    Enumerates the same character set as :func:`character` but differs
    pointwise per c; experiments pin the chi(c*x) form.
    """
    _check_same_spec(c, x)
    return parity(c.value & x.value)
