"""Sources, extractors, and limited-independence samplers.

All seeds are explicit ints with a documented bit count; nothing draws
from ambient entropy.  Bit vectors follow the repository convention
(bit i of the int = coordinate i).

Instantiations:

* lhl_extract -- Toeplitz hashing.  The m x n matrix's diagonals are read
  from the first n+m-1 seed bits (T[i][j] = seed bit n-1+i-j); the seed
  is padded to length 2n, matching the classic leftover-hash-lemma seed
  budget, and the map is linear in the source for every fixed seed.
* kz_extract -- a deterministic walk on an odd cycle of M vertices:
  start at 0, step +1 on a 1 bit and -1 on a 0 bit, reduce the final
  vertex label modulo 2^m (labels >= 2^m fold back by subtracting 2^m).
  M defaults to the largest odd number <= 2^(m+1).  Acceptance for this
  family is by measured statistical distance recorded as regression
  baselines; the graph is deliberately pluggable (pass M).
* sample_kwise -- evaluations of a random degree-(k-1) polynomial over
  F_{2^b} with b = ceil(log2 n); bit i is the constant term of p(alpha_i)
  where alpha_i is the field element with integer representation i.
  Seed length k*b.
* sample_almost_kwise -- XOR of an exact k-wise string with a small-bias
  string (the powering generator over F_{2^b'}, b' = ceil(log2(n/delta)),
  bit i = <x^(i+1), y>).  The XOR keeps every <=k marginal exactly
  uniform and the small-bias layer is what larger marginals lean on.
* sample_ber_almost_kwise -- coordinatewise AND of log2(d) independent
  almost-k-wise strings, giving marginals within the composed error of
  Ber(1/d).  d must be a power of two; other values round up (the
  restriction only becomes more aggressive).
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .errors import (
    LengthMismatch,
    OutputTooLong,
    ParameterOutOfRange,
)
from .gf2 import FieldSpec, field_new
from ._bits import mask, parity


@dataclass(frozen=True)
class BitFixingSource:
    """An (n, k) oblivious bit-fixing source: n-k fixed bits, k free."""

    n: int
    fixed_mask: int
    fixed_bits: int

    def __post_init__(self):
        if self.fixed_mask & ~mask(self.n):
            raise LengthMismatch("fixed_mask exceeds source length")
        if self.fixed_bits & ~self.fixed_mask:
            raise LengthMismatch("fixed_bits set outside fixed_mask")

    @classmethod
    def make(cls, n: int, fixed: dict[int, int]) -> "BitFixingSource":
        fm = fb = 0
        for i, b in fixed.items():
            fm |= 1 << i
            if b:
                fb |= 1 << i
        return cls(n, fm, fb)

    @property
    def free_positions(self) -> list[int]:
        return [i for i in range(self.n) if not (self.fixed_mask >> i) & 1]

    @property
    def min_entropy(self) -> int:
        return self.n - self.fixed_mask.bit_count()

    def sample(self, rng: Random) -> int:
        x = self.fixed_bits
        for i in self.free_positions:
            if rng.getrandbits(1):
                x |= 1 << i
        return x

    def enumerate(self):
        """All 2^k source values."""
        free = self.free_positions
        for v in range(1 << len(free)):
            x = self.fixed_bits
            for t, i in enumerate(free):
                if (v >> t) & 1:
                    x |= 1 << i
            yield x


def enumerate_bit_fixing_sources(n: int, k: int):
    """All bit-fixing sources with exactly k free positions."""
    from itertools import combinations

    for free in combinations(range(n), k):
        free_set = set(free)
        fixed_positions = [i for i in range(n) if i not in free_set]
        for v in range(1 << len(fixed_positions)):
            fixed = {i: (v >> t) & 1 for t, i in enumerate(fixed_positions)}
            yield BitFixingSource.make(n, fixed)


# ---------------------------------------------------------------------------
# Block parity


def parity_blocks(m: int, r: int, x: int) -> int:
    """xor_{m,r}: output bit i is the parity of block i's r bits."""
    if x >> (m * r):
        raise LengthMismatch(f"input exceeds {m}*{r} bits")
    out = 0
    block = mask(r)
    for i in range(m):
        if parity((x >> (i * r)) & block):
            out |= 1 << i
    return out


class BlockParity:
    """xor_{m,r} as an extractor-shaped object (m*r bits -> m bits)."""

    def __init__(self, m: int, r: int):
        self.m = m
        self.r = r
        self.input_len = m * r
        self.output_len = m

    def apply(self, x: int) -> int:
        return parity_blocks(self.m, self.r, x)

    def to_json(self) -> dict:
        return {"family": "block_parity", "m": self.m, "r": self.r}


class IdentityMap:
    """The identity on n bits, for plugging into compositions."""

    def __init__(self, n: int):
        self.input_len = n
        self.output_len = n

    def apply(self, x: int) -> int:
        return x

    def to_json(self) -> dict:
        return {"family": "identity", "n": self.input_len}


# ---------------------------------------------------------------------------
# Leftover-hash-lemma Toeplitz extractor


def toeplitz_row_masks(seed: int, n: int, m: int) -> list[int]:
    """Row masks of the m x n Toeplitz matrix; row i mask bit j = T[i][j]."""
    rows = []
    for i in range(m):
        row = 0
        for j in range(n):
            if (seed >> (n - 1 + i - j)) & 1:
                row |= 1 << j
        rows.append(row)
    return rows


def lhl_extract(x: int, seed: int, n: int, m: int) -> int:
    """Toeplitz extraction: output = T x, linear in x for fixed seed.

    seed is 2n bits; the first n+m-1 feed the matrix diagonals and the
    rest is slack kept for the classic 2n seed budget.
    """
    if m > n:
        raise OutputTooLong(f"m={m} exceeds source length n={n}")
    if x >> n:
        raise LengthMismatch(f"input exceeds {n} bits")
    if seed >> (2 * n):
        raise LengthMismatch(f"seed exceeds {2 * n} bits")
    out = 0
    for i, row in enumerate(toeplitz_row_masks(seed, n, m)):
        if parity(row & x):
            out |= 1 << i
    return out


@dataclass(frozen=True)
class LinearSeededExtractor:
    """Toeplitz-hash strong linear seeded extractor, seed length 2n."""

    n: int
    m: int

    def __post_init__(self):
        if self.m > self.n:
            raise OutputTooLong(f"m={self.m} exceeds n={self.n}")

    @property
    def seed_len(self) -> int:
        return 2 * self.n

    @property
    def input_len(self) -> int:
        return self.n

    @property
    def output_len(self) -> int:
        return self.m

    def extract(self, x: int, seed: int) -> int:
        return lhl_extract(x, seed, self.n, self.m)

    def identity_seed(self) -> int:
        """The seed whose Toeplitz matrix is the identity (needs m == n)."""
        if self.m != self.n:
            raise ParameterOutOfRange("identity matrix needs m == n")
        return 1 << (self.n - 1)

    def to_json(self) -> dict:
        return {"family": "toeplitz_lhl", "n": self.n, "m": self.m}


# ---------------------------------------------------------------------------
# Kamp-Zuckerman style odd-cycle walk


def kz_default_cycle(m: int) -> int:
    M = (1 << (m + 1)) - 1
    return M


def kz_extract(x: int, n: int, m: int, M: int | None = None) -> int:
    """Odd-cycle walk extractor for oblivious bit-fixing sources."""
    if M is None:
        M = kz_default_cycle(m)
    if M % 2 == 0:
        raise ParameterOutOfRange(f"cycle size must be odd, got {M}")
    if (1 << m) > M:
        raise OutputTooLong(f"m={m} exceeds ceil(log2({M}))")
    if x >> n:
        raise LengthMismatch(f"input exceeds {n} bits")
    v = 0
    for i in range(n):
        v += 1 if (x >> i) & 1 else -1
    v %= M
    if v >= (1 << m):
        v -= 1 << m
    return v


class KZExtractor:
    """kz_extract packaged with its parameters."""

    def __init__(self, n: int, m: int, M: int | None = None):
        self.input_len = n
        self.output_len = m
        self.M = kz_default_cycle(m) if M is None else M

    def apply(self, x: int) -> int:
        return kz_extract(x, self.input_len, self.output_len, self.M)

    def to_json(self) -> dict:
        return {
            "family": "kz_cycle",
            "n": self.input_len,
            "m": self.output_len,
            "M": self.M,
        }


# ---------------------------------------------------------------------------
# Limited independence samplers


def _sampler_field(n: int) -> FieldSpec:
    b = max(1, (max(n, 2) - 1).bit_length())
    return field_new(b)


def kwise_seed_len(n: int, k: int) -> int:
    return k * _sampler_field(n).width


def sample_kwise(n: int, k: int, seed: int) -> int:
    """Exact k-wise uniform n-bit string from a k*ceil(log2 n)-bit seed.

    Bit i is the constant term of p(alpha_i) for the random polynomial
    p with coefficient j read from seed bits [j*b, (j+1)*b).
    """
    if not 1 <= k <= n:
        raise ParameterOutOfRange(f"need 1 <= k <= n, got k={k}, n={n}")
    spec = _sampler_field(n)
    b = spec.width
    if seed >> (k * b):
        raise LengthMismatch(f"seed exceeds {k * b} bits")
    coeffs = [(seed >> (j * b)) & mask(b) for j in range(k)]
    out = 0
    for i in range(n):
        # Horner evaluation at the element with integer representation i.
        acc = 0
        for c in reversed(coeffs):
            acc = spec.mul_int(acc, i) ^ c
        if acc & 1:
            out |= 1 << i
    return out


def smallbias_field(n: int, eps: float) -> FieldSpec:
    if not 0 < eps <= 1:
        raise ParameterOutOfRange(f"bias must be in (0,1], got {eps}")
    # Smallest b with 2^b >= n/eps (the generator's bias is n/2^b).
    b = 1
    while (1 << b) * eps < n:
        b += 1
    return field_new(b)


def smallbias_seed_len(n: int, eps: float) -> int:
    return 2 * smallbias_field(n, eps).width


def sample_smallbias(n: int, eps: float, seed: int) -> int:
    """Powering generator: bit i = <x^(i+1), y> over F_{2^b}, b = ceil(log2(n/eps))."""
    spec = smallbias_field(n, eps)
    b = spec.width
    if seed >> (2 * b):
        raise LengthMismatch(f"seed exceeds {2 * b} bits")
    xe = seed & mask(b)
    ye = (seed >> b) & mask(b)
    out = 0
    p = xe
    for i in range(n):
        if parity(p & ye):
            out |= 1 << i
        p = spec.mul_int(p, xe)
    return out


def almost_kwise_seed_len(n: int, k: int, delta: float) -> int:
    if delta <= 0:
        return kwise_seed_len(n, k)
    return kwise_seed_len(n, k) + smallbias_seed_len(n, delta)


def sample_almost_kwise(n: int, k: int, delta: float, seed: int) -> int:
    """delta-almost k-wise string: exact k-wise XOR small-bias.

    delta = 0 degrades to the exact sampler alone.  Every <=k-coordinate
    marginal is exactly uniform (the exact component guarantees it); the
    small-bias layer keeps larger subsets close to unbiased.
    """
    if not 1 <= k <= n:
        raise ParameterOutOfRange(f"need 1 <= k <= n, got k={k}, n={n}")
    if delta < 0:
        raise ParameterOutOfRange(f"delta must be >= 0, got {delta}")
    kl = kwise_seed_len(n, k)
    exact = sample_kwise(n, k, seed & mask(kl))
    if delta == 0:
        if seed >> kl:
            raise LengthMismatch(f"seed exceeds {kl} bits")
        return exact
    sb = sample_smallbias(n, delta, seed >> kl)
    return exact ^ sb


def _round_up_pow2(d: int) -> int:
    return 1 << (d - 1).bit_length()


def ber_seed_len(n: int, d: int, ell: int, delta: float) -> int:
    d = _round_up_pow2(d)
    strings = d.bit_length() - 1
    if strings == 0:
        return 0
    return strings * almost_kwise_seed_len(n, ell, _per_string_delta(delta, strings))


def _per_string_delta(delta: float, strings: int) -> float:
    return delta / strings if delta > 0 else 0.0


def sample_ber_almost_kwise(n: int, d: int, ell: int, delta: float, seed: int) -> int:
    """AND of log2(d) almost-ell-wise strings; marginals near Ber(1/d).

    Non-power-of-two d rounds up, which only lowers the one-probability.
    d = 1 yields the all-ones string (every coordinate "alive").
    """
    if d < 1:
        raise ParameterOutOfRange(f"d must be >= 1, got {d}")
    if not 1 <= ell <= n:
        raise ParameterOutOfRange(f"need 1 <= ell <= n, got ell={ell}, n={n}")
    d = _round_up_pow2(d)
    strings = d.bit_length() - 1
    if strings == 0:
        return mask(n)
    sub_delta = _per_string_delta(delta, strings)
    per = almost_kwise_seed_len(n, ell, sub_delta)
    if seed >> (strings * per):
        raise LengthMismatch(f"seed exceeds {strings * per} bits")
    out = mask(n)
    for t in range(strings):
        out &= sample_almost_kwise(n, ell, sub_delta, (seed >> (t * per)) & mask(per))
    return out
