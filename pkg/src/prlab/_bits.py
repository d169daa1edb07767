"""Bit-vector helpers.

Convention used everywhere in this repository: a length-n bit vector is a
Python int whose bit i (value ``(x >> i) & 1``) is coordinate i.  Index 0
is the least significant bit; hex serialization therefore puts index 0 in
the least significant hex digit.
"""

from __future__ import annotations

import numpy as np


def parity(x: int) -> int:
    """Parity of the set bits of x."""
    return x.bit_count() & 1


def bit(x: int, i: int) -> int:
    return (x >> i) & 1


def mask(n: int) -> int:
    """All-ones vector of length n."""
    return (1 << n) - 1


def bits_of(x: int, n: int) -> list[int]:
    """Coordinates of x as a list, index 0 first."""
    return [(x >> i) & 1 for i in range(n)]


def from_bits(bits) -> int:
    """Inverse of bits_of: bits[0] becomes coordinate 0."""
    x = 0
    for i, b in enumerate(bits):
        if b:
            x |= 1 << i
    return x


def to_hex(x: int, n: int) -> str:
    """Hex string of an n-bit vector, zero-padded, index 0 in the low digit."""
    return format(x, "0{}x".format((n + 3) // 4))


def from_hex(s: str) -> int:
    return int(s, 16)


def parse_bitstring(s: str) -> int:
    """Parse a display string like ``1101``: leftmost char is coordinate 0."""
    x = 0
    for i, ch in enumerate(s):
        if ch == "1":
            x |= 1 << i
        elif ch != "0":
            raise ValueError(f"invalid bit character {ch!r}")
    return x


def format_bitstring(x: int, n: int) -> str:
    """Inverse of parse_bitstring; leftmost char is coordinate 0."""
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def popcount_array(a: np.ndarray) -> np.ndarray:
    """Per-element popcount of an unsigned integer array."""
    return np.bitwise_count(a)


def parity_array(a: np.ndarray) -> np.ndarray:
    """Per-element parity of an unsigned integer array, dtype uint8."""
    return (np.bitwise_count(a) & 1).astype(np.uint8)
