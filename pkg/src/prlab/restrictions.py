"""Partial assignments over {0,1,*}^n and their algebra.

A restriction is stored as two masks over the ambient n coordinates:
``fixed_mask`` has bit i set when cell i is 0 or 1, and ``fixed_bits``
carries the assigned values on fixed cells (and is 0 elsewhere).  Cells
with fixed_mask bit 0 are stars ("alive").

Serialization is the display string over {0,1,*} with the leftmost
character at index 0.

The x (*) y merge operator: cell i takes x_i when y_i = 0 and is left
alive when y_i = 1.  (The source formulation displays the y_i = 1 case as
the literal value 1 while typing the result over {0,1,*}; the number of
surviving variables only makes sense under the star reading, which is
what we implement.)
"""

from __future__ import annotations

from dataclasses import dataclass
from random import Random

from .errors import ArityMismatch, InvalidProbability, LengthMismatch
from ._bits import mask


@dataclass(frozen=True)
class Restriction:
    """A partial assignment rho in {0,1,*}^n."""

    n: int
    fixed_mask: int
    fixed_bits: int

    def __post_init__(self):
        m = mask(self.n)
        if self.fixed_mask & ~m:
            raise LengthMismatch("fixed_mask has bits beyond the ambient arity")
        if self.fixed_bits & ~self.fixed_mask:
            raise LengthMismatch("fixed_bits set on a non-fixed cell")

    @classmethod
    def all_star(cls, n: int) -> "Restriction":
        return cls(n, 0, 0)

    @classmethod
    def from_string(cls, s: str) -> "Restriction":
        fm = fb = 0
        for i, ch in enumerate(s):
            if ch == "*":
                continue
            fm |= 1 << i
            if ch == "1":
                fb |= 1 << i
            elif ch != "0":
                raise ValueError(f"invalid restriction character {ch!r}")
        return cls(len(s), fm, fb)

    def to_string(self) -> str:
        out = []
        for i in range(self.n):
            if (self.fixed_mask >> i) & 1:
                out.append("1" if (self.fixed_bits >> i) & 1 else "0")
            else:
                out.append("*")
        return "".join(out)

    def alive(self) -> list[int]:
        """Indices of star cells."""
        return [i for i in range(self.n) if not (self.fixed_mask >> i) & 1]

    def alive_mask(self) -> int:
        return mask(self.n) & ~self.fixed_mask

    def star_count(self) -> int:
        return self.alive_mask().bit_count()

    def overlay(self, x: int) -> int:
        """rho . x: fixed cells from rho, star cells from x."""
        return self.fixed_bits | (x & self.alive_mask())

    def __str__(self) -> str:
        return self.to_string()


def sample_rp(n: int, p: float, rng: Random) -> Restriction:
    """Draw from R_p: each cell is * w.p. p, else a uniform bit."""
    if not 0.0 <= p <= 1.0:
        raise InvalidProbability(f"p must be in [0,1], got {p}")
    fm = fb = 0
    for i in range(n):
        if rng.random() < p:
            continue
        fm |= 1 << i
        if rng.getrandbits(1):
            fb |= 1 << i
    return Restriction(n, fm, fb)


def compose(r1: Restriction, r2: Restriction) -> Restriction:
    """rho1 . rho2: cell i is rho1_i when fixed there, else rho2_i.

    The second restriction is indexed over the original coordinates, not
    over rho1's alive positions; this is the only composable convention.
    """
    if r1.n != r2.n:
        raise LengthMismatch(f"length mismatch: {r1.n} vs {r2.n}")
    fm = r1.fixed_mask | r2.fixed_mask
    fb = r1.fixed_bits | (r2.fixed_bits & ~r1.fixed_mask)
    return Restriction(r1.n, fm, fb)


def apply(f, r: Restriction):
    """f|_rho as a function on the same index space.

    Evaluation fills star cells from the argument: f|_rho(x) = f(rho . x).
    """
    from .models import BooleanFunction, RestrictedFunction

    if not isinstance(f, BooleanFunction):
        raise ArityMismatch("apply expects a BooleanFunction")
    if f.arity != r.n:
        raise ArityMismatch(f"arity {f.arity} vs restriction length {r.n}")
    return RestrictedFunction(f, r)


def star_merge(x: int, y: int, n: int) -> Restriction:
    """The x (*) y restriction: cell i is x_i when y_i = 0, star when y_i = 1."""
    m = mask(n)
    if x & ~m or y & ~m:
        raise LengthMismatch(f"operands exceed length {n}")
    fm = m & ~y
    return Restriction(n, fm, x & fm)
