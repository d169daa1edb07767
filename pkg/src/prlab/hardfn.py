"""The hard-function zoo: GIP, RW, FFM, ExtFFM, and extractor composition.

Inputs follow the contiguous block convention: an n-bit string splits
into d blocks of n/d bits each, block i occupying bit positions
[i*(n/d), (i+1)*(n/d)) -- block numbering is 0-based in code.

Every constructor takes its field spec and extractor descriptors
explicitly; evaluation paths have no hidden defaults, so a descriptor
pins the function bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ShapeMismatch, SpecMismatch
from .gf2 import FieldSpec
from .extractors import LinearSeededExtractor, parity_blocks
from .models import BooleanFunction
from ._bits import mask, parity


@dataclass(frozen=True)
class BlockedInput:
    """View of an n-bit string as d contiguous blocks of n/d bits."""

    n: int
    d: int

    def __post_init__(self):
        if self.d < 1 or self.n % self.d:
            raise ShapeMismatch(f"{self.d} blocks do not divide {self.n} bits")

    @property
    def block_bits(self) -> int:
        return self.n // self.d

    def block(self, x: int, i: int) -> int:
        """X_i (0-based)."""
        w = self.block_bits
        return (x >> (i * w)) & mask(w)

    def blocks(self, x: int) -> list[int]:
        return [self.block(x, i) for i in range(self.d)]

    def without(self, x: int, i: int) -> list[int]:
        """X_{-i}: all blocks except block i, in order."""
        return [self.block(x, j) for j in range(self.d) if j != i]

    def assemble(self, blocks) -> int:
        w = self.block_bits
        x = 0
        for i, b in enumerate(blocks):
            if b >> w:
                raise ShapeMismatch(f"block {i} exceeds {w} bits")
            x |= b << (i * w)
        return x


def gip(m: int, k: int, blocks) -> int:
    """Generalized inner product: sum_{i<m} prod_{j<k} x_{ij} over F_2.

    blocks is the k per-party inputs of m bits each.  Bitwise: AND the
    blocks together and take the parity of the result.
    """
    blocks = list(blocks)
    if len(blocks) != k:
        raise ShapeMismatch(f"expected {k} blocks, got {len(blocks)}")
    acc = mask(m)
    for b in blocks:
        if b >> m:
            raise ShapeMismatch(f"block exceeds {m} bits")
        acc &= b
    return parity(acc)


def gip_flat(m: int, k: int, x: int) -> int:
    """gip on a flat k*m-bit input, block j at bits [j*m, (j+1)*m)."""
    bi = BlockedInput(m * k, k)
    return gip(m, k, bi.blocks(x))


def rw(m: int, k: int, r: int, x: int) -> int:
    """GIP-of-parities on k*m*r bits.

    Outer block j (k of them, m*r bits each) is collapsed by the block
    parity map to m bits, then fed to gip.
    """
    n = m * k * r
    if x >> n:
        raise ShapeMismatch(f"input exceeds {n} bits")
    outer = BlockedInput(n, k)
    return gip(m, k, [parity_blocks(m, r, b) for b in outer.blocks(x)])


def ffm(d: int, x: int, spec: FieldSpec) -> int:
    """lsb of the field product of the d blocks (each of spec.width bits)."""
    bi = BlockedInput(d * spec.width, d)
    acc = 1
    for b in bi.blocks(x):
        acc = spec.mul_int(acc, b)
        if acc == 0:
            return 0
    return acc & 1


def extffm(d: int, x: int, w: int, ext: LinearSeededExtractor, spec: FieldSpec) -> int:
    """lsb of the field product of the d per-block extractions with shared seed w."""
    if ext.output_len != spec.width:
        raise SpecMismatch(
            f"extractor outputs {ext.output_len} bits but field width is {spec.width}"
        )
    bi = BlockedInput(d * ext.input_len, d)
    acc = 1
    for b in bi.blocks(x):
        acc = spec.mul_int(acc, ext.extract(b, w))
        if acc == 0:
            return 0
    return acc & 1


# ---------------------------------------------------------------------------
# BooleanFunction wrappers (descriptors in canonical JSON live alongside)


def gip_function(m: int, k: int) -> BooleanFunction:
    f = BooleanFunction(m * k, fn=lambda x: gip_flat(m, k, x), name=f"gip_{m}_{k}")
    f.descriptor = {"family": "gip", "m": m, "k": k}
    return f


def rw_function(m: int, k: int, r: int) -> BooleanFunction:
    f = BooleanFunction(m * k * r, fn=lambda x: rw(m, k, r, x), name=f"rw_{m}_{k}_{r}")
    f.descriptor = {"family": "rw", "m": m, "k": k, "r": r}
    return f


def ffm_function(d: int, spec: FieldSpec) -> BooleanFunction:
    f = BooleanFunction(
        d * spec.width, fn=lambda x: ffm(d, x, spec), name=f"ffm_{d}_w{spec.width}"
    )
    f.descriptor = {"family": "ffm", "d": d, "field": spec.to_json()}
    return f


def extffm_function(
    d: int, ext: LinearSeededExtractor, spec: FieldSpec
) -> BooleanFunction:
    """ExtFFM as a single function of (X, W) with W in the high bits.

    Input layout: bits [0, d*ext.n) hold the d blocks of X; the seed W
    occupies the next ext.seed_len bits.
    """
    nx = d * ext.input_len
    total = nx + ext.seed_len

    def evaluate(z: int) -> int:
        return extffm(d, z & mask(nx), z >> nx, ext, spec)

    f = BooleanFunction(total, fn=evaluate, name=f"extffm_{d}")
    f.descriptor = {
        "family": "extffm",
        "d": d,
        "ext": ext.to_json(),
        "field": spec.to_json(),
    }
    f.x_bits = nx
    f.seed_bits = ext.seed_len
    return f


def compose_ext(f: BooleanFunction, ext, k: int) -> BooleanFunction:
    """f(Ext(X_1), ..., Ext(X_k)) over the contiguous block convention.

    ext is any object with input_len, output_len and apply(x); the
    composed function lives on k * ext.input_len bits.
    """
    if f.arity != k * ext.output_len:
        raise ShapeMismatch(
            f"f takes {f.arity} bits but {k} blocks extract to {k * ext.output_len}"
        )
    n = k * ext.input_len
    bi = BlockedInput(n, k)
    mo = ext.output_len

    def evaluate(x: int) -> int:
        y = 0
        for i in range(k):
            y |= ext.apply(bi.block(x, i)) << (i * mo)
        return f.eval(y)

    g = BooleanFunction(n, fn=evaluate, name=f"{f.name}.ext^{k}")
    g.descriptor = {
        "family": "compose",
        "inner": getattr(ext, "to_json", lambda: {"family": "opaque"})(),
        "outer": getattr(f, "descriptor", {"family": "opaque", "n": f.arity}),
        "k": k,
    }
    return g
