"""Computational models the lab measures against.

BooleanFunction is the universal currency: an arity plus a total
evaluator on int-encoded inputs (bit i of x is coordinate i).  Truth
tables materialize as big ints (bit x of the table is f(x)) up to
TABLE_MAX_ARITY; big-int XOR + popcount is what makes the exhaustive
correlation paths fast.

Fourier convention: we expand the 0/1-valued function (not the +-1
version) in the basis (-1)^{sum_{i in S} x_i}, so

    f(x) = sum_S  fhat(S) * (-1)^{<S, x>}.

Coefficients are exact dyadic rationals (Fraction), which keeps the L1
comparisons in the branching-program lemma exact.

Width-2 branching programs: each layer has two nodes; a node owns a
read-set of up to d input indices (repeats permitted; they only weaken
the model) and a transition table mapping the read pattern to the next
layer's node label.  The output is whether the final node equals the
accepting label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from random import Random

import numpy as np

from .errors import (
    ArityMismatch,
    ArityTooLarge,
    SupportTooLarge,
    UncoveredVariable,
)
from ._bits import bit, mask, to_hex

# Truth tables materialize up to 2^24 entries (~2 MiB as a big int).
TABLE_MAX_ARITY = 24
# Dense Fourier transforms (numpy int64 array of size 2^n).
FOURIER_MAX_ARITY = 20


class BooleanFunction:
    """An arity-n evaluatable predicate {0,1}^n -> {0,1}."""

    def __init__(self, arity: int, fn=None, name: str | None = None):
        self.arity = arity
        self._fn = fn
        self._table = None
        self.name = name or self.__class__.__name__

    # Subclasses either override _eval or pass fn to __init__.
    def _eval(self, x: int) -> int:
        return self._fn(x) & 1

    def eval(self, x: int) -> int:
        if x >> self.arity:
            raise ArityMismatch(f"input 0x{x:x} exceeds arity {self.arity}")
        if self._table is not None:
            return (self._table >> x) & 1
        return self._eval(x)

    __call__ = eval

    def truth_table(self) -> int:
        """Big-int truth table: bit x is f(x).  Cached."""
        if self._table is None:
            if self.arity > TABLE_MAX_ARITY:
                raise ArityTooLarge(
                    f"arity {self.arity} exceeds table threshold {TABLE_MAX_ARITY}"
                )
            t = 0
            for x in range(1 << self.arity):
                if self._eval(x):
                    t |= 1 << x
            self._table = t
        return self._table

    def table_array(self) -> np.ndarray:
        """Truth table as a uint8 numpy array of length 2^n."""
        t = self.truth_table()
        raw = t.to_bytes((1 << self.arity) // 8 or 1, "little")
        return np.unpackbits(
            np.frombuffer(raw, dtype=np.uint8), bitorder="little"
        )[: 1 << self.arity]

    @classmethod
    def from_table(cls, arity: int, table: int, name: str | None = None):
        f = cls(arity, fn=lambda x: (table >> x) & 1, name=name)
        f._table = table
        return f

    @classmethod
    def from_callable(cls, arity: int, fn, name: str | None = None):
        return cls(arity, fn=fn, name=name)

    @classmethod
    def parity(cls, arity: int):
        return cls(arity, fn=lambda x: x.bit_count() & 1, name=f"parity{arity}")

    @classmethod
    def constant(cls, arity: int, value: int):
        v = value & 1
        return cls(arity, fn=lambda x: v, name=f"const{v}")

    @classmethod
    def dictator(cls, arity: int, i: int):
        return cls(arity, fn=lambda x: (x >> i) & 1, name=f"x{i}")

    def xor(self, other: "BooleanFunction") -> "BooleanFunction":
        if self.arity != other.arity:
            raise ArityMismatch("xor of functions with different arities")
        return BooleanFunction(
            self.arity, fn=lambda x: self.eval(x) ^ other.eval(x), name="xor"
        )

    def negate(self) -> "BooleanFunction":
        return BooleanFunction(self.arity, fn=lambda x: 1 ^ self.eval(x), name="not")

    def bias_counts(self) -> tuple[int, int]:
        """(#inputs with f=0, #inputs with f=1), from the truth table."""
        ones = self.truth_table().bit_count()
        return (1 << self.arity) - ones, ones

    def __repr__(self):
        return f"<{self.name}/{self.arity}>"


class RestrictedFunction(BooleanFunction):
    """f|_rho: evaluation fills star cells from the argument."""

    def __init__(self, base: BooleanFunction, rho):
        super().__init__(base.arity, name=f"{base.name}|rho")
        self.base = base
        self.rho = rho

    def _eval(self, x: int) -> int:
        return self.base.eval(self.rho.overlay(x))


@dataclass(frozen=True)
class Junta:
    """A function of at most d of the n ambient coordinates.

    support is the ordered index tuple; table bit j is the value on the
    support assignment whose bit t is the value of coordinate support[t].
    """

    arity: int
    support: tuple[int, ...]
    table: int

    def __post_init__(self):
        if len(set(self.support)) != len(self.support):
            raise ArityMismatch("junta support contains duplicate indices")
        for i in self.support:
            if not 0 <= i < self.arity:
                raise ArityMismatch(f"support index {i} outside ambient [{self.arity}]")

    @property
    def width(self) -> int:
        return len(self.support)

    def eval(self, x: int) -> int:
        idx = 0
        for t, i in enumerate(self.support):
            idx |= ((x >> i) & 1) << t
        return (self.table >> idx) & 1

    __call__ = eval

    def as_function(self) -> BooleanFunction:
        return BooleanFunction(self.arity, fn=self.eval, name=f"junta{self.support}")

    @classmethod
    def random(cls, arity: int, width: int, rng: Random) -> "Junta":
        support = tuple(sorted(rng.sample(range(arity), width)))
        table = rng.getrandbits(1 << width)
        return cls(arity, support, table)

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "support": list(self.support),
            "table": to_hex(self.table, 1 << self.width),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Junta":
        return cls(int(obj["arity"]), tuple(obj["support"]), int(obj["table"], 16))


@dataclass(frozen=True)
class XorOfJuntas:
    """Parity of t juntas sharing an ambient arity."""

    arity: int
    terms: tuple[Junta, ...]

    def __post_init__(self):
        for j in self.terms:
            if j.arity != self.arity:
                raise ArityMismatch("junta term with mismatched ambient arity")

    def eval(self, x: int) -> int:
        v = 0
        for j in self.terms:
            v ^= j.eval(x)
        return v

    __call__ = eval

    def as_function(self) -> BooleanFunction:
        return BooleanFunction(self.arity, fn=self.eval, name=f"xor_of_{len(self.terms)}_juntas")


@dataclass(frozen=True)
class SparsePolyF2:
    """sum_S c_S prod_{i in S} x_i + constant, over F_2.

    Duplicate monomials cancel in pairs at construction; degree is
    computed on the canonical form.
    """

    arity: int
    monomials: frozenset[frozenset[int]]
    constant: int = 0

    @classmethod
    def make(cls, arity: int, monomials, constant: int = 0) -> "SparsePolyF2":
        seen: set[frozenset[int]] = set()
        c = constant & 1
        for m in monomials:
            fm = frozenset(m)
            if not fm:
                c ^= 1
                continue
            if fm in seen:
                seen.remove(fm)
            else:
                seen.add(fm)
        for m in seen:
            for i in m:
                if not 0 <= i < arity:
                    raise ArityMismatch(f"variable {i} outside ambient [{arity}]")
        return cls(arity, frozenset(seen), c)

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.monomials), default=0)

    def eval(self, x: int) -> int:
        v = self.constant
        for m in self.monomials:
            t = 1
            for i in m:
                if not (x >> i) & 1:
                    t = 0
                    break
            v ^= t
        return v

    __call__ = eval

    def as_function(self) -> BooleanFunction:
        return BooleanFunction(self.arity, fn=self.eval, name="sparse_poly")

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "monomials": sorted(sorted(m) for m in self.monomials),
            "constant": self.constant,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SparsePolyF2":
        return cls.make(int(obj["arity"]), obj["monomials"], int(obj["constant"]))


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty blocks covering a subset of the coordinates."""

    blocks: tuple[frozenset[int], ...]

    @classmethod
    def make(cls, blocks) -> "Partition":
        bs = tuple(frozenset(b) for b in blocks)
        seen: set[int] = set()
        for b in bs:
            if not b:
                raise ValueError("empty partition block")
            if seen & b:
                raise ValueError("partition blocks overlap")
            seen |= b
        return cls(bs)

    @classmethod
    def contiguous(cls, n: int, d: int) -> "Partition":
        if n % d:
            raise ValueError(f"{d} does not divide {n}")
        w = n // d
        return cls.make([range(i * w, (i + 1) * w) for i in range(d)])

    def block_of(self, i: int) -> int | None:
        for bi, b in enumerate(self.blocks):
            if i in b:
                return bi
        return None


def is_set_multilinear(p: SparsePolyF2, q: Partition) -> bool:
    """True iff every monomial of p meets every block of q at most once.

    Raises UncoveredVariable if a monomial variable lies in no block.
    """
    for m in p.monomials:
        counts = [0] * len(q.blocks)
        for i in m:
            bi = q.block_of(i)
            if bi is None:
                raise UncoveredVariable(f"variable {i} lies in no partition block")
            counts[bi] += 1
        if any(c > 1 for c in counts):
            return False
    return True


# ---------------------------------------------------------------------------
# Width-2 branching programs


@dataclass(frozen=True)
class BPNode:
    reads: tuple[int, ...]
    table: int  # bit at read-pattern index = next layer's node label


@dataclass(frozen=True)
class BranchingProgram2:
    """A (d, ell, n)-2BP: width 2, ell layers, up to d reads per node."""

    arity: int
    layers: tuple[tuple[BPNode, BPNode], ...]
    start: int = 0
    accept: int = 1

    def __post_init__(self):
        for layer in self.layers:
            for node in layer:
                for i in node.reads:
                    if not 0 <= i < self.arity:
                        raise ArityMismatch(
                            f"read index {i} outside ambient [{self.arity}]"
                        )

    @property
    def length(self) -> int:
        return len(self.layers)

    @property
    def read_width(self) -> int:
        return max((len(nd.reads) for layer in self.layers for nd in layer), default=0)

    def as_function(self) -> BooleanFunction:
        return BooleanFunction(self.arity, fn=lambda x: eval_2bp(self, x), name="bp2")

    @classmethod
    def random(cls, d: int, length: int, arity: int, rng: Random) -> "BranchingProgram2":
        layers = []
        for _ in range(length):
            layer = []
            for _ in range(2):
                reads = tuple(rng.randrange(arity) for _ in range(d))
                table = rng.getrandbits(1 << d)
                layer.append(BPNode(reads, table))
            layers.append(tuple(layer))
        return cls(arity, tuple(layers), start=rng.getrandbits(1), accept=1)

    def to_json(self) -> dict:
        return {
            "arity": self.arity,
            "start": self.start,
            "accept": self.accept,
            "layers": [
                [
                    {"reads": list(nd.reads), "table": to_hex(nd.table, 1 << len(nd.reads))}
                    for nd in layer
                ]
                for layer in self.layers
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "BranchingProgram2":
        layers = tuple(
            tuple(
                BPNode(tuple(nd["reads"]), int(nd["table"], 16)) for nd in layer
            )
            for layer in obj["layers"]
        )
        return cls(int(obj["arity"]), layers, int(obj["start"]), int(obj["accept"]))


def eval_2bp(B: BranchingProgram2, x: int) -> int:
    """Walk the layers; output is whether the final node is the accepting one."""
    if x >> B.arity:
        raise ArityMismatch(f"input 0x{x:x} exceeds arity {B.arity}")
    v = B.start
    for layer in B.layers:
        node = layer[v]
        idx = 0
        for t, i in enumerate(node.reads):
            idx |= ((x >> i) & 1) << t
        v = (node.table >> idx) & 1
    return 1 if v == B.accept else 0


def decompose_2bp(B: BranchingProgram2) -> tuple[BranchingProgram2, list[Junta]]:
    """Rewrite B as a 1-bit-reading core applied to 2*ell transition juntas.

    Junta 2*j + v is the transition function of node v in layer j; the
    core's node v in layer j reads input bit 2*j + v and moves to its
    value.  For all x: eval_2bp(B, x) == eval_2bp(core, juntas(x)).
    """
    ell = B.length
    juntas: list[Junta] = []
    core_layers = []
    for j, layer in enumerate(B.layers):
        core_layer = []
        for v, node in enumerate(layer):
            # Transition function as a junta; read-sets may repeat indices,
            # so re-tabulate over the distinct sorted support.
            support = tuple(sorted(set(node.reads)))
            pos = {i: t for t, i in enumerate(support)}
            table = 0
            for idx in range(1 << len(support)):
                pattern = 0
                for t, i in enumerate(node.reads):
                    if (idx >> pos[i]) & 1:
                        pattern |= 1 << t
                if (node.table >> pattern) & 1:
                    table |= 1 << idx
            juntas.append(Junta(B.arity, support, table))
            core_layer.append(BPNode(reads=(2 * j + v,), table=0b10))
        core_layers.append(tuple(core_layer))
    core = BranchingProgram2(2 * ell, tuple(core_layers), start=B.start, accept=B.accept)
    return core, juntas


def junta_bits(juntas: list[Junta], x: int) -> int:
    """Pack the junta evaluations at x into an int, junta t at bit t."""
    y = 0
    for t, j in enumerate(juntas):
        if j.eval(x):
            y |= 1 << t
    return y


# ---------------------------------------------------------------------------
# Fourier analysis


class FourierExpansion:
    """Exact coefficients of a 0/1-valued function in the parity basis.

    Internally an int64 array over subset masks; numerators[S] / 2^n is
    the coefficient of (-1)^{<S, x>}.
    """

    def __init__(self, arity: int, numerators: np.ndarray):
        self.arity = arity
        self.numerators = numerators

    def coefficient(self, S) -> Fraction:
        """Coefficient of a subset, given as an iterable of indices or a mask."""
        m = S if isinstance(S, int) else sum(1 << i for i in S)
        return Fraction(int(self.numerators[m]), 1 << self.arity)

    def items(self):
        for m in range(1 << self.arity):
            num = int(self.numerators[m])
            if num:
                yield frozenset(i for i in range(self.arity) if (m >> i) & 1), Fraction(
                    num, 1 << self.arity
                )

    def as_dict(self) -> dict[frozenset[int], Fraction]:
        return dict(self.items())

    def l1_numerator(self) -> int:
        """2^n * L1; exact integer."""
        return int(np.abs(self.numerators).sum())

    def l1(self) -> Fraction:
        return Fraction(self.l1_numerator(), 1 << self.arity)

    def reconstruct(self, x: int) -> Fraction:
        total = 0
        for m in range(1 << self.arity):
            num = int(self.numerators[m])
            if num:
                total += num if ((m & x).bit_count() & 1) == 0 else -num
        return Fraction(total, 1 << self.arity)


def fourier_expand(f: BooleanFunction) -> FourierExpansion:
    """Exact expansion of the 0/1-valued f in the (-1)^{<S,x>} basis."""
    if f.arity > FOURIER_MAX_ARITY:
        raise ArityTooLarge(
            f"arity {f.arity} exceeds Fourier threshold {FOURIER_MAX_ARITY}"
        )
    a = f.table_array().astype(np.int64)
    # In-place Walsh-Hadamard butterfly; result[S] = sum_x f(x) (-1)^{<S,x>}.
    h = 1
    n = 1 << f.arity
    while h < n:
        a = a.reshape(-1, 2 * h)
        left = a[:, :h].copy()
        right = a[:, h:].copy()
        a[:, :h] = left + right
        a[:, h:] = left - right
        a = a.reshape(-1)
        h *= 2
    return FourierExpansion(f.arity, a)


def l1_norm(f: BooleanFunction) -> Fraction:
    """Fourier L1 norm sum_S |fhat(S)|, exact."""
    return fourier_expand(f).l1()


def parseval_check(f: BooleanFunction) -> tuple[Fraction, Fraction]:
    """(sum_S fhat(S)^2, E[f^2]); equal by Parseval."""
    fe = fourier_expand(f)
    lhs = Fraction(int((fe.numerators.astype(object) ** 2).sum()), 1 << (2 * f.arity))
    ones = f.truth_table().bit_count()
    rhs = Fraction(ones, 1 << f.arity)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Junta/polynomial conversions


def junta_to_sparse(j: Junta) -> SparsePolyF2:
    """Exact F_2 polynomial of a junta via the Moebius (Reed-Muller) transform."""
    d = j.width
    if d > 20:
        raise SupportTooLarge(f"support width {d} exceeds transform threshold 20")
    coeffs = list((j.table >> i) & 1 for i in range(1 << d))
    # Moebius transform over F_2: butterfly identical to the zeta transform.
    for t in range(d):
        step = 1 << t
        for x in range(1 << d):
            if x & step:
                coeffs[x] ^= coeffs[x ^ step]
    monomials = []
    constant = coeffs[0]
    for m in range(1, 1 << d):
        if coeffs[m]:
            monomials.append(frozenset(j.support[t] for t in range(d) if (m >> t) & 1))
    return SparsePolyF2.make(j.arity, monomials, constant)


def compose_juntas(outer: Junta, inners: list[Junta]) -> Junta:
    """Compose an a-junta with b-juntas: the result is an (a*b)-junta.

    inners[t] feeds coordinate t of the outer function; all inners share
    an ambient arity, which becomes the composition's ambient arity.
    """
    if len(inners) != outer.width:
        raise ArityMismatch(
            f"outer width {outer.width} but {len(inners)} inner functions"
        )
    ambient = inners[0].arity
    for g in inners:
        if g.arity != ambient:
            raise ArityMismatch("inner juntas with mismatched ambient arity")
    support = tuple(sorted(set().union(*(g.support for g in inners)) or set()))
    pos = {i: t for t, i in enumerate(support)}
    table = 0
    for idx in range(1 << len(support)):
        x = 0
        for i, t in pos.items():
            if (idx >> t) & 1:
                x |= 1 << i
        inner_bits = 0
        for t, g in enumerate(inners):
            if g.eval(x):
                inner_bits |= 1 << t
        if (outer.table >> inner_bits) & 1:
            table |= 1 << idx
    return Junta(ambient, support, table)


def all_supports(n: int, d: int):
    """All size-d index subsets of [n], ascending."""
    return combinations(range(n), d)
