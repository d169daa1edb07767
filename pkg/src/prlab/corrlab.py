"""Measurement engine: correlation, class maxima, k-party norms, total
variation, and generator fooling error.

Every exact path counts with integers (number of +1 terms minus number of
-1 terms) and divides once at the end, so exhaustive results are exact
rationals and independent of enumeration order or worker count.
Correlation here is always over the uniform distribution; the general
corr_D is not implemented.

Monte-Carlo estimates come with a 99% Hoeffding confidence radius
sqrt(2 * ln(2/0.01) / samples) (the summands are +-1 valued, range 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from random import Random

import numpy as np

from .errors import (
    ArityMismatch,
    ArityTooLarge,
    BudgetExceeded,
    InvalidAdversary,
    SupportMismatch,
    UncoveredVariable,
)
from .models import (
    BooleanFunction,
    Junta,
    Partition,
    SparsePolyF2,
    is_set_multilinear,
)
from .prg import Generator
from ._bits import mask, parity_array

CORR_EXHAUSTIVE_MAX_ARITY = 28
FOOLING_EXHAUSTIVE_MAX = 24
KPARTY_EXHAUSTIVE_MAX_BITS = 26
CLASS_BUDGET = 1 << 22


@dataclass
class CorrReport:
    """Result of a correlation measurement."""

    value: Fraction | float
    mode: str  # "exact" | "monte-carlo"
    samples: int = 0
    radius: float = 0.0
    argmax: dict | None = None

    def __post_init__(self):
        if self.mode == "exact" and self.radius != 0.0:
            raise ValueError("exact mode implies zero confidence radius")

    def to_json(self) -> dict:
        out = {
            "value": float(self.value),
            "mode": self.mode,
            "samples": self.samples,
            "radius": self.radius,
        }
        if isinstance(self.value, Fraction):
            out["value_exact"] = f"{self.value.numerator}/{self.value.denominator}"
        if self.argmax is not None:
            out["argmax_descriptor"] = self.argmax
        return out


def _check_shared_arity(f: BooleanFunction, g: BooleanFunction) -> int:
    if f.arity != g.arity:
        raise ArityMismatch(f"arities differ: {f.arity} vs {g.arity}")
    return f.arity


def corr_exact(f: BooleanFunction, g: BooleanFunction) -> CorrReport:
    """|E (-1)^(f+g)| by exhaustive enumeration with integer counting."""
    n = _check_shared_arity(f, g)
    if n > CORR_EXHAUSTIVE_MAX_ARITY:
        raise ArityTooLarge(f"arity {n} exceeds {CORR_EXHAUSTIVE_MAX_ARITY}")
    total = 1 << n
    if n <= 24:
        disagreements = (f.truth_table() ^ g.truth_table()).bit_count()
    else:
        disagreements = sum(f.eval(x) ^ g.eval(x) for x in range(total))
    value = Fraction(abs(total - 2 * disagreements), total)
    return CorrReport(value=value, mode="exact")


def corr_exact_tables(tf: int, tg: int, n: int) -> Fraction:
    """corr from two big-int truth tables (fast path for enumerations)."""
    total = 1 << n
    return Fraction(abs(total - 2 * (tf ^ tg).bit_count()), total)


def corr_mc(f: BooleanFunction, g: BooleanFunction, samples: int, rng: Random) -> CorrReport:
    """Empirical correlation with a 99% Hoeffding radius."""
    n = _check_shared_arity(f, g)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    acc = 0
    for _ in range(samples):
        x = rng.getrandbits(n)
        acc += 1 if f.eval(x) == g.eval(x) else -1
    radius = math.sqrt(2 * math.log(2 / 0.01) / samples)
    return CorrReport(value=abs(acc) / samples, mode="monte-carlo",
                      samples=samples, radius=radius)


@dataclass
class AdversaryClass:
    """A finite, deterministic, duplicate-free enumerator of functions.

    enumerate() yields (descriptor, BooleanFunction) pairs; size is the
    total count, checked against the measurement budget up front.
    """

    name: str
    size: int
    _enumerate: callable = field(repr=False)

    def enumerate(self):
        return self._enumerate()


def all_juntas_class(n: int, width: int, supports=None) -> AdversaryClass:
    """All 2^(2^width) tables on each size-width support of [n]."""
    sup = list(supports) if supports is not None else list(combinations(range(n), width))
    size = len(sup) * (1 << (1 << width))

    def gen():
        for s in sup:
            for table in range(1 << (1 << width)):
                j = Junta(n, tuple(s), table)
                yield {"family": "junta", "support": list(s), "table": table}, j.as_function()

    return AdversaryClass(name=f"juntas_{width}_of_{n}", size=size, _enumerate=gen)


def affine_class(n: int) -> AdversaryClass:
    """All affine functions <a,x> + c on n bits, with prebuilt tables."""
    size = 1 << (n + 1)

    def gen():
        xs = np.arange(1 << n, dtype=np.uint64)
        ones = (1 << (1 << n)) - 1
        for a in range(1 << n):
            bits = parity_array(xs & np.uint64(a))
            table = int.from_bytes(
                np.packbits(bits, bitorder="little").tobytes(), "little"
            )
            for c in (0, 1):
                poly = SparsePolyF2.make(n, [[i] for i in range(n) if (a >> i) & 1], c)
                f = BooleanFunction.from_table(n, table ^ (ones if c else 0))
                f.descriptor = {"family": "affine", "mask": a, "constant": c}
                f.poly = poly
                yield f.descriptor, f

    return AdversaryClass(name=f"affine_{n}", size=size, _enumerate=gen)


def nof2_protocol_class(block_bits: int) -> AdversaryClass:
    """Deterministic 2-party 1-bit NOF protocols on two b-bit blocks.

    With one written bit the speaking player's bit is the output, and a
    player sees only the other block, so the class is every function of
    one block alone.  Exists for the norm/correlation sandwich test.
    """
    b = block_bits
    tables = 1 << (1 << b)
    size = 2 * tables

    def gen():
        for who in (0, 1):  # which block the output reads (the seen one)
            for table in range(tables):
                shift = b if who == 1 else 0

                def fn(x, shift=shift, table=table):
                    return (table >> ((x >> shift) & mask(b))) & 1

                f = BooleanFunction(2 * b, fn=fn, name=f"nof2_{who}_{table}")
                yield {"family": "nof2", "reads_block": who, "table": table}, f

    return AdversaryClass(name=f"nof2_b{b}", size=size, _enumerate=gen)


def corr_class_max(f: BooleanFunction, cls: AdversaryClass,
                   budget: int = CLASS_BUDGET) -> CorrReport:
    """Maximum exact correlation over the class, with an argmax witness."""
    if cls.size > budget:
        raise BudgetExceeded(f"class {cls.name} has {cls.size} members, budget {budget}")
    tf = f.truth_table()
    n = f.arity
    best = Fraction(0)
    best_desc = None
    for desc, g in cls.enumerate():
        if g.arity != n:
            raise ArityMismatch(f"class member arity {g.arity} != {n}")
        v = corr_exact_tables(tf, g.truth_table(), n)
        if v > best:
            best, best_desc = v, desc
            if best == 1:
                break
    return CorrReport(value=best, mode="exact", argmax=best_desc)


def kparty_norm(f: BooleanFunction, k: int, *, mc_samples: int = 0,
                rng: Random | None = None) -> Fraction | float:
    """The k-party cube norm R_k of f over k blocks of f.arity/k bits.

    Exhaustive (exact) when 2*f.arity <= KPARTY_EXHAUSTIVE_MAX_BITS;
    otherwise requires mc_samples > 0 and returns a float estimate.
    """
    n = f.arity
    if n % k:
        raise ArityMismatch(f"{k} blocks do not divide arity {n}")
    b = n // k
    if 2 * n <= KPARTY_EXHAUSTIVE_MAX_BITS:
        acc = 0
        for x0 in range(1 << n):
            for x1 in range(1 << n):
                s = 0
                for delta in range(1 << k):
                    y = 0
                    for j in range(k):
                        src = x1 if (delta >> j) & 1 else x0
                        y |= ((src >> (j * b)) & mask(b)) << (j * b)
                    s ^= f.eval(y)
                acc += 1 - 2 * s
        return Fraction(acc, 1 << (2 * n))
    if mc_samples <= 0 or rng is None:
        raise ArityTooLarge(
            f"2*{n} bits exceeds the exhaustive cap; pass mc_samples and rng"
        )
    acc = 0
    for _ in range(mc_samples):
        x0 = rng.getrandbits(n)
        x1 = rng.getrandbits(n)
        s = 0
        for delta in range(1 << k):
            y = 0
            for j in range(k):
                src = x1 if (delta >> j) & 1 else x0
                y |= ((src >> (j * b)) & mask(b)) << (j * b)
            s ^= f.eval(y)
        acc += 1 - 2 * s
    return acc / mc_samples


def fooling_error(G: Generator, f: BooleanFunction, *, mc_samples: int = 0,
                  rng: Random | None = None) -> Fraction | float:
    """|E(-1)^f(U) - E(-1)^f(G(S))|, exact in exhaustive mode.

    Exhaustive when G.seed_len <= 24 and f.arity <= 24.
    """
    if f.arity != G.n:
        raise ArityMismatch(f"generator outputs {G.n} bits, f takes {f.arity}")
    if G.seed_len <= FOOLING_EXHAUSTIVE_MAX and f.arity <= FOOLING_EXHAUSTIVE_MAX:
        tt = f.table_array()
        ones_u = int(tt.sum())
        total_u = 1 << f.arity
        outs = G.outputs()
        ones_g = int(tt[outs.astype(np.int64)].sum())
        total_g = 1 << G.seed_len
        # E(-1)^f = 1 - 2*Pr[f=1]; the gap is 2*|Pr_U[f=1] - Pr_G[f=1]|.
        return 2 * abs(Fraction(total_g * ones_u - total_u * ones_g, total_u * total_g))
    if mc_samples <= 0 or rng is None:
        raise ArityTooLarge("beyond exhaustive thresholds; pass mc_samples and rng")
    acc_u = sum(f.eval(rng.getrandbits(f.arity)) for _ in range(mc_samples))
    acc_g = sum(
        f.eval(G.evaluate(rng.getrandbits(G.seed_len))) for _ in range(mc_samples)
    )
    return abs(acc_u - acc_g) * 2 / mc_samples


def tv_distance(a: dict, b: dict) -> Fraction:
    """Total variation distance between two finite distributions.

    Distributions are mappings value -> mass; masses may be Fractions,
    ints, or floats (floats are converted exactly).
    """
    support = set(a) | set(b)
    if not support:
        raise SupportMismatch("both distributions are empty")
    total = Fraction(0)
    for v in support:
        pa = Fraction(a.get(v, 0))
        pb = Fraction(b.get(v, 0))
        total += abs(pa - pb)
    return total / 2


def uniform_distribution(bits: int) -> dict:
    return {v: Fraction(1, 1 << bits) for v in range(1 << bits)}


def point_distribution(value: int, bits: int) -> dict:
    d = {v: Fraction(0) for v in range(1 << bits)}
    d[value] = Fraction(1)
    return d


def counts_to_distribution(counts: dict) -> dict:
    total = sum(counts.values())
    return {v: Fraction(c, total) for v, c in counts.items()}


def output_distribution(fn, inputs, bits: int) -> dict:
    """Exact distribution of fn over the given equiprobable inputs."""
    counts: dict[int, int] = {v: 0 for v in range(1 << bits)}
    total = 0
    for x in inputs:
        counts[fn(x)] += 1
        total += 1
    return {v: Fraction(c, total) for v, c in counts.items()}


# ---------------------------------------------------------------------------
# Set-multilinear adversary harness


def thm_bound_product_corr(d: int, k: int, eps: float) -> float:
    """The closed-form correlation cap d*eps + (d-1)*(1/(2^k eps^2) + eps)."""
    return d * eps + (d - 1) * (1.0 / ((1 << k) * eps * eps) + eps)


def _validate_product_adversary(poly: SparsePolyF2, x_bits: int, d: int,
                                block_bits: int) -> None:
    """Hypothesis check for the extractor-product bound.

    Monomials may touch seed variables freely; their X-part must have
    degree < d and at most one variable per block (so that fixing the
    seed and pruning each block to its surviving set leaves the function
    set-multilinear of degree < d over the blocks).
    """
    for m in poly.monomials:
        per_block = [0] * d
        x_deg = 0
        for i in m:
            if i < x_bits:
                x_deg += 1
                per_block[i // block_bits] += 1
        if x_deg >= d:
            raise InvalidAdversary(
                f"monomial {sorted(m)} has X-degree {x_deg} >= d={d}"
            )
        if any(c > 1 for c in per_block):
            raise InvalidAdversary(
                f"monomial {sorted(m)} takes two variables from one block"
            )


def check_product_bound(d: int, ext, spec, *, k: int, eps: float,
                        adversaries=None, budget: int = CLASS_BUDGET) -> dict:
    """Exhaustive max correlation of the extractor-product function vs a
    degree-<d set-multilinear class, compared with the closed-form cap.

    The default class is every affine function of the X and seed bits
    (degree < 2); any supplied class must provide SparsePolyF2 members,
    which are validated against the hypothesis before measuring.
    """
    from .hardfn import extffm_function

    f = extffm_function(d, ext, spec)
    n_total = f.arity
    x_bits = f.x_bits
    block_bits = ext.input_len
    if adversaries is None:
        adversaries = affine_class(n_total)
    if adversaries.size > budget:
        raise BudgetExceeded(f"{adversaries.size} adversaries exceed budget {budget}")
    tf = f.truth_table()
    best = Fraction(0)
    best_desc = None
    for desc, g in adversaries.enumerate():
        poly = getattr(g, "poly", None)
        if poly is None:
            raise InvalidAdversary("adversary class must carry explicit polynomials")
        _validate_product_adversary(poly, x_bits, d, block_bits)
        v = corr_exact_tables(tf, g.truth_table(), n_total)
        if v > best:
            best, best_desc = v, desc
    bound = thm_bound_product_corr(d, k, eps)
    return {
        "d": d,
        "block_bits": block_bits,
        "k": k,
        "eps": eps,
        "measured_max_corr": float(best),
        "measured_max_corr_exact": f"{best.numerator}/{best.denominator}",
        "bound": bound,
        "slack": bound - float(best),
        "pass": float(best) <= bound,
        "argmax": best_desc,
        "class": adversaries.name,
        "class_size": adversaries.size,
    }


def largest_block_sets(n: int, d: int, partition: Partition) -> list[frozenset[int]]:
    """Per block, the largest intersection with a partition class.

    This is the surviving-set construction used when reducing an
    arbitrary-partition set-multilinear polynomial to the block partition:
    everything outside these sets gets fixed to 1.
    """
    block_bits = n // d
    out = []
    for i in range(d):
        block = set(range(i * block_bits, (i + 1) * block_bits))
        best: frozenset[int] = frozenset()
        for cls in partition.blocks:
            cand = frozenset(block & cls)
            if len(cand) > len(best):
                best = cand
        out.append(best)
    return out


def restrict_poly_ones(poly: SparsePolyF2, keep: set[int]) -> SparsePolyF2:
    """Fix every variable outside keep to 1 (monomials shrink, never die)."""
    return SparsePolyF2.make(
        poly.arity, [frozenset(m & keep) for m in poly.monomials], poly.constant
    )


def block_restriction_check(poly: SparsePolyF2, n: int, d: int,
                            partition: Partition) -> dict:
    """Run the surviving-set construction and test block set-multilinearity."""
    sets = largest_block_sets(n, d, partition)
    keep = set().union(*sets)
    restricted = restrict_poly_ones(poly, keep)
    blocks = Partition.contiguous(n, d)
    try:
        ok = is_set_multilinear(restricted, blocks)
    except UncoveredVariable:
        ok = False
    return {
        "surviving_sets": [sorted(s) for s in sets],
        "set_multilinear": ok,
        "restricted_degree": restricted.degree,
    }


# ---------------------------------------------------------------------------
# Strong-extractor measurement (exhaustive, source-by-source)


def extractor_tv_profile(ext, source) -> dict:
    """Per-seed exact TV of ext(source) from uniform, by direct enumeration."""
    tvs = {}
    uni = uniform_distribution(ext.output_len)
    values = list(source.enumerate())
    for w in range(1 << ext.seed_len):
        dist = output_distribution(lambda x: ext.extract(x, w), values, ext.output_len)
        tvs[w] = tv_distance(dist, uni)
    return tvs


def measured_strong_eps(ext, entropy_k: int) -> Fraction:
    """Smallest eps with Pr_w[TV <= eps] >= 1 - eps for every k-free source.

    Exhaustive over seeds and over all bit-fixing sources with entropy_k
    free coordinates; intended for tiny parameters.
    """
    from .extractors import enumerate_bit_fixing_sources

    seeds = 1 << ext.seed_len
    worst: list[Fraction] = []
    for source in enumerate_bit_fixing_sources(ext.input_len, entropy_k):
        tvs = sorted(extractor_tv_profile(ext, source).values())
        worst.append(_min_strong_eps(tvs, seeds))
    return max(worst)


def _min_strong_eps(sorted_tvs: list[Fraction], seeds: int) -> Fraction:
    # Candidates: each distinct TV t with the fraction of seeds above it.
    best = Fraction(1)
    distinct = sorted(set(sorted_tvs))
    for t in distinct:
        good = sum(1 for v in sorted_tvs if v <= t)
        bad_frac = Fraction(seeds - good, seeds)
        cand = max(t, bad_frac)
        best = min(best, cand)
    return best
