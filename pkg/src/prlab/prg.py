"""Generator constructions: combinatorial designs, the Nisan-Wigderson
generator, the junta-class PRG, the width-2-BP PRG, pseudorestriction
sampling, and the restriction-composed generator.

A Generator is a deterministic seeded map {0,1}^s -> {0,1}^n whose
descriptor (a JSON-able dict) reconstructs it bit-exactly; descriptors
embed every pinned constant so runs are auditable.

Design construction is greedy over lexicographically ordered candidate
subsets; the universe size is therefore an *output* of construction at
the smallest feasible size, not a target.

The junta-class PRG instantiates Nisan-Wigderson with a parity-of-blocks
hard function: the nominal hard-input budget

    r_raw = d * C * log2(1/eps) * 2^(c * sqrt(log2 n))

is rounded up to a multiple of the block width m_xor = d * ceil(log2 n),
giving r = k_blocks * m_xor input bits arranged as k_blocks blocks; the
hard function applies the block-parity map and then an outer function h
on k_blocks bits (default: parity, i.e. the full parity of r bits).  The
design intersection bound is ceil(log2 n).  C and c are named constants
with pinned defaults, recorded in every descriptor.

The width-2-BP PRG is the junta PRG run at error eps / ((t+1)/2), the
Fourier L1 budget of a length-t width-2 core.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import Infeasible, ParameterOutOfRange, ShapeMismatch, UnknownDescriptor
from .models import BooleanFunction
from .restrictions import Restriction, star_merge
from .extractors import ber_seed_len, sample_ber_almost_kwise
from ._bits import mask

# Exhaustive seed sweeps materialize beyond this only on request.
SWEEP_MAX_SEED_LEN = 26

DEFAULT_CONSTANTS = {
    "C": 1.0,  # multiplier on d * log2(1/eps)
    "c": 0.0,  # exponent multiplier in 2^(c*sqrt(log2 n))
    "ell_factor": 0.5,  # ell = max(1, round(ell_factor * log2(n/delta)))
    "design_universe_cap": 64,
    "degenerate_passthrough": False,
}


@dataclass(frozen=True)
class Design:
    """Subsets of a universe with bounded pairwise intersections."""

    universe: int
    set_size: int
    max_intersection: int
    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for s in self.sets:
            if len(s) != self.set_size:
                raise ShapeMismatch(f"set {s} does not have size {self.set_size}")
            if any(not 0 <= i < self.universe for i in s):
                raise ShapeMismatch(f"set {s} leaves the universe [{self.universe}]")
        for a, b in combinations(self.sets, 2):
            if len(set(a) & set(b)) > self.max_intersection:
                raise ShapeMismatch(
                    f"sets {a} and {b} intersect in more than {self.max_intersection}"
                )

    def to_json(self) -> dict:
        return {
            "universe": self.universe,
            "set_size": self.set_size,
            "max_intersection": self.max_intersection,
            "sets": [list(s) for s in self.sets],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Design":
        return cls(
            int(obj["universe"]),
            int(obj["set_size"]),
            int(obj["max_intersection"]),
            tuple(tuple(s) for s in obj["sets"]),
        )


def build_design(count: int, universe: int, set_size: int, max_intersection: int) -> Design:
    """Greedy design: scan size-r subsets lexicographically, keep compatible ones."""
    if set_size > universe:
        raise Infeasible(f"set size {set_size} exceeds universe {universe}")
    chosen: list[frozenset[int]] = []
    for cand in combinations(range(universe), set_size):
        cs = frozenset(cand)
        if all(len(cs & prev) <= max_intersection for prev in chosen):
            chosen.append(cs)
            if len(chosen) == count:
                return Design(
                    universe,
                    set_size,
                    max_intersection,
                    tuple(tuple(sorted(s)) for s in chosen),
                )
    raise Infeasible(
        f"greedy found only {len(chosen)}/{count} sets of size {set_size} "
        f"with intersection <= {max_intersection} over [{universe}]"
    )


def smallest_feasible_design(
    count: int, set_size: int, max_intersection: int, cap: int
) -> Design:
    """Grow the universe from set_size until the greedy construction succeeds."""
    for universe in range(set_size, cap + 1):
        try:
            return build_design(count, universe, set_size, max_intersection)
        except Infeasible:
            continue
    raise Infeasible(
        f"no universe up to {cap} admits {count} sets of size {set_size} "
        f"with intersection <= {max_intersection}"
    )


def nw_generate(h: BooleanFunction, design: Design, seed: int) -> int:
    """Output bit i = h(seed restricted to design set i, ascending index order)."""
    if h.arity != design.set_size:
        raise ShapeMismatch(
            f"hard function arity {h.arity} != design set size {design.set_size}"
        )
    if seed >> design.universe:
        raise ShapeMismatch(f"seed exceeds {design.universe} bits")
    out = 0
    for i, s in enumerate(design.sets):
        y = 0
        for t, j in enumerate(s):
            y |= ((seed >> j) & 1) << t
        if h.eval(y):
            out |= 1 << i
    return out


class Generator:
    """A deterministic seeded map with an auditable construction descriptor."""

    def __init__(self, seed_len: int, n: int, descriptor: dict):
        self.seed_len = seed_len
        self.n = n
        self.descriptor = descriptor

    def evaluate(self, seed: int) -> int:
        raise NotImplementedError

    def outputs(self) -> np.ndarray:
        """Outputs over all 2^seed_len seeds, as a uint64 array."""
        if self.seed_len > SWEEP_MAX_SEED_LEN:
            raise ParameterOutOfRange(
                f"seed length {self.seed_len} exceeds sweep cap {SWEEP_MAX_SEED_LEN}"
            )
        return np.fromiter(
            (self.evaluate(s) for s in range(1 << self.seed_len)),
            dtype=np.uint64,
            count=1 << self.seed_len,
        )


class PassthroughGenerator(Generator):
    """Identity on the first n seed bits."""

    def __init__(self, n: int, seed_len: int | None = None):
        super().__init__(
            seed_len if seed_len is not None else n,
            n,
            {"kind": "passthrough", "n": n, "seed_len": seed_len or n},
        )
        if self.seed_len < n:
            raise ShapeMismatch("passthrough needs seed_len >= n")

    def evaluate(self, seed: int) -> int:
        return seed & mask(self.n)

    def outputs(self) -> np.ndarray:
        if self.seed_len > SWEEP_MAX_SEED_LEN:
            raise ParameterOutOfRange("seed too long to sweep")
        seeds = np.arange(1 << self.seed_len, dtype=np.uint64)
        return seeds & np.uint64(mask(self.n))


class ConstantGenerator(Generator):
    def __init__(self, n: int, value: int = 0, seed_len: int = 1):
        super().__init__(
            seed_len, n, {"kind": "constant", "n": n, "value": value, "seed_len": seed_len}
        )
        self.value = value & mask(n)

    def evaluate(self, seed: int) -> int:
        return self.value

    def outputs(self) -> np.ndarray:
        return np.full(1 << self.seed_len, self.value, dtype=np.uint64)


class NWGenerator(Generator):
    def __init__(self, h: BooleanFunction, design: Design, constants: dict | None = None):
        descriptor = {
            "kind": "nw",
            "n": len(design.sets),
            "seed_len": design.universe,
            "design": design.to_json(),
            "hard_fn": getattr(h, "descriptor", {"family": "table", "n": h.arity}),
            "constants": dict(constants or {}),
        }
        if descriptor["hard_fn"].get("family") == "table" and "bits" not in descriptor["hard_fn"]:
            descriptor["hard_fn"]["bits"] = format(h.truth_table(), "x")
        super().__init__(design.universe, len(design.sets), descriptor)
        self.h = h
        self.design = design

    def evaluate(self, seed: int) -> int:
        return nw_generate(self.h, self.design, seed)

    def outputs(self) -> np.ndarray:
        if self.seed_len > SWEEP_MAX_SEED_LEN:
            raise ParameterOutOfRange("seed too long to sweep")
        seeds = np.arange(1 << self.seed_len, dtype=np.uint64)
        out = np.zeros_like(seeds)
        htab = f_table_bits(self.h)
        for i, s in enumerate(self.design.sets):
            idx = np.zeros_like(seeds)
            for t, j in enumerate(s):
                idx |= ((seeds >> np.uint64(j)) & np.uint64(1)) << np.uint64(t)
            out |= htab[idx.astype(np.int64)].astype(np.uint64) << np.uint64(i)
        return out


def f_table_bits(f: BooleanFunction) -> np.ndarray:
    """Truth table of f as a uint64 0/1 array (helper for vector sweeps)."""
    return f.table_array().astype(np.uint64)


def junta_prg(
    n: int,
    d: int,
    eps: float,
    hard: dict | None = None,
    constants: dict | None = None,
) -> Generator:
    """NW generator sized for the XOR-of-d-juntas class at error eps."""
    if not 0 < eps < 1:
        raise ParameterOutOfRange(f"eps must be in (0,1), got {eps}")
    if not 1 <= d <= n:
        raise ParameterOutOfRange(f"need 1 <= d <= n, got d={d}, n={n}")
    cfg = dict(DEFAULT_CONSTANTS)
    cfg.update(constants or {})
    log_n = max(1, math.ceil(math.log2(n)))
    m_xor = d * log_n
    r_raw = d * cfg["C"] * math.log2(1 / eps) * (2 ** (cfg["c"] * math.sqrt(math.log2(n))))
    k_blocks = max(1, math.ceil(r_raw / m_xor))
    r = k_blocks * m_xor
    if r >= n:
        if cfg["degenerate_passthrough"]:
            return PassthroughGenerator(n)
        raise Infeasible(
            f"hard-input budget r={r} >= n={n}; the construction degenerates "
            "(set degenerate_passthrough to get the identity generator)"
        )
    hard = dict(hard or {"family": "parity"})
    h = _hard_on_blocks(hard, k_blocks, m_xor)
    design = smallest_feasible_design(n, r, log_n, cfg["design_universe_cap"])
    gen = NWGenerator(h, design, constants={**cfg, "eps": eps, "d": d,
                                            "m_xor": m_xor, "k_blocks": k_blocks, "r": r})
    gen.descriptor["kind"] = "nw"
    return gen


def _hard_on_blocks(hard: dict, k_blocks: int, m_xor: int) -> BooleanFunction:
    """Outer h on k_blocks bits composed with per-block parity, on r bits."""
    from .extractors import BlockParity
    from .hardfn import gip_function

    family = hard.get("family", "parity")
    if family == "parity":
        outer = BooleanFunction.parity(k_blocks)
        outer.descriptor = {"family": "parity", "n": k_blocks}
    elif family == "gip":
        k = hard.get("k", 2)
        if k_blocks % k:
            raise ShapeMismatch(f"gip outer needs k | k_blocks, got {k} and {k_blocks}")
        outer = gip_function(k_blocks // k, k)
    elif family == "table":
        outer = BooleanFunction.from_table(k_blocks, int(hard["bits"], 16))
        outer.descriptor = {"family": "table", "n": k_blocks, "bits": hard["bits"]}
    else:
        raise UnknownDescriptor(f"unknown hard-function family {family!r}")
    bp = BlockParity(k_blocks, m_xor)
    h = BooleanFunction(
        k_blocks * m_xor,
        fn=lambda x: outer.eval(bp.apply(x)),
        name=f"{outer.name}.xor{m_xor}",
    )
    h.descriptor = {
        "family": "xor_blocks",
        "outer": outer.descriptor,
        "m_xor": m_xor,
        "k_blocks": k_blocks,
    }
    return h


def l1_budget(t: int):
    """The Fourier L1 cap (t+1)/2 of a length-t width-2 one-bit-reading core."""
    from fractions import Fraction

    return Fraction(t + 1, 2)


def bp2_prg(n: int, d: int, t: int, eps: float, constants: dict | None = None) -> Generator:
    """PRG for (d, t, n) width-2 programs: the junta PRG at eps / ((t+1)/2)."""
    if t < 1:
        raise ParameterOutOfRange(f"t must be >= 1, got {t}")
    eps_prime = eps / float(l1_budget(t))
    gen = junta_prg(n, d, eps_prime, constants=constants)
    gen.descriptor["bp2"] = {"t": t, "eps": eps, "eps_inner": eps_prime,
                             "l1_budget": str(l1_budget(t))}
    return gen


# ---------------------------------------------------------------------------
# Pseudorestrictions and the restriction-composed generator


def pseudorestriction_ell(n: int, delta: float, ell_factor: float) -> int:
    return max(1, round(ell_factor * math.log2(n / delta)))


def pseudorestriction_seed_len(n: int, d: int, delta: float, ell: int | None = None,
                               constants: dict | None = None) -> int:
    cfg = dict(DEFAULT_CONSTANTS)
    cfg.update(constants or {})
    if ell is None:
        ell = pseudorestriction_ell(n, delta, cfg["ell_factor"])
    return n + ber_seed_len(n, d, ell, delta)


def sample_pseudorestriction(
    n: int,
    d: int,
    delta: float,
    seed: int,
    ell: int | None = None,
    constants: dict | None = None,
) -> Restriction:
    """U (*) Z with U from the first n seed bits and Z near Ber(1/d)^n.

    Coordinates with Z_i = 1 stay alive; the expected star fraction is
    about 1/d (exactly 1/d when delta = 0, by the exact marginals of the
    sampler).  d = 1 leaves everything alive.
    """
    cfg = dict(DEFAULT_CONSTANTS)
    cfg.update(constants or {})
    if ell is None:
        ell = pseudorestriction_ell(n, delta, cfg["ell_factor"])
    u = seed & mask(n)
    z = sample_ber_almost_kwise(n, d, ell, delta, seed >> n)
    return star_merge(u, z, n)


class PseudorestrictionSampler:
    """sample_pseudorestriction packaged with its parameters."""

    def __init__(self, n: int, d: int, delta: float, ell: int | None = None,
                 constants: dict | None = None):
        cfg = dict(DEFAULT_CONSTANTS)
        cfg.update(constants or {})
        self.n = n
        self.d = d
        self.delta = delta
        self.ell = ell if ell is not None else pseudorestriction_ell(n, delta, cfg["ell_factor"])
        self.seed_len = n + ber_seed_len(n, d, self.ell, delta)

    def sample(self, seed: int) -> Restriction:
        return sample_pseudorestriction(self.n, self.d, self.delta, seed, ell=self.ell)

    def z_string(self, zseed: int) -> int:
        return sample_ber_almost_kwise(self.n, self.d, self.ell, self.delta, zseed)

    def to_json(self) -> dict:
        return {
            "family": "pseudorestriction",
            "n": self.n,
            "d": self.d,
            "delta": self.delta,
            "ell": self.ell,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "PseudorestrictionSampler":
        return cls(int(obj["n"]), int(obj["d"]), float(obj["delta"]), ell=int(obj["ell"]))


class AllStarSampler:
    """Degenerate sampler leaving every coordinate alive (for plumbing tests)."""

    def __init__(self, n: int):
        self.n = n
        self.seed_len = 0

    def sample(self, seed: int) -> Restriction:
        return Restriction.all_star(self.n)

    def z_string(self, zseed: int) -> int:
        return mask(self.n)

    def to_json(self) -> dict:
        return {"family": "all_star", "n": self.n}


class AWGenerator(Generator):
    """Round-composed generator: pseudorestriction rounds, then a base fill.

    Seed layout, low bits first: for each round, n bits of fill values U
    followed by the restriction sampler's seed; after all rounds, the
    base generator's seed.  Output coordinate j takes its value from the
    first round whose restriction fixes j, or from the base generator's
    output if j survives every round.
    """

    def __init__(self, base: Generator, sampler, rounds: int):
        if rounds < 0:
            raise ParameterOutOfRange(f"rounds must be >= 0, got {rounds}")
        if sampler.n != base.n:
            raise ShapeMismatch(
                f"sampler over {sampler.n} bits but base outputs {base.n}"
            )
        self.base = base
        self.sampler = sampler
        self.rounds = rounds
        # sampler.seed_len counts the n fill bits plus the Z-string seed.
        total = rounds * sampler.seed_len + base.seed_len
        super().__init__(
            total,
            base.n,
            {
                "kind": "aw",
                "n": base.n,
                "seed_len": total,
                "rounds": rounds,
                "sampler": sampler.to_json(),
                "base": base.descriptor,
            },
        )

    def evaluate(self, seed: int) -> int:
        n = self.n
        fixed_mask = 0
        out = 0
        off = 0
        for _ in range(self.rounds):
            part = (seed >> off) & mask(self.sampler.seed_len)
            off += self.sampler.seed_len
            rho = self.sampler.sample(part)
            newly = rho.fixed_mask & ~fixed_mask
            out |= rho.fixed_bits & newly
            fixed_mask |= rho.fixed_mask
        base_out = self.base.evaluate(seed >> off)
        out |= base_out & mask(n) & ~fixed_mask
        return out

    def coverage(self, seed: int) -> list[int]:
        """Which round (1-based; 0 = base fill) fixed each coordinate."""
        n = self.n
        owner = [0] * n
        fixed_mask = 0
        off = 0
        for rnd in range(1, self.rounds + 1):
            part = (seed >> off) & mask(self.sampler.seed_len)
            off += self.sampler.seed_len
            rho = self.sampler.sample(part)
            newly = rho.fixed_mask & ~fixed_mask
            for j in range(n):
                if (newly >> j) & 1:
                    owner[j] = rnd
            fixed_mask |= rho.fixed_mask
        return owner

    def outputs(self) -> np.ndarray:
        if self.seed_len > SWEEP_MAX_SEED_LEN:
            raise ParameterOutOfRange("seed too long to sweep")
        seeds = np.arange(1 << self.seed_len, dtype=np.uint64)
        n = self.n
        fixed_mask = np.zeros_like(seeds)
        out = np.zeros_like(seeds)
        off = 0
        slen = self.sampler.seed_len
        for _ in range(self.rounds):
            part = (seeds >> np.uint64(off)) & np.uint64(mask(slen))
            off += slen
            u = part & np.uint64(mask(n))
            zseeds = part >> np.uint64(n)
            distinct = np.unique(zseeds)
            lut = np.zeros(int(distinct.max()) + 1 if len(distinct) else 1, dtype=np.uint64)
            for zs in distinct:
                lut[int(zs)] = self.sampler.z_string(int(zs))
            z = lut[zseeds.astype(np.int64)]
            rho_fixed = ~z & np.uint64(mask(n))
            newly = rho_fixed & ~fixed_mask
            out |= u & newly
            fixed_mask |= rho_fixed
        base_seeds = seeds >> np.uint64(off)
        base_out_all = self.base.outputs()
        base_out = base_out_all[base_seeds.astype(np.int64)]
        out |= base_out & np.uint64(mask(n)) & ~fixed_mask
        return out


def aw_prg(base: Generator, sampler, rounds: int) -> Generator:
    """Compose pseudorestriction rounds in front of a base generator."""
    if rounds == 0:
        return base
    return AWGenerator(base, sampler, rounds)


# ---------------------------------------------------------------------------
# Descriptor round-trip


def generator_from_descriptor(desc: dict) -> Generator:
    kind = desc.get("kind")
    if kind == "passthrough":
        return PassthroughGenerator(int(desc["n"]), int(desc.get("seed_len", desc["n"])))
    if kind == "constant":
        return ConstantGenerator(int(desc["n"]), int(desc.get("value", 0)),
                                 int(desc.get("seed_len", 1)))
    if kind == "nw":
        design = Design.from_json(desc["design"])
        h = _hard_from_descriptor(desc["hard_fn"], design.set_size)
        gen = NWGenerator(h, design, constants=desc.get("constants", {}))
        if "bp2" in desc:
            gen.descriptor["bp2"] = desc["bp2"]
        return gen
    if kind == "aw":
        base = generator_from_descriptor(desc["base"])
        sampler_desc = desc["sampler"]
        if sampler_desc["family"] == "pseudorestriction":
            sampler = PseudorestrictionSampler.from_json(sampler_desc)
        elif sampler_desc["family"] == "all_star":
            sampler = AllStarSampler(int(sampler_desc["n"]))
        else:
            raise UnknownDescriptor(f"unknown sampler family {sampler_desc['family']!r}")
        return AWGenerator(base, sampler, int(desc["rounds"]))
    raise UnknownDescriptor(f"unknown generator kind {kind!r}")


def _hard_from_descriptor(desc: dict, arity: int) -> BooleanFunction:
    family = desc.get("family")
    if family == "xor_blocks":
        return _hard_on_blocks(desc["outer"], desc["k_blocks"], desc["m_xor"])
    if family == "parity":
        h = BooleanFunction.parity(int(desc["n"]))
        h.descriptor = desc
        return h
    if family == "table":
        h = BooleanFunction.from_table(int(desc["n"]), int(desc["bits"], 16))
        h.descriptor = desc
        return h
    if family == "gip":
        from .hardfn import gip_function

        return gip_function(int(desc["m"]), int(desc["k"]))
    raise UnknownDescriptor(f"unknown hard-function family {family!r}")
