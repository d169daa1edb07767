"""Build lab objects from JSON descriptors.

Descriptors are the wire format for manifests and CLI flags: a dict with
a ``family`` (functions, extractors, distributions) or ``kind``
(generators) discriminator.  Everything constructed here round-trips:
the object's own descriptor reproduces it bit-exactly.
"""

from __future__ import annotations

from .errors import UnknownDescriptor
from .gf2 import FieldSpec, field_new
from .models import (
    BooleanFunction,
    BranchingProgram2,
    Junta,
    SparsePolyF2,
    XorOfJuntas,
)
from .extractors import (
    BlockParity,
    IdentityMap,
    KZExtractor,
    LinearSeededExtractor,
)
from . import hardfn


def field_from_descriptor(desc: dict | None, width: int | None = None) -> FieldSpec:
    if desc is None:
        if width is None:
            raise UnknownDescriptor("field descriptor or width required")
        return field_new(width)
    return FieldSpec.from_json(desc)


def extractor_from_descriptor(desc: dict):
    family = desc.get("family")
    if family == "toeplitz_lhl":
        return LinearSeededExtractor(int(desc["n"]), int(desc["m"]))
    if family == "kz_cycle":
        return KZExtractor(int(desc["n"]), int(desc["m"]), desc.get("M"))
    if family == "block_parity":
        return BlockParity(int(desc["m"]), int(desc["r"]))
    if family == "identity":
        return IdentityMap(int(desc["n"]))
    raise UnknownDescriptor(f"unknown extractor family {family!r}")


def function_from_descriptor(desc: dict) -> BooleanFunction:
    family = desc.get("family")
    if family == "gip":
        return hardfn.gip_function(int(desc["m"]), int(desc["k"]))
    if family == "rw":
        return hardfn.rw_function(int(desc["m"]), int(desc["k"]), int(desc["r"]))
    if family == "ffm":
        d = int(desc["d"])
        width = desc.get("width")
        spec = field_from_descriptor(desc.get("field"), int(width) if width else None)
        return hardfn.ffm_function(d, spec)
    if family == "extffm":
        d = int(desc["d"])
        ext = extractor_from_descriptor(desc["ext"])
        spec = FieldSpec.from_json(desc["field"])
        return hardfn.extffm_function(d, ext, spec)
    if family == "compose":
        outer = function_from_descriptor(desc["outer"])
        inner = extractor_from_descriptor(desc["inner"])
        return hardfn.compose_ext(outer, inner, int(desc["k"]))
    if family == "parity":
        f = BooleanFunction.parity(int(desc["n"]))
        f.descriptor = {"family": "parity", "n": f.arity}
        return f
    if family == "constant":
        f = BooleanFunction.constant(int(desc["n"]), int(desc["value"]))
        f.descriptor = dict(desc)
        return f
    if family == "dictator":
        f = BooleanFunction.dictator(int(desc["n"]), int(desc["i"]))
        f.descriptor = dict(desc)
        return f
    if family == "table":
        f = BooleanFunction.from_table(int(desc["n"]), int(desc["bits"], 16))
        f.descriptor = dict(desc)
        return f
    if family == "junta":
        j = Junta(int(desc["arity"]), tuple(desc["support"]), int(desc["table"], 16)
                  if isinstance(desc["table"], str) else int(desc["table"]))
        f = j.as_function()
        f.descriptor = dict(desc)
        return f
    if family == "xor_of_juntas":
        arity = int(desc["arity"])
        terms = tuple(
            Junta(arity, tuple(t["support"]),
                  int(t["table"], 16) if isinstance(t["table"], str) else int(t["table"]))
            for t in desc["terms"]
        )
        f = XorOfJuntas(arity, terms).as_function()
        f.descriptor = dict(desc)
        return f
    if family == "sparse_poly":
        p = SparsePolyF2.from_json(desc)
        f = p.as_function()
        f.descriptor = dict(desc)
        f.poly = p
        return f
    if family == "bp2":
        prog = BranchingProgram2.from_json(desc["program"])
        f = prog.as_function()
        f.descriptor = dict(desc)
        f.program = prog
        return f
    raise UnknownDescriptor(f"unknown function family {family!r}")
