"""Batch experiment front-end.

Subcommands wrap exactly one operation each; `run` executes a manifest.
Exit codes: 0 success, 2 validation failure, 3 budget exceeded,
4 acceptance-check failure.  All randomized measurements require an
explicit --seed; nothing reads ambient entropy.

Bit-string inputs on the command line are display strings: the leftmost
character is coordinate 0.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import BudgetExceeded, PrlabError
from ._bits import format_bitstring, parse_bitstring
from . import corrlab, manifest, prg
from .descriptors import function_from_descriptor, extractor_from_descriptor
from .extractors import BitFixingSource, LinearSeededExtractor, kz_extract
from .prg import generator_from_descriptor

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_ACCEPTANCE = 4


def _load_json_arg(text: str) -> dict:
    """Inline JSON or @path to a JSON file."""
    if text.startswith("@"):
        with open(text[1:]) as fh:
            return json.load(fh)
    return json.loads(text)


def _fn_from_flags(args, prefix: str = "fn"):
    desc = getattr(args, prefix.replace("-", "_"))
    if isinstance(desc, str):
        shorthand = _fn_shorthand(desc, args)
        if shorthand is not None:
            return shorthand
        return function_from_descriptor(_load_json_arg(desc))
    return function_from_descriptor(desc)


def _fn_shorthand(name: str, args):
    if name == "gip":
        return function_from_descriptor({"family": "gip", "m": args.m, "k": args.k})
    if name == "rw":
        return function_from_descriptor(
            {"family": "rw", "m": args.m, "k": args.k, "r": args.r}
        )
    if name == "ffm":
        return function_from_descriptor({"family": "ffm", "d": args.d, "width": args.width})
    if name == "parity":
        return function_from_descriptor({"family": "parity", "n": args.n})
    return None


def cmd_eval(args) -> int:
    f = _fn_from_flags(args)
    x = parse_bitstring(args.input)
    print(f.eval(x))
    return EXIT_OK


def cmd_corr(args) -> int:
    f = function_from_descriptor(_load_json_arg(args.f))
    g = function_from_descriptor(_load_json_arg(args.g))
    if args.mc:
        if args.seed is None:
            print("error: --seed is required for Monte-Carlo mode", file=sys.stderr)
            return EXIT_VALIDATION
        import random

        rep = corrlab.corr_mc(f, g, args.mc, random.Random(args.seed))
    else:
        rep = corrlab.corr_exact(f, g)
    print(json.dumps(rep.to_json(), sort_keys=True))
    return EXIT_OK


def cmd_norm(args) -> int:
    f = function_from_descriptor(_load_json_arg(args.f))
    v = corrlab.kparty_norm(f, args.k)
    print(json.dumps({"value": float(v), "value_exact": str(v), "k": args.k},
                     sort_keys=True))
    return EXIT_OK


def cmd_tv(args) -> int:
    a = manifest._dist_from_descriptor(args.dist_a)
    b = manifest._dist_from_descriptor(args.dist_b)
    v = corrlab.tv_distance(a, b)
    print(float(v))
    return EXIT_OK


def cmd_prg_gen(args) -> int:
    gen = generator_from_descriptor(_load_json_arg(args.generator))
    if args.sweep:
        for seed in range(1 << gen.seed_len):
            print(format_bitstring(gen.evaluate(seed), gen.n))
        return EXIT_OK
    if args.seed_bits is None:
        print("error: --seed-bits or --sweep required", file=sys.stderr)
        return EXIT_VALIDATION
    seed = parse_bitstring(args.seed_bits)
    print(format_bitstring(gen.evaluate(seed), gen.n))
    return EXIT_OK


def cmd_prg_test(args) -> int:
    if args.bp2_e2e:
        from .acceptance import c11_bp_fooling_lift

        rep = c11_bp_fooling_lift()
        print(json.dumps(rep, sort_keys=True, indent=2))
        return EXIT_OK if rep["pass"] else EXIT_ACCEPTANCE
    gen = generator_from_descriptor(_load_json_arg(args.generator))
    f = function_from_descriptor(_load_json_arg(args.f))
    v = corrlab.fooling_error(gen, f)
    print(json.dumps({"fooling_error": float(v), "exact": str(v)}, sort_keys=True))
    return EXIT_OK


def cmd_design(args) -> int:
    d = prg.build_design(args.count, args.universe, args.set_size, args.max_intersection)
    print(json.dumps(d.to_json(), sort_keys=True))
    return EXIT_OK


def cmd_extractor_test(args) -> int:
    if args.family == "lhl":
        from .acceptance import c07_lhl_certification

        rep = c07_lhl_certification(args.n, args.free, args.eps, args.m)
        print(json.dumps(rep, sort_keys=True, indent=2))
        return EXIT_OK if rep["pass"] else EXIT_ACCEPTANCE
    if args.family == "kz":
        src = BitFixingSource.make(
            args.n, {int(p): int(b) for p, b in
                     (pair.split("=") for pair in (args.fixed or []))}
        )
        dist = corrlab.output_distribution(
            lambda x: kz_extract(x, args.n, args.m), src.enumerate(), args.m
        )
        tv = corrlab.tv_distance(dist, corrlab.uniform_distribution(args.m))
        print(json.dumps({"tv": float(tv), "tv_exact": str(tv)}, sort_keys=True))
        return EXIT_OK
    print(f"error: unknown extractor family {args.family}", file=sys.stderr)
    return EXIT_VALIDATION


def cmd_run(args) -> int:
    summary = manifest.run_manifest_file(args.manifest, args.out, workers=args.workers)
    print(json.dumps(summary, sort_keys=True, indent=2))
    if summary["acceptance_failures"]:
        return EXIT_ACCEPTANCE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="prlab",
        description="Pseudorandomness lab: evaluate hard functions, measure "
                    "correlation and fooling error, certify extractors.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate a function on one input")
    pe.add_argument("--fn", required=True,
                    help="gip|rw|ffm|parity shorthand or a JSON descriptor")
    pe.add_argument("--m", type=int)
    pe.add_argument("--k", type=int)
    pe.add_argument("--r", type=int)
    pe.add_argument("--d", type=int)
    pe.add_argument("--n", type=int)
    pe.add_argument("--width", type=int)
    pe.add_argument("--input", required=True,
                    help="bit string, leftmost char is coordinate 0")
    pe.set_defaults(func=cmd_eval)

    pc = sub.add_parser("corr", help="correlation of two functions")
    pc.add_argument("--f", required=True, help="JSON descriptor (or @file)")
    pc.add_argument("--g", required=True)
    pc.add_argument("--mc", type=int, default=0, help="Monte-Carlo sample count")
    pc.add_argument("--seed", type=int)
    pc.set_defaults(func=cmd_corr)

    pn = sub.add_parser("norm", help="k-party cube norm")
    pn.add_argument("--f", required=True)
    pn.add_argument("--k", type=int, required=True)
    pn.set_defaults(func=cmd_norm)

    pt = sub.add_parser("tv", help="total variation distance")
    pt.add_argument("--dist-a", required=True, help="uniform:<bits> | point:<v>[:bits]")
    pt.add_argument("--dist-b", required=True)
    pt.set_defaults(func=cmd_tv)

    pg = sub.add_parser("prg-gen", help="stream generator outputs")
    pg.add_argument("--generator", required=True, help="JSON descriptor (or @file)")
    pg.add_argument("--seed-bits", help="bit string seed")
    pg.add_argument("--sweep", action="store_true", help="all seeds, one line each")
    pg.set_defaults(func=cmd_prg_gen)

    pp = sub.add_parser("prg-test", help="fooling error of a generator")
    pp.add_argument("--generator")
    pp.add_argument("--f")
    pp.add_argument("--bp2-e2e", action="store_true",
                    help="run the end-to-end width-2 program lift check")
    pp.set_defaults(func=cmd_prg_test)

    pd = sub.add_parser("design", help="greedy combinatorial design")
    pd.add_argument("--count", type=int, required=True)
    pd.add_argument("--universe", type=int, required=True)
    pd.add_argument("--set-size", type=int, required=True)
    pd.add_argument("--max-intersection", type=int, required=True)
    pd.set_defaults(func=cmd_design)

    px = sub.add_parser("extractor-test", help="extractor certification")
    px.add_argument("--family", required=True, choices=["lhl", "kz"])
    px.add_argument("--n", type=int, required=True)
    px.add_argument("--m", type=int, default=1)
    px.add_argument("--free", type=int, default=5)
    px.add_argument("--eps", type=float, default=0.25)
    px.add_argument("--fixed", nargs="*", help="kz: fixed cells as pos=bit")
    px.set_defaults(func=cmd_extractor_test)

    pr = sub.add_parser("run", help="execute a manifest")
    pr.add_argument("manifest")
    pr.add_argument("--out", required=True, help="report output directory")
    pr.add_argument("--workers", type=int, default=1)
    pr.set_defaults(func=cmd_run)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except PrlabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
