"""Command-line frontend.

All outputs are JSON (or DOT for tree renderings) and deterministic for a
fixed configuration and seed.  Exit codes: 0 success, 1 verification
failure, 2 usage error, 3 unstable level.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .characters import SmoothCharacter, build_type, intertwines
from .finite_rep import (
    constituent_count,
    induced_type_character,
    inner_product,
    mackey_dim_hom,
    simplex_quotient,
    transported_type,
)
from .k0 import block_k0, group_k0_truncated, torus_line_k0
from .padic import Mat2
from .patterns import UnstableLevel, sl2_zp
from .tree import (
    act,
    apartment_edge,
    apartment_vertex,
    ball,
    distance,
    edge_neighborhood,
    half_tree,
    region_to_dot,
    single_edge_region,
    standard_edge,
    standard_vertex,
    pgl2_inversion_check,
    sl2_inversion_check,
)
from .verify import run_suite

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNSTABLE = 3


def parse_chi(p: int, spec: str) -> SmoothCharacter:
    """--chi n=<int>,gen=<int>[,gen2=<int>]: exponents on the canonical
    generators (least primitive root mod p^n for odd p; -1 and 5 for p=2)."""
    fields = {}
    for part in spec.split(","):
        key, _, value = part.partition("=")
        fields[key.strip()] = int(value)
    n = fields.pop("n")
    gens = []
    if "gen" in fields:
        gens.append(fields.pop("gen"))
    if "gen2" in fields:
        gens.append(fields.pop("gen2"))
    if fields:
        raise ValueError(f"unknown character fields {sorted(fields)}")
    if p == 2 and n == 1:
        gens = []
    return SmoothCharacter(p, n, tuple(gens))


def parse_matrix(spec: str) -> Mat2:
    parts = spec.split(",")
    if len(parts) != 4:
        raise ValueError("matrix spec must be a,b,c,d")
    return Mat2.of(*(Fraction(x) for x in parts))


def parse_anchor(p: int, spec: str):
    """v0 | v1 | e | v:<k> | e:<k>."""
    if spec == "v0":
        return standard_vertex(p)
    if spec == "v1":
        return standard_edge(p).v1
    if spec == "e":
        return standard_edge(p)
    kind, _, idx = spec.partition(":")
    if kind == "v":
        return apartment_vertex(p, int(idx))
    if kind == "e":
        return apartment_edge(p, int(idx))
    raise ValueError(f"unknown anchor {spec}")


def _emit(data: dict, args) -> None:
    print(json.dumps(data, indent=2, sort_keys=True))


def cmd_tree(args) -> int:
    p = args.p
    if args.mode == "PGL2" and args.inversion:
        print(json.dumps({"mode": "PGL2", "inverts_edges": pgl2_inversion_check(p)}))
        return EXIT_OK
    if args.inversion:
        print(json.dumps({"mode": "SL2", "inverts_edges": sl2_inversion_check(p)}))
        return EXIT_OK
    if args.distance:
        g1, g2 = (parse_matrix(s) for s in args.distance)
        v = act(g1, standard_vertex(p))
        w = act(g2, standard_vertex(p))
        print(json.dumps({"p": p, "distance": distance(v, w)}))
        return EXIT_OK
    region = None
    highlight = None
    if args.ball:
        anchor, _, n = args.ball.partition(":")
        region = ball(parse_anchor(p, anchor), int(n))
    elif args.halftree:
        anchor, _, n = args.halftree.partition(":")
        e = parse_anchor(p, anchor)
        x = e.v0 if args.side == "v0" else e.v1
        highlight = half_tree(x, e, int(n))
        region = ball(x, int(n) + 1)
    elif args.shell:
        anchor, _, n = args.shell.partition(":")
        region = edge_neighborhood(parse_anchor(p, anchor), int(n))
    else:
        region = single_edge_region(standard_edge(p))
    if args.dot:
        sys.stdout.write(region_to_dot(region, highlight=highlight))
        return EXIT_OK
    data = {
        "p": p,
        "vertices": sorted(v.label() for v in region.vertices),
        "edges": sorted(f"{e.v0.label()}--{e.v1.label()}" for e in region.edges),
    }
    if highlight:
        data["highlight_vertices"] = sorted(v.label() for v in highlight.vertices)
    _emit(data, args)
    return EXIT_OK


def cmd_type(args) -> int:
    chi = parse_chi(args.p, args.chi)
    t = build_type(chi)
    _emit(
        {
            "p": args.p,
            "chi": chi.label(),
            "order": chi.order,
            "conductor": chi.conductor,
            "weyl_fixes_chi": chi.order <= 2,
            "pattern": {
                "bounds": [str(b) for b in t.pattern.bounds],
                "diag_units": list(t.pattern.diag_units),
            },
        },
        args,
    )
    return EXIT_OK


def cmd_intertwine(args) -> int:
    chi = parse_chi(args.p, args.chi)
    chi2 = parse_chi(args.p, args.chi2) if args.chi2 else chi
    g = parse_matrix(args.g)
    t1, t2 = build_type(chi), build_type(chi2)
    verdict = intertwines(g, t1, t2, args.m, seed=args.seed)
    _emit(
        {
            "p": args.p,
            "chi": chi.label(),
            "chi2": chi2.label(),
            "g": repr(g),
            "m": args.m,
            "intertwines": verdict,
        },
        args,
    )
    return EXIT_OK


def cmd_mackey(args) -> int:
    chi = parse_chi(args.p, args.chi)
    chi2 = parse_chi(args.p, args.chi2) if args.chi2 else chi
    which = args.target
    t1 = transported_type(build_type(chi), which)
    t2 = transported_type(build_type(chi2), which)
    quot = simplex_quotient(args.p, args.m, which)
    f1 = induced_type_character(quot, t1)
    f2 = induced_type_character(quot, t2)
    oracle = inner_product(f1, f2)
    if which in ("v0", "v1"):
        md = mackey_dim_hom(t1, t2, sl2_zp(args.p), args.m)
    else:
        md = oracle
    data = {
        "p": args.p,
        "chi": chi.label(),
        "chi2": chi2.label(),
        "target": which,
        "m": args.m,
        "dim_hom": md,
        "inner_product": oracle,
        "constituents": constituent_count(which, chi, args.m)
        if which in ("v0", "v1") and chi == chi2
        else None,
    }
    _emit(data, args)
    return EXIT_OK if md == oracle else EXIT_FAIL


def cmd_k0(args) -> int:
    if args.group:
        report = group_k0_truncated(args.p, args.m)
    elif args.torus_line:
        rank, length = args.torus_line
        report = torus_line_k0(rank, length)
    else:
        chi = parse_chi(args.p, args.chi)
        report = block_k0(chi)
    _emit(report.to_json(), args)
    return EXIT_OK


def cmd_verify(args) -> int:
    kwargs = {}
    if args.max_distance is not None:
        kwargs["max_distance"] = args.max_distance
    if args.p is not None and args.suite in (
        "tree",
        "stabilizers",
        "types",
        "intertwiner",
        "diagram",
        "mackey",
        "numbirred",
        "filtquot",
        "projind",
    ):
        kwargs["primes"] = (args.p,)
    try:
        report = run_suite(args.suite, seed=args.seed, **kwargs)
    except TypeError:
        report = run_suite(args.suite, seed=args.seed)
    _emit(report, args)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="padicblocks",
        description="Exact computations on the Bruhat-Tits tree of SL2(Qp)",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    t = sub.add_parser("tree", help="regions, distances and inversion checks")
    t.add_argument("--p", type=int, required=True)
    t.add_argument("--mode", choices=["SL2", "PGL2"], default="SL2")
    t.add_argument("--ball", help="anchor:n")
    t.add_argument("--halftree", help="anchor:n (anchor must be an edge)")
    t.add_argument("--side", choices=["v0", "v1"], default="v0")
    t.add_argument("--shell", help="anchor:n edge neighborhood")
    t.add_argument("--distance", nargs=2, metavar=("G1", "G2"))
    t.add_argument("--inversion", action="store_true")
    t.add_argument("--dot", action="store_true")
    t.set_defaults(func=cmd_tree)

    ty = sub.add_parser("type", help="type subgroup and character data")
    ty.add_argument("--p", type=int, required=True)
    ty.add_argument("--chi", required=True)
    ty.set_defaults(func=cmd_type)

    it = sub.add_parser("intertwine", help="intertwining test for one element")
    it.add_argument("--p", type=int, required=True)
    it.add_argument("--chi", required=True)
    it.add_argument("--chi2")
    it.add_argument("--g", required=True, help="matrix a,b,c,d")
    it.add_argument("--m", type=int, default=2)
    it.add_argument("--seed", type=int, default=0)
    it.set_defaults(func=cmd_intertwine)

    mk = sub.add_parser("mackey", help="Mackey dimension counts")
    mk.add_argument("--p", type=int, required=True)
    mk.add_argument("--chi", required=True)
    mk.add_argument("--chi2")
    mk.add_argument("--target", choices=["v0", "v1", "edge"], default="v0")
    mk.add_argument("--m", type=int, default=2)
    mk.set_defaults(func=cmd_mackey)

    k = sub.add_parser("k0", help="K0 pushout reports")
    k.add_argument("--p", type=int, default=2)
    k.add_argument("--chi")
    k.add_argument("--group", action="store_true")
    k.add_argument("--m", type=int, default=1)
    k.add_argument("--torus-line", nargs=2, type=int, metavar=("RANK", "LEN"))
    k.set_defaults(func=cmd_k0)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument(
        "--suite",
        required=True,
        choices=sorted(
            ["tree", "stabilizers", "types", "intertwiner", "diagram", "mackey",
             "numbirred", "filtquot", "projind", "k0", "all"]
        ),
    )
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--p", type=int)
    v.add_argument("--max-distance", type=int, dest="max_distance")
    v.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UnstableLevel as exc:
        print(json.dumps({"error": "unstable level", "detail": str(exc)}))
        return EXIT_UNSTABLE
    except (ValueError, KeyError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
