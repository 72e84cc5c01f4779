"""Command-line entry point.

Every subcommand prints ``key: value`` lines, or a JSON mirror with
``--json``.  Exit codes: 0 success, 1 expected-value mismatch, 2 parse
error, 3 mathematical inconsistency, 4 resource cap reached.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .autgrp import (
    DEFAULT_CLOSURE_CAP,
    ClosureCapExceeded,
    GradedMap,
    NotQuadratic,
    classify_reflection,
    group_closure,
    molien,
)
from .cases import CASE_IDS, GroupSpec, load_bundle, load_case, run_pipeline
from .exprparse import ParseError, parse_document, parse_matrix, parse_scalar, structure_from_section
from .invariants import NotClosedUnderBracket, find_generators, induced_bracket_table, make_generator_set
from .linalg import Singular
from .poisson import PoissonStructure, is_unimodular, solve_superpotential, verify_jacobi
from .poly import taylor_coeffs
from .scalar import DEFAULT_MODULUS, DEFAULT_ORDER_BOUND
from .uenv import (
    InfiniteOrder,
    brute_force_env_trace,
    env_invariant_dims,
    hdet_env,
    normal_form,
    parse_word,
    trace_series_env,
    verify_pbw_consistency,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_PARSE = 2
EXIT_MATH = 3
EXIT_CAP = 4


class Report:
    """Ordered ``key: value`` pairs with a text and a JSON rendering."""

    def __init__(self):
        self.items: list[tuple[str, object]] = []

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def emit(self, as_json: bool, out=None) -> None:
        out = out or sys.stdout
        if as_json:
            out.write(json.dumps([{"key": k, "value": v} for k, v in self.items], indent=2) + "\n")
        else:
            for k, v in self.items:
                out.write(f"{k}: {v}\n")


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load_structure(path: str, modulus: int) -> tuple[PoissonStructure, object]:
    doc = parse_document(_read(path))
    sec = doc.find("structure")
    if sec is None:
        raise ParseError(f"{path} has no [structure] section")
    return structure_from_section(sec, modulus), doc


def _params(items: list[str] | None, modulus: int) -> dict:
    env = {}
    for item in items or []:
        name, eq, value = item.partition("=")
        if not eq:
            raise ParseError(f"--param expects name=value, got {item!r}")
        env[name.strip()] = parse_scalar(value, env, modulus)
    return env


def _matrices(args, doc) -> list[tuple[str, object]]:
    """Matrices from the command line, else every ``[matrix]`` and ``[family]`` sample in the file."""
    env = _params(args.param, args.zeta)
    out = []
    for k, src in enumerate(args.matrix or [], 1):
        if src.lstrip().startswith("["):
            out.append((f"m{k}", parse_matrix(src, env, args.zeta)))
        else:
            mdoc = parse_document(_read(src))
            for sec in mdoc.all("matrix"):
                out.append((sec.name or f"m{k}", parse_matrix(sec.require("value"), env, args.zeta)))
    if out:
        return out
    for sec in doc.all("matrix"):
        out.append((sec.name, parse_matrix(sec.require("value"), env, args.zeta)))
    if not out and doc.all("family"):
        bundle = load_bundle(args._text)
        out = [(f.name, f.instantiate()) for f in bundle.families if f.kind != "non-automorphism"]
    if not out:
        raise ParseError("no matrices given")
    return out


def _group(args, doc) -> GroupSpec:
    gdoc = parse_document(_read(args.group_file)) if args.group_file else doc
    sections = gdoc.all("group")
    if args.group:
        sections = [s for s in sections if s.name == args.group]
    if not sections:
        raise ParseError("no matching [group] section")
    text = _read(args.group_file) if args.group_file else args._text
    bundle = load_bundle(text)
    return bundle.group(sections[0].name)


# -- subcommands --------------------------------------------------------------


def cmd_verify(args, rep: Report) -> int:
    P, _ = _load_structure(args.structure, args.zeta)
    rep.add("table", P.render())
    rep.add("quadratic", _bool(P.is_quadratic))
    jac = verify_jacobi(P)
    if not jac:
        rep.add("jacobi", "fail")
        rep.add("witness", f"({', '.join(map(str, jac.witness))})")
        rep.add("value", jac.value.render(P.prefix))
        return EXIT_MATH
    rep.add("jacobi", "pass")
    rep.add("unimodular", _bool(is_unimodular(P)))
    if P.nvars == 3:
        omega = solve_superpotential(P)
        rep.add("omega", omega.render(P.prefix) if omega is not None else "none")
    return EXIT_OK


def cmd_reflections(args, rep: Report) -> int:
    P, doc = _load_structure(args.structure, args.zeta)
    reasons = set()
    found = 0
    for name, m in _matrices(args, doc):
        r = classify_reflection(P, GradedMap(m), args.order_bound)
        rep.add(name, r.summary())
        if r.is_reflection:
            found += 1
        else:
            reasons.add(r.reason)
    if found:
        rep.add("result", f"{found} reflection{'s' if found != 1 else ''}")
    elif len(reasons) == 1:
        rep.add("result", f"no reflections ({reasons.pop()})")
    else:
        rep.add("result", "no reflections")
    return EXIT_OK


def cmd_molien(args, rep: Report) -> int:
    _, doc = _load_structure(args.structure, args.zeta)
    gspec = _group(args, doc)
    G = group_closure(gspec.generators(args.zeta), args.closure_cap)
    rep.add("group", gspec.name)
    rep.add("order", G.order)
    rep.add("molien", molien(G).render())
    return EXIT_OK


def cmd_invariants(args, rep: Report) -> int:
    P, doc = _load_structure(args.structure, args.zeta)
    gspec = _group(args, doc)
    G = group_closure(gspec.generators(args.zeta), args.closure_cap)
    rep.add("group", gspec.name)
    rep.add("order", G.order)
    rep.add("molien", molien(G).render())
    found = find_generators(G, args.dmax)
    rep.add("degrees", ", ".join(map(str, sorted(found.degrees))))
    gens = make_generator_set(gspec.basis(P.nvars)) if gspec.basis_srcs else found
    for k, g in enumerate(gens.gens, 1):
        rep.add(f"y{k}", g.render(P.prefix))
    induced = induced_bracket_table(P, gens)
    rep.add("table", induced.render())
    rep.add("substitution check", _bool(induced.substitution_check()))
    rep.add("unimodular", _bool(is_unimodular(induced.structure)))
    omega = solve_superpotential(induced.structure) if induced.structure.nvars == 3 else None
    rep.add("superpotential", omega.render("y") if omega is not None else "none")
    return EXIT_OK


def cmd_env(args, rep: Report) -> int:
    P, doc = _load_structure(args.structure, args.zeta)
    dmax = args.dmax if args.dmax is not None else 4
    if args.env_command == "nf":
        rep.add("normal form", normal_form(P, parse_word(args.word, P.nvars)).render())
    elif args.env_command == "check":
        res = verify_pbw_consistency(P, dmax)
        rep.add("pbw", "pass" if res else "fail")
        if not res:
            rep.add("witness", " ".join(map(str, res.witness)))
            rep.add("reason", res.reason)
            return EXIT_MATH
        rep.add("normal monomial counts", ", ".join(map(str, res.counts)))
    elif args.env_command == "trace":
        for name, m in _matrices(args, doc):
            series = trace_series_env(m)
            coeffs = taylor_coeffs(series, dmax)
            brute = [brute_force_env_trace(P, m, d) for d in range(dmax + 1)]
            rep.add(f"{name} series", series.render())
            rep.add(f"{name} coefficients", ", ".join(c.render() for c in coeffs))
            rep.add(f"{name} brute force agrees", _bool(coeffs == brute))
            if coeffs != brute:
                return EXIT_MATH
    elif args.env_command == "hdet":
        for name, m in _matrices(args, doc):
            rep.add(f"{name} hdet", hdet_env(m, args.order_bound).render())
    elif args.env_command == "invdims":
        gspec = _group(args, doc)
        G = group_closure(gspec.generators(args.zeta), args.closure_cap)
        rep.add("group", gspec.name)
        rep.add("dims", ", ".join(map(str, env_invariant_dims(P, G, dmax))))
    return EXIT_OK


def cmd_case_report(args, rep: Report) -> int:
    ids = CASE_IDS if args.case == "all" else (int(args.case),)
    code = EXIT_OK
    for k in ids:
        lines = run_pipeline(
            load_case(k),
            dmax=args.dmax if args.dmax is not None else 4,
            order_bound=args.order_bound,
            closure_cap=args.closure_cap,
        )
        for line in lines:
            if args.json:
                rep.add(line.label, line.as_dict())
            else:
                label, _, rest = line.render().partition(": ")
                rep.add(label, rest)
            if line.status == "mismatch":
                code = EXIT_MISMATCH
    return code


# -- argument parsing ---------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--zeta", type=int, default=DEFAULT_MODULUS, metavar="N", help="field modulus Q(zeta_N)")
    common.add_argument("--order-bound", type=int, default=DEFAULT_ORDER_BOUND)
    common.add_argument("--closure-cap", type=int, default=DEFAULT_CLOSURE_CAP)
    common.add_argument("--dmax", type=int, default=None)
    common.add_argument("--json", action="store_true")

    p = argparse.ArgumentParser(prog="poissoninv", description="Invariant theory of graded Poisson algebras.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="Jacobi, unimodularity and superpotential")
    s.add_argument("structure")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("reflections", parents=[common], help="classify matrices as Poisson reflections")
    s.add_argument("structure")
    s.add_argument("matrix", nargs="*", help="matrix literal like [1,0;0,1] or a file of [matrix] sections")
    s.add_argument("--param", action="append", help="bind a symbol, e.g. --param a=2")
    s.set_defaults(func=cmd_reflections)

    for name, func, text in (
        ("molien", cmd_molien, "group order and Molien series"),
        ("invariants", cmd_invariants, "invariant generators and induced bracket"),
    ):
        s = sub.add_parser(name, parents=[common], help=text)
        s.add_argument("structure")
        s.add_argument("group_file", nargs="?", help="file with [group] sections (default: the structure file)")
        s.add_argument("--group", help="name of the [group] section")
        s.set_defaults(func=func)

    e = sub.add_parser("env", help="Poisson enveloping algebra computations")
    esub = e.add_subparsers(dest="env_command", required=True)
    s = esub.add_parser("nf", parents=[common], help="PBW normal form of a word such as 'y2 y1'")
    s.add_argument("structure")
    s.add_argument("word")
    s = esub.add_parser("check", parents=[common], help="PBW consistency up to --dmax")
    s.add_argument("structure")
    for name, text in (("trace", "trace series against brute force"), ("hdet", "homological determinant")):
        s = esub.add_parser(name, parents=[common], help=text)
        s.add_argument("structure")
        s.add_argument("matrix", nargs="*")
        s.add_argument("--param", action="append")
    s = esub.add_parser("invdims", parents=[common], help="dimensions of invariants in U(P)")
    s.add_argument("structure")
    s.add_argument("group_file", nargs="?")
    s.add_argument("--group")
    e.set_defaults(func=cmd_env)

    s = sub.add_parser("case-report", parents=[common], help="run the full pipeline for a bundled case")
    s.add_argument("case", choices=[str(k) for k in CASE_IDS] + ["all"])
    s.set_defaults(func=cmd_case_report)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    args = build_parser().parse_args(argv)
    for attr in ("matrix", "param", "group", "group_file"):
        if not hasattr(args, attr):
            setattr(args, attr, None)
    rep = Report()
    try:
        if getattr(args, "structure", None):
            args._text = _read(args.structure)
        code = args.func(args, rep)
    except ParseError as exc:
        rep.emit(args.json, out)
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ClosureCapExceeded as exc:
        rep.emit(args.json, out)
        print(f"closure cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (NotQuadratic, NotClosedUnderBracket, InfiniteOrder, Singular) as exc:
        rep.emit(args.json, out)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    rep.emit(args.json, out)
    return code


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
