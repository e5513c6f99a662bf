"""Command-line interface.

Exit codes: 0 success/true, 1 check failed, 2 usage error, 3 parse error,
4 math-domain error.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import kernelsearch as ks
from .algebra import Polynomial, RationalFunction, VarSet, parse_polynomial, parse_value
from .algebra.parser import parse_expression
from .curves import (
    GL3_FIELDS,
    canonical_case,
    curve_specialization,
    euler_weight,
    gl3_derivations,
    weitzenbock,
)
from .derivations import Derivation, in_kernel
from .errors import MathDomainError, ParseError
from .invariants import (
    HyperCurve,
    ModuliVector,
    curve_from_moduli,
    isomorphic,
    j_invariant_c3,
    moduli_vector,
    normalize,
    z_invariant,
)
from .transform import FAMILIES, check_invariance

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_PARSE, EXIT_DOMAIN = 0, 1, 2, 3, 4

TERNARY_CASES = ("i", "ii", "cprime", "cprime-g0", "full")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


# -- helpers --------------------------------------------------------------------------


def _load_json(text: str):
    """Inline JSON, or the contents of a file holding JSON."""
    path = Path(text)
    if not text.lstrip().startswith(("{", "[")) and path.is_file():
        text = path.read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None


def resolve_derivation(name: str, d: int | None = None, case: str | None = None) -> Derivation:
    """D{d}/E{d}/H{d} on a0..ad; D1..E3 and DH1..DH3 on ternary forms when --d is given."""
    if name in GL3_FIELDS and d is not None:
        D = gl3_derivations(d)[name]
        return curve_specialization(d, case).apply(D) if case else D
    m = re.fullmatch(r"([DEH])(\d+)", name)
    if m:
        k = int(m.group(2))
        if d is not None and k != d:
            raise UsageError(f"{name} acts on degree {k} but --d {d} was given")
        D = weitzenbock(k) if m.group(1) == "D" else euler_weight(k)
        return D if m.group(1) != "H" else D.renamed(name)
    path = Path(name)
    if path.is_file():
        return Derivation.from_json(_load_json(name))
    if name in GL3_FIELDS:
        raise UsageError(f"ternary derivation {name} needs --d")
    raise UsageError(f"unknown derivation {name!r}")


def _resolve_all(names: str, d: int | None, case: str | None) -> list[Derivation]:
    Ds = [resolve_derivation(n.strip(), d, case) for n in names.split(",") if n.strip()]
    if not Ds:
        raise UsageError("no derivations given")
    if any(D.varset.names != Ds[0].varset.names for D in Ds):
        raise UsageError("derivations act on different coefficient spaces")
    return Ds


def _value_text(v) -> str:
    if isinstance(v, RationalFunction):
        return str(v.normalized())
    return str(v)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _report_text(report: ks.KernelReport) -> str:
    lines = [f"basis ({len(report.basis)}):"]
    lines += [f"  {p}" for p in report.basis]
    lines += [f"{name}: {'in kernel' if ok else 'NOT in kernel'}" for name, ok in report.in_kernel.items()]
    rank = f"{report.jacobian_rank}" + ("" if report.rank_certain else " (symbolic rank unknown)")
    lines.append(f"jacobian rank: {rank}")
    lines.append(f"bound: {report.bound}")
    for e in report.errata:
        lines.append(f"erratum {e.name}: fails {','.join(e.failing)}; oracle invariant: {e.oracle_invariant}")
        lines.append(f"  corrected: {e.corrected}")
    return "\n".join(lines)


# -- commands -------------------------------------------------------------------------


def cmd_invariants(args) -> int:
    if args.what == "z":
        if args.d is None:
            raise UsageError("invariants z needs --d")
        if args.i is not None:
            z = z_invariant(args.d, args.i)
            _emit(args, {"d": args.d, "i": args.i, "z": str(z)}, str(z))
        else:
            zs = {f"z{i}": str(z_invariant(args.d, i)) for i in range(2, args.d + 1)}
            _emit(args, {"d": args.d, "z": zs}, "\n".join(f"{k} = {v}" for k, v in zs.items()))
    elif args.what == "field":
        if args.d is None:
            raise UsageError("invariants field needs --d")
        if args.d < 2:
            raise MathDomainError("the invariant field is only generated for d >= 2")
        d = args.d
        gens = [f"({z_invariant(d, i)})^{d} / (a0^{i * (d - 1)})" for i in range(2, d + 1)]
        _emit(args, {"d": d, "generators": gens}, "\n".join(gens))
    else:
        j = j_invariant_c3()
        _emit(args, {"j": str(j)}, str(j))
    return EXIT_OK


def cmd_derive(args) -> int:
    D = resolve_derivation(args.derivation, args.d, args.case)
    value = parse_value(args.poly, D.varset)
    out = D(value if isinstance(value, (Polynomial, RationalFunction)) else D.varset.const(value))
    _emit(args, {"derivation": D.name, "result": _value_text(out)}, _value_text(out))
    return EXIT_OK


def cmd_check(args) -> int:
    if args.what == "kernel":
        if not args.derivations:
            raise UsageError("check kernel needs --derivations")
        Ds = _resolve_all(args.derivations, args.d, args.case)
        value = parse_value(args.poly, Ds[0].varset)
        if not isinstance(value, (Polynomial, RationalFunction)):
            value = Ds[0].varset.const(value)
        flags = {D.name or f"D{k}": in_kernel([D], value) for k, D in enumerate(Ds)}
        ok = all(flags.values())
        _emit(args, {"in_kernel": ok, "per_derivation": flags}, "true" if ok else "false")
        return EXIT_OK if ok else EXIT_FALSE
    if args.family is None or args.d is None:
        raise UsageError("check invariance needs --family and --d")
    if args.family not in FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; expected one of {', '.join(FAMILIES)}")
    ok = check_invariance(parse_expression(args.poly), args.family, args.d)
    _emit(args, {"invariant": ok, "family": args.family}, "true" if ok else "false")
    return EXIT_OK if ok else EXIT_FALSE


def _read_generators(source: str, varset: VarSet) -> tuple[list[str], list[Polynomial]]:
    """JSON list / {name: poly} map, or text lines 'poly' or 'name: poly'."""
    path = Path(source)
    text = path.read_text() if path.is_file() else source
    stripped = text.strip()
    if stripped.startswith(("[", "{")):
        data = _load_json(stripped)
        items = list(data.items()) if isinstance(data, dict) else [(None, t) for t in data]
    else:
        items = []
        for line in stripped.splitlines():
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            name, sep, body = line.partition(":")
            items.append((name.strip(), body) if sep else (None, line))
    names = [n if n else f"g{k + 1}" for k, (n, _) in enumerate(items)]
    return names, [parse_polynomial(str(t), varset) for _, t in items]


def cmd_kernel(args) -> int:
    if args.d is None or args.case is None:
        raise UsageError(f"kernel {args.what} needs --d and --case")
    seed = args.seed
    if args.what == "search":
        if args.degree is None:
            raise UsageError("kernel search needs --degree")
        report = ks.search_case(args.d, args.case, args.degree, args.weight, args.cumulative or None, seed=seed)
        _emit(args, report.to_json(), _report_text(report))
        return EXIT_OK
    if args.gens is None:
        raise UsageError("kernel verify needs --gens")
    ctx = ks.case_context(args.d, args.case)
    names, gens = _read_generators(args.gens, ctx.varset)
    report = ks.verify_case(gens, args.d, args.case, names=names, seed=seed)
    _emit(args, report.to_json(), _report_text(report))
    return EXIT_OK if report.all_in_kernel and not report.exceeds_bound else EXIT_FALSE


def _curve(text: str | None, flag: str) -> HyperCurve:
    if text is None:
        raise UsageError(f"missing {flag}")
    try:
        return HyperCurve.from_json(_load_json(text))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed curve payload: {exc}") from None


def cmd_curve(args) -> int:
    if args.what == "moduli":
        m = moduli_vector(_curve(args.curve, "--curve"))
        _emit(args, m.to_json(), " ".join(str(v) for v in m.values))
    elif args.what == "from-moduli":
        if args.moduli is None:
            raise UsageError("missing --moduli")
        try:
            m = ModuliVector.from_json(_load_json(args.moduli))
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed moduli payload: {exc}") from None
        c = curve_from_moduli(m)
        _emit(args, c.to_json(), " ".join(str(v) for v in c.coeffs))
    elif args.what == "normalize":
        c, b = normalize(_curve(args.curve, "--curve"))
        _emit(args, {"curve": c.to_json(), "shift": str(b)}, f"{' '.join(str(v) for v in c.coeffs)}\nshift {b}")
    else:
        c1, c2 = _curve(args.curve, "--curve"), _curve(args.other, "--other")
        b = isomorphic(c1, c2)
        _emit(args, {"isomorphic": b is not None, "shift": None if b is None else str(b)},
              "false" if b is None else f"true\nshift {b}")
        return EXIT_OK if b is not None else EXIT_FALSE
    return EXIT_OK


def cmd_gl3(args) -> int:
    if args.d is None:
        raise UsageError("gl3 derivations needs --d")
    if args.case:
        Ds = {D.name: D for D in ks.case_context(args.d, args.case).derivations}
    else:
        Ds = gl3_derivations(args.d)
    payload = {name: D.to_json() for name, D in Ds.items()}
    text = "\n".join(
        f"{name}: " + (", ".join(f"{v} -> {img}" for v, img in D.images.items()) or "0") for name, D in Ds.items()
    )
    _emit(args, payload, text)
    return EXIT_OK


# -- entry point ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # --format is accepted before or after the subcommand; SUPPRESS keeps the
    # subparser from overwriting a value given at the top level
    fmt = _Parser(add_help=False)
    fmt.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    p = _Parser(prog="derivkernel", description="Exact derivation kernels and curve invariants.")
    p.add_argument("--format", choices=("text", "json"), default="text")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    inv = sub.add_parser("invariants", parents=[fmt], help="closed-form invariants")
    inv.add_argument("what", choices=("z", "field", "j3"))
    inv.add_argument("--d", type=int)
    inv.add_argument("--i", type=int)
    inv.set_defaults(func=cmd_invariants)

    der = sub.add_parser("derive", parents=[fmt], help="apply a derivation")
    der.add_argument("what", choices=("apply",))
    der.add_argument("--derivation", required=True)
    der.add_argument("--poly", required=True)
    der.add_argument("--d", type=int)
    der.add_argument("--case", type=canonical_case)
    der.set_defaults(func=cmd_derive)

    chk = sub.add_parser("check", parents=[fmt], help="kernel membership or group invariance")
    chk.add_argument("what", choices=("kernel", "invariance"))
    chk.add_argument("--derivations")
    chk.add_argument("--poly", required=True)
    chk.add_argument("--family")
    chk.add_argument("--d", type=int)
    chk.add_argument("--case", type=canonical_case)
    chk.set_defaults(func=cmd_check)

    ker = sub.add_parser("kernel", parents=[fmt], help="ansatz kernel search and generator audits")
    ker.add_argument("what", choices=("search", "verify"))
    ker.add_argument("--d", type=int)
    ker.add_argument("--case", choices=TERNARY_CASES + tuple(ks.HYPER_CASES) + tuple(
        ["general_i", "general_ii", "cprime_full", "cprime_g0", "cprime_translations"]))
    ker.add_argument("--degree", type=int)
    ker.add_argument("--weight", type=int)
    ker.add_argument("--cumulative", action="store_true", help="search all degrees 1..B")
    ker.add_argument("--gens")
    ker.add_argument("--seed", type=int, help="Jacobian evaluation seed (default: DERIVKERNEL_SEED or 314159)")
    ker.set_defaults(func=cmd_kernel)

    cur = sub.add_parser("curve", parents=[fmt], help="moduli of monic y^2 = f(x)")
    cur.add_argument("what", choices=("moduli", "from-moduli", "normalize", "isomorphic"))
    cur.add_argument("--curve", help='JSON {"d": D, "coeffs": [...]} or a file holding it')
    cur.add_argument("--other", help="second curve for 'isomorphic'")
    cur.add_argument("--moduli", help='JSON {"d": D, "j": [...]} or a file holding it')
    cur.set_defaults(func=cmd_curve)

    gl = sub.add_parser("gl3", parents=[fmt], help="induced gl3 derivations on ternary forms")
    gl.add_argument("what", choices=("derivations",))
    gl.add_argument("--d", type=int)
    gl.add_argument("--case", type=canonical_case)
    gl.set_defaults(func=cmd_gl3)
    return p


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (MathDomainError, ZeroDivisionError) as exc:
        print(f"math error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, KeyError) as exc:
        # bad case names, variable mismatches and similar input problems
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
