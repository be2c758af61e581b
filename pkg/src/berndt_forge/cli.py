"""Command line front end: ``berndt-forge <command> [args] [flags]``.

Exit codes: 0 pass, 1 verification failure, 2 usage, 3 construction error,
4 internal error, 5 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import factorial

import mpmath
from mpmath import mp

from . import __version__, barnes, closedform, hyperseries, jacobi_maclaurin, quadrature, verification
from .errors import BerndtForgeError

SCHEMA = "berndt-forge/1"

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUILD, EXIT_INTERNAL, EXIT_IO = range(6)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(v):
        return argparse.SUPPRESS if suppress else v

    parser.add_argument("--prec-bits", type=int, default=default(256), help="working precision in bits")
    parser.add_argument("--format", choices=("text", "json", "latex"), default=default("text"))
    parser.add_argument("--seed", type=int, default=default(0), help="seed for random parameter draws")
    parser.add_argument("--tolerance-digits", type=int, default=default(40))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="berndt-forge", description="Berndt-type integrals, hyperbolic series and Barnes zeta values.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("coeffs", parents=[common], help="print a coefficient table")
    p.add_argument("family", help="S, A, P, Q or R")
    p.add_argument("max_index", type=int)

    p = sub.add_parser("series", parents=[common], help="evaluate a hyperbolic series")
    p.add_argument("family", choices=hyperseries.FAMILIES)
    p.add_argument("p", type=int)
    p.add_argument("m", type=int)
    p.add_argument("y", help="positive real, or 'pi'")

    p = sub.add_parser("closed-form", parents=[common], help="exact closed form")
    p.add_argument("kind", choices=("G2", "Gprime2", "Gbar1", "cosh3", "berndt", "zeta4"))
    p.add_argument("m", type=int)

    p = sub.add_parser("integral", parents=[common], help="quadrature of the Berndt integral")
    p.add_argument("p", type=int)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=tuple(verification.SUITES) + ("all",))
    p.add_argument("--out", help="write the JSON report here as well")
    p.add_argument("--timing", action="store_true", help="record wall time (breaks byte-identical reports)")

    p = sub.add_parser("barnes", parents=[common], help="zeta_4(4m, 3 | c4; sigma4)")
    p.add_argument("m", type=int)
    p.add_argument("--route", choices=("integral", "lattice", "closed-form"), default="integral")

    p = sub.add_parser("report", parents=[common], help="write the example report")
    p.add_argument("out_path")
    return parser


def _y(text: str):
    if text == "pi":
        return mp.pi
    try:
        return mpmath.mpf(text)
    except (ValueError, TypeError):
        raise UsageError(f"not a number: {text!r}") from None


def _decimal(v, digits: int) -> str:
    if isinstance(v, mpmath.mpc):
        return f"{mpmath.nstr(v.real, digits)} + {mpmath.nstr(v.imag, digits)}i"
    return mpmath.nstr(v, digits)


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA, **payload}, indent=2))
    else:
        print(text)


def _digits(args) -> int:
    return max(15, int(args.prec_bits * 0.30103) - 3)


# -- commands ------------------------------------------------------------------------


def cmd_coeffs(args) -> int:
    fam = args.family.upper()
    n = args.max_index
    if fam not in ("S", "A", "P", "Q", "R"):
        raise UsageError(f"unknown family {args.family!r}")
    if fam == "S":
        tab = jacobi_maclaurin.table_S(n)
    elif fam == "A":
        tab = jacobi_maclaurin.table_A(n)
    elif fam == "P":
        tab = jacobi_maclaurin.table_P(n)
    elif fam == "Q":
        tab = jacobi_maclaurin.table_Q(n)
    else:
        tab = jacobi_maclaurin.table_R_family(n)
    if args.format == "json":
        print(json.dumps({"schema": SCHEMA, **jacobi_maclaurin.table_to_dict(tab)}, indent=2))
    elif args.format == "latex":
        for k, poly in sorted(tab.entries.items()):
            print(f"{fam}_{{{k}}}(x) = {poly.to_latex()}")
    else:
        for k, poly in sorted(tab.entries.items()):
            print(f"{fam}_{k} = {poly.to_text()}")
    return EXIT_PASS


def cmd_series(args) -> int:
    spec = hyperseries.SeriesSpec(args.family, args.p, args.m, _y(args.y))
    val = hyperseries.eval_series(spec, args.prec_bits)
    d = _digits(args)
    _emit(args, {"family": args.family, "p": args.p, "m": args.m, "y": args.y, "value": _decimal(val, d)},
          f"{args.family}_{{{args.p},{args.m}}}({args.y}) = {_decimal(val, d)}")
    return EXIT_PASS


def _closed_form(kind: str, m: int) -> closedform.ClosedForm:
    if kind in ("G2", "Gprime2", "Gbar1"):
        return closedform.closed_form_at_pi(kind, m)
    if kind == "cosh3":
        return closedform.closed_form_cosh3(m)
    if kind == "berndt":
        return closedform.berndt_closed_form(m)
    return barnes.zeta4_closed_form(m)


def cmd_closed_form(args) -> int:
    form = _closed_form(args.kind, args.m)
    val = closedform.cf_eval(form, args.prec_bits)
    d = _digits(args)
    if args.format == "json":
        _emit(args, {"kind": args.kind, "m": args.m, "terms": form.to_dicts(), "value": _decimal(val, d)}, "")
    elif args.format == "latex":
        print(form.to_latex())
    else:
        print(form.to_text())
        print(f"= {_decimal(val, d)}")
    return EXIT_PASS


def cmd_integral(args) -> int:
    val = quadrature.berndt_integral(args.p, args.prec_bits)
    d = _digits(args)
    payload = {"p": args.p, "value": _decimal(val, d)}
    text = f"int_0^inf x^{args.p} dx / [(cosh 2x - cos 2x)(cosh x + cos x)] = {_decimal(val, d)}"
    if args.p % 4 == 3:
        form = closedform.berndt_closed_form((args.p + 1) // 4)
        ref = closedform.cf_eval(form, args.prec_bits)
        with mp.workprec(args.prec_bits):
            rel = abs(val - ref) / abs(ref)
        payload["closed_form"] = form.to_dicts()
        payload["rel_residual"] = _decimal(rel, 5)
        text += f"\nclosed form: {form.to_text()}\nrelative residual: {_decimal(rel, 5)}"
    _emit(args, payload, text)
    return EXIT_PASS


def _report_dict(items, args, elapsed_ms: int | None) -> dict:
    return {
        "schema": SCHEMA,
        "precision_bits": args.prec_bits,
        "seed": args.seed,
        "wall_time_ms": elapsed_ms if elapsed_ms is not None else 0,
        "items": [i.to_dict() for i in items],
    }


def cmd_verify(args) -> int:
    if args.prec_bits < 128:
        raise UsageError("verify needs --prec-bits >= 128")
    start = time.perf_counter()
    items = verification.run_suite(args.suite, args.prec_bits, args.seed, args.tolerance_digits)
    elapsed = int((time.perf_counter() - start) * 1000)
    report = _report_dict(items, args, elapsed if args.timing else None)
    text = json.dumps(report, indent=2)
    if args.out:
        _write(args.out, text + "\n")
    if args.format == "json":
        print(text)
    else:
        for it in items:
            params = ", ".join(f"{k}={v}" for k, v in it.parameters.items())
            print(f"{it.status.upper():4}  {it.identity_id}({params})  rel={it.to_dict()['rel_residual']}")
        n_fail = sum(i.status == "fail" for i in items)
        print(f"{len(items) - n_fail}/{len(items)} passed in {elapsed} ms")
    return EXIT_PASS if all(i.status != "fail" for i in items) else EXIT_FAIL


def cmd_barnes(args) -> int:
    spec = barnes.berndt_spec(args.m)
    d = _digits(args)
    if args.route == "closed-form":
        form = barnes.zeta4_closed_form(args.m)
        val = closedform.cf_eval(form, args.prec_bits)
    elif args.route == "lattice":
        val = barnes.barnes_lattice(spec, args.prec_bits)
    else:
        val = barnes.barnes_integral(spec, args.prec_bits)
    _emit(args, {"m": args.m, "s": spec.s, "route": args.route, "value": _decimal(val, d)},
          f"zeta_4({spec.s}, 3 | c4; sigma4) [{args.route}] = {_decimal(val, d)}")
    return EXIT_PASS


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(str(exc)) from exc


class _IOFailure(Exception):
    pass


def build_report(prec: int) -> dict:
    """Every printed example block with its derived form, 50-digit value and status."""
    entries = []

    def add(name, derived, printed, value=None, note=""):
        val = closedform.cf_eval(derived, prec) if value is None else value
        entries.append({
            "example": name,
            "closed_form": derived.to_dicts(),
            "latex": derived.to_latex(),
            "value": mpmath.nstr(val, 50),
            "printed_matches": derived == printed if printed is not None else None,
            "note": note,
        })

    for fam in ("G2", "Gprime2", "Gbar1"):
        add(f"series_at_pi.{fam}.m1", closedform.closed_form_at_pi(fam, 1), verification.PRINTED_AT_PI[fam])
    for m in (1, 2, 3, 4):
        note = ""
        if m == 2:
            res = verification.gamma_exponent_resolution(prec)
            note = (f"printed last term has Gamma^11; quadrature relative error {mpmath.nstr(res['rel_error_gamma11'], 5)} "
                    f"with Gamma^11 and {mpmath.nstr(res['rel_error_gamma12'], 5)} with Gamma^12; "
                    f"resolved exponent {res['resolved_exponent']}")
        add(f"integral.m{m}", closedform.berndt_closed_form(m), verification.PRINTED_INTEGRALS[m], note=note)
    for m in (1, 2):
        val = barnes.barnes_integral(barnes.berndt_spec(m), prec)
        q = quadrature.berndt_integral(4 * m - 1, prec)
        with mp.workprec(prec):
            ratio = q / (factorial(4 * m - 1) * val.real)
        add(f"zeta4.m{m}", barnes.zeta4_closed_form(m), verification.PRINTED_ZETA4[m], value=val.real,
            note=f"integral / (Gamma(4m) zeta_4) = {mpmath.nstr(ratio, 30)}; the factor 4 is confirmed")
    return {"schema": SCHEMA, "precision_bits": prec, "examples": entries}


def _report_latex(rep: dict) -> str:
    lines = [r"\begin{align*}"]
    for e in rep["examples"]:
        status = "matches print" if e["printed_matches"] else "differs from print"
        lines.append(rf"&\text{{{e['example']}}}: && {e['latex']} \approx {e['value'][:30]} && \text{{{status}}}\\")
    lines.append(r"\end{align*}")
    for e in rep["examples"]:
        if e["note"]:
            lines.append(f"% {e['example']}: {e['note']}")
    return "\n".join(lines) + "\n"


def cmd_report(args) -> int:
    rep = build_report(args.prec_bits)
    if args.format == "latex":
        text = _report_latex(rep)
    else:
        text = json.dumps(rep, indent=2) + "\n"
    _write(args.out_path, text)
    print(f"wrote {args.out_path}")
    return EXIT_PASS


COMMANDS = {
    "coeffs": cmd_coeffs,
    "series": cmd_series,
    "closed-form": cmd_closed_form,
    "integral": cmd_integral,
    "verify": cmd_verify,
    "barnes": cmd_barnes,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"berndt-forge: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _IOFailure as exc:
        print(f"berndt-forge: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except BerndtForgeError as exc:
        print(f"berndt-forge: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_BUILD
    except Exception as exc:  # noqa: BLE001
        print(f"berndt-forge: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
