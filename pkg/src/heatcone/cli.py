"""Command-line interface.

Output is deterministic: the same flags always produce the same bytes.
JSON floats use the shortest round-trip form, text floats 17 significant
digits.  Exit status is 2 for bad arguments and 1 when a verify check fails.

CSV columns
  spectrum  lambda,multiplicity
  coeffs    j,value,num,den,pi_half
"""
from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import sys
from fractions import Fraction
from typing import Any, Optional, Sequence

from .crosssection import (
    Circle,
    CrossSection,
    FlatTorus,
    Lens,
    RealProjective,
    SpaceForm,
    Sphere,
    parse_number,
)
from .curvpoly import build, roots
from .exact import ExactScalar
from .heat_coeffs import heat_coeffs_for
from .oracle import spectrum
from .singular import singular_terms
from .verify import SUITES, Check, Report, run_suite
from .zeta import (
    ResidueConvention,
    combo_float,
    combo_residue,
    combo_value,
    shifted_zeta_circle,
    shifted_zeta_projective,
    shifted_zeta_sphere,
    NonExactPoint,
    PoleHit,
)

FAMILIES = ("circle", "sphere", "space-form", "lens", "rpn", "torus")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# rendering


def render_text(v: Any) -> str:
    if isinstance(v, ExactScalar):
        if v.pi_half == 0:
            return str(v.rational)
        k = v.pi_half
        p = f"π^{k // 2}" if k % 2 == 0 else f"π^{{{k}/2}}"
        return p if v.rational == 1 else f"{v.rational}·{p}"
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(render_text(x) for x in v) + "]"
    return str(v)


def to_jsonable(v: Any) -> Any:
    if isinstance(v, ExactScalar):
        return v.to_json()
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [to_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {k: to_jsonable(x) for k, x in v.items()}
    if isinstance(v, enum.Enum):
        return v.value
    return v


def dump_json(doc: Any) -> str:
    return json.dumps(to_jsonable(doc), indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# cross-section options


def _add_cs_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--cross-section", choices=FAMILIES, required=required)
    p.add_argument("--n", type=int, help="dimension of the cross-section")
    p.add_argument("--k", type=int, help="lens space order")
    p.add_argument("--sin-alpha", help="sine of the cone angle (rational like 1/2, or a decimal)")
    p.add_argument("--kappa", default="1", help="constant curvature of a sphere (rational)")
    p.add_argument("--radius", help="radius of a round sphere (rational); overrides --kappa")
    p.add_argument("--vol-ratio", help="volume relative to the unit sphere (rational)")
    p.add_argument("--volume", default="1", help="torus volume")


def _need(args, name: str):
    v = getattr(args, name.replace("-", "_"))
    if v is None:
        raise UsageError(f"--{name} is required for --cross-section {args.cross_section}")
    return v


def _cross_section(args) -> CrossSection:
    fam = args.cross_section
    try:
        if fam == "circle":
            return Circle(parse_number(_need(args, "sin-alpha")))
        if fam == "sphere":
            n = _need(args, "n")
            if args.radius is not None:
                return Sphere.with_radius(n, Fraction(args.radius))
            kappa = Fraction(args.kappa)
            ratio = Fraction(args.vol_ratio) if args.vol_ratio is not None else Fraction(1)
            return Sphere(n, kappa, ratio)
        if fam == "space-form":
            return SpaceForm(_need(args, "n"), Fraction(_need(args, "vol-ratio")))
        if fam == "lens":
            return Lens(_need(args, "k"))
        if fam == "rpn":
            return RealProjective(_need(args, "n"))
        if fam == "torus":
            return FlatTorus(_need(args, "n"), parse_number(args.volume))
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(str(e)) from e
    raise UsageError(f"unknown cross-section {fam}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_coeffs(args, out) -> int:
    cs = _cross_section(args)
    a = heat_coeffs_for(cs, args.max_j)
    if args.format == "json":
        out.write(dump_json({"n": a.n, "coeffs": list(a.values)}))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "value", "num", "den", "pi_half"])
        for j, v in enumerate(a.values):
            if isinstance(v, ExactScalar):
                w.writerow([j, repr(v.to_float()), v.numerator, v.denominator, v.pi_half])
            else:
                w.writerow([j, repr(v), "", "", ""])
        out.write(buf.getvalue())
    else:
        for j, v in enumerate(a.values):
            out.write(f"a_{j} = {render_text(v)}\n")
    return 0


def _cmd_terms(args, out) -> int:
    cs = _cross_section(args)
    try:
        st = singular_terms(cs, args.m)
    except ValueError as e:
        raise UsageError(str(e)) from e
    if args.format == "text":
        b = "unavailable" if st.b.value is None else render_text(st.b.value)
        out.write(f"m = {st.m}\nc = {render_text(st.c.value)} ({st.c.provenance.value})\n")
        out.write(f"b = {b} ({st.b.provenance.value})\nverdict = {st.verdict.value}\n")
    else:
        out.write(dump_json(st.to_json()))
    return 0


def _cmd_poly(args, out) -> int:
    try:
        p = build(args.n, Fraction(args.vol_ratio))
    except ValueError as e:
        raise UsageError(str(e)) from e
    doc = p.to_json(with_roots=args.roots)
    if args.format == "text":
        out.write(f"n = {p.n}\ncoeffs = [{', '.join(doc['coeffs'])}]\n")
        out.write(f"primitive = [{', '.join(str(c) for c in p.primitive)}]\n")
        if args.roots:
            for r in roots(p):
                ex = ""
                if r.exact is not None:
                    pp, q, d, rr = r.exact
                    ex = f" = {Fraction(pp, rr)}" if q == 0 else f" = ({pp} {'+' if q > 0 else '-'} {abs(q)}√{d})/{rr}"
                out.write(f"root {render_text(r.value)}{ex} (multiplicity {r.mult})\n")
    else:
        out.write(dump_json(doc))
    return 0


def _combo_for_args(args):
    fam = args.cross_section
    try:
        if fam == "circle":
            return shifted_zeta_circle(parse_number(_need(args, "sin-alpha")))
        if fam == "sphere":
            return shifted_zeta_sphere(_need(args, "n"))
        if fam == "rpn":
            return shifted_zeta_projective(_need(args, "n"))
    except ValueError as e:
        raise UsageError(str(e)) from e
    raise UsageError(f"no zeta combination for --cross-section {fam}")


def _cmd_zeta(args, out) -> int:
    f = _combo_for_args(args)
    doc: dict = {"combo": f.to_json()}
    if args.s is not None:
        s = parse_number(args.s)
        try:
            doc["value"] = combo_value(f, s)
        except NonExactPoint:
            doc["value"] = combo_float(f, float(s))
        except PoleHit as e:
            raise UsageError(str(e)) from e
    if args.residue is not None:
        conv = ResidueConvention.S_VARIABLE if args.convention == "s" else ResidueConvention.ZETA_ARGUMENT
        try:
            doc["residue"] = combo_residue(f, Fraction(args.residue), conv)
        except ValueError as e:
            raise UsageError(str(e)) from e
        doc["convention"] = conv.name
    if args.format == "text":
        for t in f.terms:
            out.write(f"term coeff={render_text(t.coeff)} beta={t.beta} i={t.i}\n")
        for key in ("value", "residue"):
            if key in doc:
                out.write(f"{key} = {render_text(doc[key])}\n")
    else:
        out.write(dump_json(doc))
    return 0


def _cmd_spectrum(args, out) -> int:
    cs = _cross_section(args)
    try:
        sp = spectrum(cs, args.cutoff)
    except (TypeError, ValueError) as e:
        raise UsageError(str(e)) from e
    if args.format == "json":
        out.write(dump_json({"cutoff": sp.cutoff, "entries": [list(e) for e in sp.entries]}))
    elif args.format == "text":
        for lam, mu in sp.entries:
            out.write(f"{render_text(lam)} {mu}\n")
    else:
        out.write(sp.to_csv())
    return 0


def _check_doc(c: Check) -> dict:
    return {
        "name": c.name,
        "anchor": c.anchor,
        "criterion": c.criterion,
        "expected": c.expected,
        "got": c.got,
        "tolerance": c.tolerance,
        "pass": c.passed,
        "note": c.note,
    }


def report_doc(rep: Report) -> dict:
    doc = {
        "suite": rep.suite,
        "passed": sum(c.passed for c in rep.checks),
        "failed": sum(not c.passed for c in rep.checks),
        "checks": [_check_doc(c) for c in rep.checks],
    }
    if rep.torus is not None:
        doc["torus_report"] = rep.torus
    return doc


def _cmd_verify(args, out) -> int:
    rep = run_suite(args.suite)
    doc = report_doc(rep)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(dump_json(doc))
    if args.format == "text":
        for c in rep.checks:
            out.write(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  [{c.anchor}]\n")
        out.write(f"{doc['passed']} passed, {doc['failed']} failed\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "anchor", "criterion", "pass"])
        for c in rep.checks:
            w.writerow([c.name, c.anchor, "" if c.criterion is None else c.criterion, int(c.passed)])
        out.write(buf.getvalue())
    else:
        out.write(dump_json(doc))
    return 0 if rep.ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heatcone",
        description="Singular heat-trace terms of cones over closed cross-sections.",
        epilog="HEATCONE_PRECISION=double|extended selects the oracle float tier.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def fmt(p, default="json", choices=("json", "csv", "text")):
        p.add_argument("--format", choices=choices, default=default)

    p = sub.add_parser("coeffs", help="heat coefficients a_0..a_J (CSV: j,value,num,den,pi_half)")
    _add_cs_args(p)
    p.add_argument("--max-j", type=int, default=3)
    fmt(p)
    p.set_defaults(func=_cmd_coeffs)

    p = sub.add_parser("terms", help="log term c, constant term b and verdict")
    _add_cs_args(p)
    p.add_argument("--m", type=int, help="cone dimension (default: dim N + 1)")
    fmt(p, choices=("json", "text"))
    p.set_defaults(func=_cmd_terms)

    p = sub.add_parser("poly", help="log term as a polynomial in the curvature")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--vol-ratio", default="1")
    p.add_argument("--roots", action="store_true")
    fmt(p, choices=("json", "text"))
    p.set_defaults(func=_cmd_poly)

    p = sub.add_parser("zeta", help="shifted zeta combination, values and residues")
    _add_cs_args(p)
    p.add_argument("--s", help="evaluation point")
    p.add_argument("--residue", help="pole at which to take the residue")
    p.add_argument("--convention", choices=("s", "zeta"), default="s")
    fmt(p, choices=("json", "text"))
    p.set_defaults(func=_cmd_zeta)

    p = sub.add_parser("spectrum", help="eigenvalues up to a cutoff (CSV: lambda,multiplicity)")
    _add_cs_args(p)
    p.add_argument("--cutoff", type=float, required=True)
    fmt(p, default="csv")
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("verify", help="run the self-check suite")
    p.add_argument("--suite", choices=sorted(SUITES), default="all")
    p.add_argument("--report", help="also write the JSON report to this path")
    fmt(p)
    p.set_defaults(func=_cmd_verify)
    return ap


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"heatcone: error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
