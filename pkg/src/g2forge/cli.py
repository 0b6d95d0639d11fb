"""Command-line front end.  Exit codes: 0 success, 1 verification failure, 2 usage or parse error."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import catalog as cat
from . import conformal
from .exterior import AltForm, render
from .g2 import NotG2Error, analyze, classify, lee_form, torsion_forms
from .liealg import JacobiError, NotADerivation, rank_one_extension
from .notation import ParseError, parse_form, parse_structure_tuple, render_tuple
from .scalars import FLOAT_TOL

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "status"],
    "properties": {
        "command": {"type": "string"},
        "status": {"enum": ["ok", "failed", "error"]},
        "result": {"type": "object"},
        "certificates": {"type": "array", "items": cat.CERTIFICATE_SCHEMA},
        "error": {
            "type": "object",
            "required": ["message"],
            "properties": {
                "message": {"type": "string"},
                "line": {"type": "integer"},
                "col": {"type": "integer"},
            },
        },
    },
}


class UsageError(Exception):
    pass


def _fmt(x):
    if isinstance(x, AltForm):
        return render(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, (list, tuple)):
        return [_fmt(v) for v in x]
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    return x


def parse_derivation(text: str, dim: int) -> list[list]:
    text = text.strip()
    if text.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
        flat = [x for row in data for x in row] if data and isinstance(data[0], list) else data
        entries = [str(x) for x in flat]
    else:
        entries = [s.strip() for s in text.split(",")]
    if len(entries) != dim * dim:
        raise ParseError(f"derivation needs {dim * dim} entries, got {len(entries)}", 1, 1)
    vals = []
    col = 1
    for s in entries:
        try:
            vals.append(Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {s!r}", 1, col) from None
        col += len(s) + 1
    return [vals[i * dim:(i + 1) * dim] for i in range(dim)]


def _algebra_phi_theta(args):
    ent = None
    if getattr(args, "catalog", None):
        ent = cat.get(args.catalog)
        g = ent.algebra
    elif getattr(args, "algebra", None):
        g = parse_structure_tuple(args.algebra)
    else:
        raise UsageError("one of --algebra or --catalog is required")
    phi = None
    if getattr(args, "phi", None):
        phi = parse_form(args.phi, g.dim, 3)
    elif ent is not None and ent.phi is not None:
        phi = ent.phi
    theta = None
    if getattr(args, "theta", None):
        theta = parse_form(args.theta, g.dim, 1)
    return g, phi, theta, ent


def _default_theta(g, phi, theta):
    if theta is not None:
        return theta
    an = analyze(g, phi)
    cls = classify(an)
    if not cls.lcc:
        raise UsageError("structure is not LCC; pass --theta explicitly")
    return cls.lee


def _require_exact(args):
    if args.ring == "float":
        raise UsageError(f"'{args.command}' runs in exact arithmetic only")


def cmd_analyze(args):
    g, phi, _, _ = _algebra_phi_theta(args)
    an = analyze(g, phi, ring=None if args.ring == "exact" else "float", tol=args.tolerance)
    cls = classify(an)
    res = {
        "ring": an.ring,
        "metric_diagonal": [an.metric[i][i] for i in range(7)],
        "volume_scale": an.volume_scale,
        "torsion_free": cls.torsion_free,
        "closed": cls.closed,
        "coclosed": cls.coclosed,
        "lcc": cls.lcc,
        "lcp": cls.lcp,
        "lee": lee_form(an),
    }
    try:
        res["torsion"] = torsion_forms(an).as_dict()
    except ArithmeticError as exc:
        res["torsion"] = {"error": str(exc)}
    return "ok", res


def cmd_cohomology(args):
    _require_exact(args)
    g, _, theta, _ = _algebra_phi_theta(args)
    if theta is None:
        raise UsageError("--theta is required")
    t = conformal.lichnerowicz_cohomology(g, theta)
    reps = {str(k): [render(r) for r in rs] for k, rs in enumerate(t.representatives) if rs}
    return "ok", {"theta": theta, "dims": list(t.dims), "euler_characteristic": t.euler_characteristic, "representatives": reps}


def cmd_exact(args):
    _require_exact(args)
    g, phi, theta, _ = _algebra_phi_theta(args)
    phi = phi if phi is not None else analyze(g).phi
    theta = _default_theta(g, phi, theta)
    r = conformal.solve_exact(g, phi, theta)
    r7 = conformal.solve_exact_type7(g, phi, theta)
    return "ok", {
        "theta": theta,
        "exact": r.feasible,
        "sigma": r.sigma if r.feasible else None,
        "rank": r.rank,
        "exact_with_type7_primitive": r7.feasible,
        "type7_sigma": r7.sigma,
    }


def cmd_kind(args):
    _require_exact(args)
    g, phi, theta, _ = _algebra_phi_theta(args)
    phi = phi if phi is not None else analyze(g).phi
    theta = _default_theta(g, phi, theta)
    v = conformal.kind(g, phi, theta)
    return "ok", {
        "theta": theta,
        "kind": v.kind,
        "automorphism_basis": [list(x) for x in v.automorphism_basis],
        "ell_theta_image": v.ell_theta_image,
        "witness": list(v.witness) if v.witness else None,
    }


def cmd_extend(args):
    h = parse_structure_tuple(args.base)
    D = parse_derivation(args.derivation, h.dim)
    ext = rank_one_extension(h, D)
    res = {"structure_equations": render_tuple(ext.total), "dim": ext.total.dim}
    res.update({k: v for k, v in ext.total.predicates().items()})
    if h.dim == 6:
        from .su3 import SU3Rejected, g2_from_su3, standard_pair, validate_su3

        try:
            pair = validate_su3(h, *standard_pair())
        except SU3Rejected as exc:
            res["su3"] = {"error": str(exc)}
        else:
            out = g2_from_su3(pair, D)
            p = out.prediction
            res["phi"] = out.phi
            res["coupling_constant"] = out.coupling
            res["prediction"] = {"lee": p.lee, "closed": p.closed, "exact": p.exact, "first_kind": p.first_kind}
    return "ok", res


def cmd_catalog(args):
    if args.action == "list":
        return "ok", {"entries": {n: cat.get(n).tuple_text for n in cat.names()}}
    if not args.name:
        raise UsageError("catalog show needs a name")
    ent = cat.get(args.name)
    res = {"name": ent.name, "structure_equations": ent.tuple_text, "provenance": ent.provenance}
    for key in ("omega", "psi", "phi", "theta", "coupling"):
        val = getattr(ent, key)
        if val is not None:
            res[key] = val
    if ent.derivation is not None:
        res["derivation"] = [list(r) for r in ent.derivation]
    return "ok", res


def cmd_verify(args):
    certs = cat.verify_paper()
    status = "ok" if all(c.verified for c in certs) else "failed"
    return status, {"certificates": certs}


COMMANDS = {
    "analyze": cmd_analyze,
    "cohomology": cmd_cohomology,
    "exact": cmd_exact,
    "kind": cmd_kind,
    "extend": cmd_extend,
    "catalog": cmd_catalog,
    "verify-paper": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    default_format = os.environ.get("G2FORGE_FORMAT", "text")
    if default_format not in ("text", "json"):
        default_format = "text"

    def add_globals(p, suppress):
        # subcommand copies must not clobber values given before the subcommand
        d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        p.add_argument("--format", choices=["text", "json"], default=d(default_format))
        p.add_argument("--ring", choices=["exact", "float"], default=d("exact"))
        p.add_argument("--tolerance", type=float, default=d(FLOAT_TOL))

    parser = argparse.ArgumentParser(prog="g2forge", description="G2- and SU(3)-structures on Lie algebras.")
    add_globals(parser, False)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_):
        p = sub.add_parser(name, help=help_)
        add_globals(p, True)
        return p

    def source(p, phi=True, theta=False):
        p.add_argument("--algebra", help="structure equations, e.g. '(0,0,0,0,e12,e13,0)'")
        p.add_argument("--catalog", help="name of a built-in entry")
        if phi:
            p.add_argument("--phi", help="3-form, e.g. 'e123+e145+...'; default is the standard form")
        if theta:
            p.add_argument("--theta", help="closed 1-form, e.g. 'e7'")

    source(command("analyze", "G2 classification, torsion forms and Lee form"))
    source(command("cohomology", "Lichnerowicz cohomology for a closed 1-form"), phi=False, theta=True)
    source(command("exact", "solve d_theta sigma = phi"), theta=True)
    source(command("kind", "first or second kind"), theta=True)
    p = command("extend", "rank-one extension by a derivation")
    p.add_argument("--base", required=True)
    p.add_argument("--derivation", required=True, help="row-major rationals or a JSON array")
    p = command("catalog", "built-in algebras and structures")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    command("verify-paper", "run the full verification battery")
    return parser


def _emit_text(command, status, result, error, out):
    print(f"command: {command}", file=out)
    print(f"status: {status}", file=out)
    if error:
        where = f" at line {error['line']}, column {error['col']}" if "line" in error else ""
        print(f"error: {error['message']}{where}", file=out)
        return
    if command == "verify-paper":
        for c in result["certificates"]:
            print(f"{c.status:8s} {c.claim_id}", file=out)
        return
    for k, v in result.items():
        v = _fmt(v)
        if isinstance(v, dict):
            print(f"{k}:", file=out)
            for kk, vv in v.items():
                print(f"  {kk}: {vv}", file=out)
        else:
            print(f"{k}: {v}", file=out)


def _emit_json(command, status, result, error, out):
    doc = {"command": command, "status": status}
    if error:
        doc["error"] = error
    elif command == "verify-paper":
        doc["certificates"] = [c.to_dict() for c in result["certificates"]]
    else:
        doc["result"] = _fmt(result)
    print(json.dumps(doc, indent=2, sort_keys=True), file=out)


def run_command(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    error = None
    result = None
    try:
        status, result = COMMANDS[args.command](args)
        code = EXIT_OK if status == "ok" else EXIT_FAIL
    except ParseError as exc:
        status, code = "error", EXIT_USAGE
        error = {"message": exc.message, "line": exc.line, "col": exc.col}
    except (UsageError, JacobiError, NotADerivation, cat.UnknownEntry, conformal.NotClosedError) as exc:
        status, code = "error", EXIT_USAGE
        error = {"message": str(exc)}
    except (NotG2Error, ValueError, ArithmeticError) as exc:
        status, code = "error", EXIT_FAIL
        error = {"message": str(exc)}
    emit = _emit_json if args.format == "json" else _emit_text
    emit(args.command, status, result, error, out)
    return code


def main(argv=None) -> int:
    return run_command(argv)


if __name__ == "__main__":
    sys.exit(main())
