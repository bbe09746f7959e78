"""Command-line front end. Every subcommand prints one JSON document on stdout.

Exit status: 0 when a result was computed (whatever the verdict), 1 for usage
and parse errors, 2 for precondition violations. Errors are reported on
stderr as ``{"error": code, "message": text}``.
"""

from __future__ import annotations

import argparse
import json
import math
import random
import sys
from typing import Sequence

from . import __version__
from .delta import (
    CheckReport,
    FrobeniusLift,
    PerivationMap,
    check_kummer_lemma,
    check_p_derivation_axioms,
    check_perivation,
    cp,
    delta_poly,
)
from .errors import AlgebraError, InputError, PreconditionError
from .exprparser import identifiers, parse
from .groebner import buchberger
from .mixedjac import (
    Presentation,
    classical_jacobian,
    fiber_gb,
    fiber_points,
    height_warnings,
    mixed_jacobian,
    regular_at_point,
    singular_locus_char_zero,
    singular_locus_mod_p,
)
from .numeric import QQ, ZZ
from .perivmod import (
    check_generator_invariance,
    check_second_fundamental_sequence,
    check_theorem_ab_agreement,
    fitting_ideal,
    fitting_ideals,
    perivation_module,
    regularity_via_theorem_b,
    truncate,
)
from .polynomial import Poly

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION = 0, 1, 2

_FILE_KEYS = {"prime", "variables", "generators", "height", "frobenius_lift", "order", "truncation"}


class UsageError(InputError):
    code = "usage"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# ---------------------------------------------------------------- input


def presentation_from_dict(doc: dict, order: str | None = None) -> Presentation:
    if not isinstance(doc, dict):
        raise InputError("a presentation must be a JSON object")
    unknown = set(doc) - _FILE_KEYS
    if unknown:
        raise InputError(f"unknown presentation keys {sorted(unknown)}")
    missing = {"prime", "variables", "generators", "height"} - set(doc)
    if missing:
        raise InputError(f"missing presentation keys {sorted(missing)}")
    prime, height = doc["prime"], doc["height"]
    variables, generators = doc["variables"], doc["generators"]
    if not isinstance(prime, int) or not isinstance(height, int):
        raise InputError("'prime' and 'height' must be integers")
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise InputError("'variables' must be a list of strings")
    if not isinstance(generators, list) or not all(isinstance(g, str) for g in generators):
        raise InputError("'generators' must be a list of strings")
    lift = doc.get("frobenius_lift")
    if lift is not None and not (isinstance(lift, dict) and all(isinstance(v, str) for v in lift.values())):
        raise InputError("'frobenius_lift' must map variable names to expressions")
    truncation = doc.get("truncation", 4)
    if not isinstance(truncation, int):
        raise InputError("'truncation' must be an integer")
    try:
        return Presentation.from_strings(
            prime, variables, generators, height, lift, order or doc.get("order", "grevlex"), truncation
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None


def load_presentations(path: str, order: str | None = None) -> tuple[list[Presentation], bool]:
    """Returns the presentations and whether the file held a batch (JSON list)."""
    try:
        if path == "-":
            doc = json.load(sys.stdin)
        else:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON in {path}: {exc}") from None
    if isinstance(doc, list):
        return [presentation_from_dict(d, order) for d in doc], True
    return [presentation_from_dict(doc, order)], False


def _split_vars(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _parse_point(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()] if text.strip() else []
    except ValueError:
        raise InputError(f"point must be comma-separated integers, got {text!r}") from None


def _lift_option(items: Sequence[str] | None) -> dict:
    out = {}
    for item in items or ():
        if "=" not in item:
            raise UsageError(f"--lift expects VAR=EXPR, got {item!r}")
        var, expr = item.split("=", 1)
        out[var.strip()] = expr.strip()
    return out


# ---------------------------------------------------------------- commands


def cmd_delta(args) -> dict:
    variables = _split_vars(args.vars)
    f = parse(args.poly, variables, ZZ)
    lift = FrobeniusLift.from_strings(args.prime, variables, _lift_option(args.lift), args.modulus_exp)
    return {
        "prime": args.prime,
        "modulus_exp": args.modulus_exp,
        "poly": str(f),
        "delta": str(delta_poly(lift, f)),
    }


def cmd_cp(args) -> dict:
    variables = _split_vars(args.vars) if args.vars else []
    if not variables:
        for a in args.args:
            variables += [v for v in identifiers(a) if v not in variables]
    if not variables:
        value = cp(args.prime, [int(parse(a, [], ZZ).constant_term()) for a in args.args])
        return {"prime": args.prime, "cp": str(value)}
    polys = [parse(a, variables, ZZ) for a in args.args]
    return {"prime": args.prime, "cp": str(cp(args.prime, polys))}


def cmd_jacobian(pres: Presentation, args) -> dict:
    return {"field": "QQ", **classical_jacobian(pres).to_dict()}


def cmd_mixed_jacobian(pres: Presentation, args) -> dict:
    return {"prime": pres.p, "field": f"GF({pres.p})", **mixed_jacobian(pres).to_dict()}


def cmd_gb(pres: Presentation, args) -> dict:
    if args.field == "qq":
        gb = buchberger([g.change_ring(QQ) for g in pres.generators], pres.order, ring=QQ, variables=pres.variables)
        return {"field": "QQ", "order": pres.order.name, "basis": gb.to_strings()}
    gb = fiber_gb(pres)
    return {"prime": pres.p, "field": f"GF({pres.p})", "order": pres.order.name, "basis": gb.to_strings()}


def cmd_dim(pres: Presentation, args) -> dict:
    d = fiber_gb(pres).dimension()
    return {"prime": pres.p, "fiber_dimension": d, "fiber_codimension": pres.n - d}


def cmd_singular_locus(pres: Presentation, args) -> dict:
    out = singular_locus_mod_p(pres).to_dict()
    if args.check_height:
        out["warnings"] = height_warnings(pres)
    return out


def cmd_singular_locus_char0(pres: Presentation, args) -> dict:
    v = singular_locus_char_zero(pres)
    return {"verdict": v.kind, "singular_ideal_gb": v.gb.to_strings(), "field": "QQ", "height": v.height}


def cmd_regular_at(pres: Presentation, args) -> dict:
    point = _parse_point(args.point)
    if args.method == "thmB":
        return regularity_via_theorem_b(pres, point).to_dict()
    return regular_at_point(pres, point).to_dict()


def cmd_perivation_module(pres: Presentation, args) -> dict:
    M = perivation_module(pres)
    k = args.truncation or pres.truncation
    return {**M.to_dict(), **truncate(M, k).to_dict()}


def cmd_fitting(pres: Presentation, args) -> dict:
    M = perivation_module(pres)
    if args.j is not None:
        return {"prime": pres.p, "j": args.j, "fitting_ideal_gb": fitting_ideal(M, args.j).to_strings()}
    return {
        "prime": pres.p,
        "fitting_ideals": {str(j): gb.to_strings() for j, gb in enumerate(fitting_ideals(M))},
    }


def _alternate_lift(pres: Presentation, seed: int) -> FrobeniusLift:
    rng = random.Random(seed)
    imgs = []
    for i, base in enumerate(pres.lift.images):
        shift = Poly.variable(i, ZZ, pres.variables) * rng.randint(1, 3) + rng.randint(0, 2)
        imgs.append(base + shift.scale(pres.p))
    return FrobeniusLift(pres.p, pres.variables, tuple(imgs))


def run_checks(pres: Presentation | None, prime: int, variables, samples: int, seed: int) -> list[CheckReport]:
    lift = pres.lift.with_precision(2) if pres else FrobeniusLift.standard(prime, variables, 2)
    reports = [
        check_p_derivation_axioms(lift, samples=samples, seed=seed),
        check_kummer_lemma(prime, samples=samples, seed=seed),
        check_perivation(PerivationMap.universal(lift.with_precision(1)), samples=samples, seed=seed),
    ]
    if pres is None:
        return reports
    reports.append(check_theorem_ab_agreement(pres))
    reports.append(check_second_fundamental_sequence(pres))
    other = pres.with_lift(_alternate_lift(pres, seed))
    lift_report = CheckReport("lift independence")
    va, vb = singular_locus_mod_p(pres), singular_locus_mod_p(other)
    lift_report.record("verdict", va.kind == vb.kind, a=va.kind, b=vb.kind)
    lift_report.record("singular ideal", va.gb == vb.gb, a=va.gb.to_strings(), b=vb.gb.to_strings())
    for j, (fa, fb) in enumerate(zip(fitting_ideals(perivation_module(pres)), fitting_ideals(perivation_module(other)))):
        lift_report.record(f"F_{j}", fa == fb, a=fa.to_strings(), b=fb.to_strings())
    for v in fiber_points(pres):
        lift_report.record("point verdict", regular_at_point(pres, v).regular == regular_at_point(other, v).regular, point=v)
    reports.append(lift_report)
    if pres.generators:
        x0 = Poly.variable(0, ZZ, pres.variables) if pres.n else Poly.constant(1, ZZ, ())
        bigger = pres.with_generators(pres.generators + ((x0 + 1) * pres.generators[0],))
        reports.append(check_generator_invariance(pres, bigger))
    return reports


def cmd_check(args) -> dict:
    if args.presentation:
        presentations, _ = load_presentations(args.presentation, args.order)
        pres = presentations[0]
        prime, variables = pres.p, pres.variables
    else:
        if args.prime is None:
            raise UsageError("check needs a presentation file or --prime")
        pres, prime, variables = None, args.prime, _split_vars(args.vars)
    reports = run_checks(pres, prime, variables, args.samples, args.seed)
    return {
        "seed": args.seed,
        "passed": all(r.passed for r in reports),
        "reports": [r.to_dict() for r in reports],
    }


def squarefree(n: int) -> bool:
    n = abs(n)
    return all(n % (q * q) for q in range(2, math.isqrt(n) + 1))


def sqrt_n_table(max_abs: int, primes: Sequence[int]) -> dict:
    rows = []
    agree = True
    for n in range(-max_abs, max_abs + 1):
        if n in (-1, 0, 1) or not squarefree(n):
            continue
        for p in primes:
            pres = Presentation.from_strings(p, ["x"], [f"x^2 - {n}" if n >= 0 else f"x^2 + {-n}"], 1)
            verdict = singular_locus_mod_p(pres)
            expected = "singular" if p == 2 and n % 4 == 1 else "regular"
            agree &= verdict.kind == expected
            rows.append(
                {"n": n, "prime": p, "verdict": verdict.kind, "singular_ideal_gb": verdict.gb.to_strings()}
            )
    return {"rows": rows, "matches_n_mod_4_rule": agree}


def cmd_sqrt_n_table(args) -> dict:
    primes = [int(p) for p in _split_vars(args.primes)]
    return sqrt_n_table(args.max_abs, primes)


# ---------------------------------------------------------------- wiring

_PRESENTATION_COMMANDS = {
    "jacobian": (cmd_jacobian, "classical Jacobian matrix over Q"),
    "mixed-jacobian": (cmd_mixed_jacobian, "mixed Jacobian matrix over F_p"),
    "gb": (cmd_gb, "reduced Groebner basis of the ideal (mod p, or over Q)"),
    "dim": (cmd_dim, "Krull dimension of the mod-p fiber"),
    "singular-locus": (cmd_singular_locus, "singular locus on the mod-p fiber"),
    "singular-locus-char0": (cmd_singular_locus_char0, "singular locus over Q"),
    "regular-at": (cmd_regular_at, "regularity at the maximal ideal (p, x - v)"),
    "perivation-module": (cmd_perivation_module, "presentation of the universal perivation module"),
    "fitting": (cmd_fitting, "Fitting ideals of the universal perivation module"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="perijac", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"perijac {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("delta", help="p-derivation of a polynomial mod p^k")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--vars", required=True, help="comma-separated variable names")
    p.add_argument("--poly", required=True)
    p.add_argument("--modulus-exp", type=int, default=1)
    p.add_argument("--lift", action="append", metavar="VAR=EXPR", help="Frobenius lift image (default VAR^p)")

    p = sub.add_parser("cp", help="C_p of the arguments over Z")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--vars", help="comma-separated variables (default: inferred)")
    p.add_argument("args", nargs="+")

    for name, (_, help_) in _PRESENTATION_COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("presentation", help="presentation JSON file ('-' for stdin)")
        p.add_argument("--order", choices=["grevlex", "lex", "grlex"])
        if name == "gb":
            p.add_argument("--field", choices=["fp", "qq"], default="fp")
        if name == "singular-locus":
            p.add_argument("--check-height", action="store_true")
        if name == "regular-at":
            p.add_argument("--point", required=True, help="comma-separated integers")
            p.add_argument("--method", choices=["thmA", "thmB"], default="thmA")
        if name == "perivation-module":
            p.add_argument("--truncation", type=int)
        if name == "fitting":
            p.add_argument("--j", type=int)

    p = sub.add_parser("check", help="run the property suite")
    p.add_argument("presentation", nargs="?")
    p.add_argument("--prime", type=int)
    p.add_argument("--vars", default="x,y,z")
    p.add_argument("--order", choices=["grevlex", "lex", "grlex"])
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sqrt-n-table", help="classify Z[sqrt n] at several primes")
    p.add_argument("--max-abs", type=int, default=50)
    p.add_argument("--primes", default="2,3,5,7,11")
    return parser


def _emit_error(code: str, message: str, status: int) -> int:
    print(json.dumps({"error": code, "message": message}), file=sys.stderr)
    return status


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "delta":
            result = cmd_delta(args)
        elif args.command == "cp":
            result = cmd_cp(args)
        elif args.command == "check":
            result = cmd_check(args)
        elif args.command == "sqrt-n-table":
            result = cmd_sqrt_n_table(args)
        else:
            handler = _PRESENTATION_COMMANDS[args.command][0]
            presentations, batch = load_presentations(args.presentation, args.order)
            results = [handler(pres, args) for pres in presentations]
            result = results if batch else results[0]
    except InputError as exc:
        return _emit_error(exc.code, str(exc), EXIT_USAGE)
    except PreconditionError as exc:
        return _emit_error(exc.code, str(exc), EXIT_PRECONDITION)
    except AlgebraError as exc:
        return _emit_error(exc.code, str(exc), EXIT_PRECONDITION)
    print(json.dumps(result, indent=2))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
