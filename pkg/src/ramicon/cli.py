"""ramicon command-line interface.

Every command reads and writes envelope documents (see ``ramicon.document``).
Exit codes: 0 success, 1 invalid input, 2 precision, 3 structural failure,
64 usage error.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from . import document as doc
from .errors import InvalidDocument, RamiconError

EXIT_OK, EXIT_VALIDATION, EXIT_PRECISION, EXIT_STRUCTURE, EXIT_USAGE = 0, 1, 2, 3, 64
DEFAULT_MAX_PREC = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def max_prec() -> int:
    raw = os.environ.get("RAMICON_MAX_PREC", "")
    if not raw:
        return DEFAULT_MAX_PREC
    try:
        val = int(raw)
    except ValueError:
        raise UsageError(f"RAMICON_MAX_PREC must be a positive integer, got {raw!r}") from None
    if val < 1:
        raise UsageError("RAMICON_MAX_PREC must be positive")
    return val


def _check_order(q: int, m: int, what: str = "--order"):
    if q < m:
        raise UsageError(f"{what} {q} is below the pole order {m}")
    cap = max_prec()
    if q > cap:
        raise UsageError(f"{what} {q} exceeds RAMICON_MAX_PREC={cap}")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rat(text: str) -> Fraction:
    try:
        return doc.decode_scalar(text)
    except InvalidDocument as exc:
        raise UsageError(str(exc)) from None


def _load_conn(args, nu, q=None):
    from .connection import normal_matrix

    if getattr(args, "conn", None):
        c = doc.load(args.conn, "connection")[1]
        if (c.r, c.m) != (nu.r, nu.m):
            from .errors import NotRamified

            raise NotRamified(f"connection has (r, m) = ({c.r}, {c.m}), exponent ({nu.r}, {nu.m})")
        return c
    return normal_matrix(nu, q) if q is not None else normal_matrix(nu)


# ---- commands ----------------------------------------------------------------

def cmd_validate(args) -> int:
    from .exponent import validate_exponent

    kind, obj = doc.load(args.path)
    if kind == "exponent":
        validate_exponent(obj)
    print(f"OK {kind}")
    return EXIT_OK


def cmd_normalize(args) -> int:
    from .normalform import normalize_with_trace

    nu = doc.load(args.nu, "exponent")[1]
    _check_order(args.order, nu.m)
    conn = _load_conn(args, nu)
    res = normalize_with_trace(conn, nu, args.order)
    if args.output:
        os.makedirs(args.output, exist_ok=True)
        _emit(doc.render("report", doc.encode_gauge(res.gauge)), os.path.join(args.output, "gauge.json"))
        _emit(doc.render("connection", res.conn), os.path.join(args.output, "normal.json"))
    else:
        body = {
            "command": "normalize",
            "order": args.order,
            "steps": len(res.trace),
            "gauge": doc.encode_matrix(res.gauge.P),
            "connection": doc.encode_connection(res.conn),
        }
        _emit(doc.render("report", body), None)
    return EXIT_OK


def cmd_shear(args) -> int:
    from .shearing import shear

    nu = doc.load(args.nu, "exponent")[1]
    q = None
    if args.order is not None:
        _check_order(args.order, nu.m)
        q = args.order
    conn = _load_conn(args, nu)
    if conn.prec != float("inf") and q is None:
        q = int(conn.prec)
        _check_order(q, nu.m, "connection precision")
    sc = shear(conn, nu, q)
    leads = sc.leading_terms()
    body = {
        "command": "shear",
        "pole_order": sc.base.m,
        "variable": sc.base.var,
        "diagonal": sc.is_diagonal(),
        "leading_distinct": len(set(leads)) == len(leads),
        "leading": [doc.encode_scalar(x) for x in leads],
        "connection": doc.encode_connection(sc.base),
    }
    _emit(doc.render("report", body), args.output)
    return EXIT_OK if sc.is_diagonal() else EXIT_STRUCTURE


def cmd_lift(args) -> int:
    from .isomonodromy import adapt, lift_ramified, lift_two_param

    nu = doc.load(args.nu, "exponent")[1]
    d1 = doc.load(args.dir, "direction")[1]
    two = args.dir2 is not None
    depth = (3 if two else 2) * nu.m - 1
    _check_order(depth, nu.m, "lift depth")
    conn = _load_conn(args, nu, None if args.conn else depth)
    _, ac = adapt(conn, nu, depth)
    if two:
        d2 = doc.load(args.dir2, "direction")[1]
        lift = lift_two_param(ac, nu, d1, d2)
    else:
        lift = lift_ramified(ac, nu, d1)
    _emit(doc.render("lift", lift), args.output)
    return EXIT_OK


def cmd_curvature(args) -> int:
    from .isomonodromy import curvature

    lift = doc.load(args.path, "lift")[1]
    form = curvature(lift)
    if form.is_zero():
        print("FLAT")
        return EXIT_OK
    print("NOT FLAT " + " ".join(str(k) for k in form.nonzero_keys()))
    return EXIT_STRUCTURE


def _structure(args, nu):
    from .ramstruct import build_factorized, random_factorized, standard_factorized

    if getattr(args, "conn", None):
        from .isomonodromy import adapt

        depth = 2 * nu.m - 1
        _check_order(depth, nu.m, "adapting depth")
        # an arbitrary connection is first gauged into adapted form
        _, ac = adapt(_load_conn(args, nu), nu, depth)
        return build_factorized(ac.conn, nu), ac.conn
    if getattr(args, "seed", None) is not None:
        return random_factorized(nu, random.Random(args.seed))
    return standard_factorized(nu.r, nu.m), None


def cmd_pair(args) -> int:
    from .pairing import perfect_pairing_check

    nu = doc.load(args.nu, "exponent")[1]
    r = args.r if args.r is not None else nu.r
    m = args.m if args.m is not None else nu.m
    if (r, m) != (nu.r, nu.m):
        raise UsageError(f"--r/--m ({r}, {m}) disagree with the exponent ({nu.r}, {nu.m})")
    fs, _ = _structure(args, nu)
    rep = perfect_pairing_check(r, m, nu, fs)
    if args.check_perfect:
        print(rep.summary())
        return EXIT_OK if rep.perfect else EXIT_STRUCTURE
    body = {
        "command": "pair",
        "r": r,
        "m": m,
        "sym2_dimension": rep.sym2_dim,
        "ker_dimension": rep.ker_dim,
        "coker_dimension": rep.coker_dim,
        "rank": rep.rank,
        "descends": rep.descends,
        "perfect": rep.perfect,
    }
    _emit(doc.render("report", body), args.output)
    return EXIT_OK


def cmd_dims(args) -> int:
    from .pairing import moduli_dimension

    points = [("ram", m) for m in args.ram] + [("un", m) for m in args.un] + [("log", 1)] * args.log
    print(moduli_dimension(args.g, args.r, points))
    return EXIT_OK


def cmd_unfold(args) -> int:
    from .exponent import unfold_exponent, unfolded_residue_spectrum

    nu = doc.load(args.nu, "exponent")[1]
    h = _rat(args.h)
    q = [_rat(x) for x in args.q]
    u = unfold_exponent(nu, h, q)
    spectra = []
    for j in range(1, nu.m + 1):
        entry = {"pole": j, "location": doc.encode_scalar(u.roots()[j - 1])}
        if h != 0:
            spec = unfolded_residue_spectrum(u, j)
            entry["charpoly"] = [doc.encode_scalar(x) for x in spec.charpoly]
            entry["separable"] = spec.separable
        spectra.append(entry)
    body = {
        "command": "unfold",
        "h": doc.encode_scalar(h),
        "q": [doc.encode_scalar(x) for x in q],
        "denominator": [doc.encode_scalar(x) for x in u.denominator()],
        "specializes": u.at(0).specialize() == nu,
        "poles": spectra,
    }
    _emit(doc.render("report", body), args.output)
    return EXIT_OK


def cmd_ramstruct_verify(args) -> int:
    from .ramstruct import from_generic, to_generic, verify_factorized, verify_generic, equivalence

    nu = doc.load(args.nu, "exponent")[1]
    fs, conn = _structure(args, nu)
    rep = verify_factorized(fs, conn, nu if conn is not None else None)
    checks = dict(rep.checks)
    if rep.passed:
        gs = to_generic(fs)
        checks.update({f"generic_{k}": v for k, v in verify_generic(gs).checks.items()})
        checks["round_trip_equivalent"] = equivalence(fs, from_generic(gs)).equivalent
    ok = all(checks.values())
    body = {
        "command": "ramstruct-verify",
        "r": fs.r,
        "m": fs.m,
        "passed": ok,
        "checks": [{"name": k, "passed": v} for k, v in checks.items()],
    }
    _emit(doc.render("report", body), args.output)
    return EXIT_OK if ok else EXIT_STRUCTURE


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    results = run_selftest(args.seed)
    for name, ok in results:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK if all(ok for _, ok in results) else EXIT_STRUCTURE


# ---- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ramicon", description="Exact computations with generic ramified irregular connections.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a document against its invariants")
    s.add_argument("path")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("normalize", help="gauge a connection into its normal form")
    s.add_argument("--nu", required=True)
    s.add_argument("--conn", required=True)
    s.add_argument("--order", type=int, required=True)
    s.add_argument("-o", "--output", help="directory for gauge.json and normal.json")
    s.set_defaults(func=cmd_normalize)

    s = sub.add_parser("shear", help="shearing transform to the ramified cover")
    s.add_argument("--nu", required=True)
    s.add_argument("--conn")
    s.add_argument("--order", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_shear)

    s = sub.add_parser("lift", help="horizontal lift along a deformation direction")
    s.add_argument("--nu", required=True)
    s.add_argument("--dir", required=True)
    s.add_argument("--dir2", help="second direction for a two-parameter lift")
    s.add_argument("--conn")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("curvature", help="print FLAT when a lift has zero curvature")
    s.add_argument("path")
    s.set_defaults(func=cmd_curvature)

    s = sub.add_parser("pair", help="local deformation complex and the pairing Xi")
    s.add_argument("--nu", required=True)
    s.add_argument("--r", type=int)
    s.add_argument("--m", type=int)
    s.add_argument("--conn")
    s.add_argument("--seed", type=int, help="use a random factorized structure")
    s.add_argument("--check-perfect", action="store_true")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_pair)

    s = sub.add_parser("dims", help="dimension of the moduli space")
    s.add_argument("--g", type=int, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--ram", type=int, action="append", default=[], metavar="M")
    s.add_argument("--un", type=int, action="append", default=[], metavar="M")
    s.add_argument("--log", type=int, default=0, metavar="COUNT")
    s.set_defaults(func=cmd_dims)

    s = sub.add_parser("unfold", help="unfold the pole into simple poles")
    s.add_argument("--nu", required=True)
    s.add_argument("--h", required=True)
    s.add_argument("--q", nargs="+", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_unfold)

    s = sub.add_parser("ramstruct-verify", help="check the factorized ramified structure axioms")
    s.add_argument("--nu", required=True)
    s.add_argument("--conn")
    s.add_argument("--seed", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_ramstruct_verify)

    s = sub.add_parser("selftest", help="seeded invariant checks")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"ramicon: usage error: {exc}\n")
        return EXIT_USAGE
    except RamiconError as exc:
        sys.stderr.write(f"ramicon: {type(exc).__name__}: {exc}\n")
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
