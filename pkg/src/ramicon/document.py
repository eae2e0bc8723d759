"""On-disk documents: a versioned JSON envelope with exact scalars.

Rationals are strings "p/q" (or "p").  A cyclotomic number in Q(zeta_R) is an
array of R rational strings, the coefficients of 1, zeta, ..., zeta^(R-1); the
length of the array fixes R.  Series are records {var, ord, prec, coeffs} with
prec an integer or "inf".  Keys are always written in the order listed here so
that rendering is byte-deterministic.
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .algebra.cyclotomic import CycNum, parse_rational, render_rational
from .algebra.matrix import SeriesMatrix
from .algebra.series import INF, TruncSeries
from .connection import Connection, Gauge
from .errors import InvalidDocument, RamiconError
from .exponent import DeformationDirection, RamifiedExponent

SCHEMA_VERSION = "1"
KINDS = ("exponent", "direction", "connection", "lift", "report")


# ---- scalars and series ----------------------------------------------------

def encode_scalar(x) -> Any:
    if isinstance(x, CycNum):
        if x.is_rational():
            return render_rational(x.coeffs[0])
        cs = list(x.coeffs) + [Fraction(0)] * (x.order - len(x.coeffs))
        return [render_rational(c) for c in cs]
    if isinstance(x, (int, Fraction)):
        return render_rational(Fraction(x))
    raise InvalidDocument(f"cannot encode scalar {x!r}")


def decode_scalar(obj):
    if isinstance(obj, str):
        return parse_rational(obj)
    if isinstance(obj, list) and obj:
        return CycNum(len(obj), [parse_rational(c) for c in obj])
    raise InvalidDocument(f"scalar must be a rational string or a non-empty array, got {obj!r}")


def _encode_prec(p):
    return "inf" if p == INF else int(p)


def _decode_prec(p):
    if p == "inf":
        return INF
    if isinstance(p, int) and not isinstance(p, bool):
        return p
    raise InvalidDocument(f"precision must be an integer or 'inf', got {p!r}")


def encode_series(s: TruncSeries) -> dict:
    return {
        "var": s.var,
        "ord": s.ord,
        "prec": _encode_prec(s.prec),
        "coeffs": [encode_scalar(c) for c in s.coeffs],
    }


def decode_series(obj) -> TruncSeries:
    rec = _record(obj, ("var", "ord", "prec", "coeffs"), "series")
    if not isinstance(rec["ord"], int) or not isinstance(rec["coeffs"], list):
        raise InvalidDocument("series needs an integer ord and a coefficient array")
    try:
        return TruncSeries(rec["var"], rec["ord"], _decode_prec(rec["prec"]),
                           [decode_scalar(c) for c in rec["coeffs"]])
    except ValueError as exc:
        raise InvalidDocument(str(exc)) from exc


def encode_matrix(m: SeriesMatrix) -> list:
    return [[encode_series(x) for x in row] for row in m.rows]


def decode_matrix(obj) -> SeriesMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) and r for r in obj):
        raise InvalidDocument("matrix must be a non-empty array of non-empty rows")
    rows = [[decode_series(x) for x in row] for row in obj]
    var = rows[0][0].var
    return SeriesMatrix(rows, var)


def _record(obj, keys: tuple, what: str) -> dict:
    if not isinstance(obj, dict):
        raise InvalidDocument(f"{what} must be a record")
    missing = [k for k in keys if k not in obj]
    if missing:
        raise InvalidDocument(f"{what} lacks {', '.join(missing)}")
    return obj


def _table(obj, what: str) -> list:
    if not isinstance(obj, list) or not all(isinstance(r, list) for r in obj):
        raise InvalidDocument(f"{what} must be an array of arrays")
    return [[decode_scalar(x) for x in row] for row in obj]


def _int(obj, what: str) -> int:
    if not isinstance(obj, int) or isinstance(obj, bool):
        raise InvalidDocument(f"{what} must be an integer")
    return obj


# ---- typed bodies ----------------------------------------------------------

def encode_exponent(nu: RamifiedExponent) -> dict:
    return {"r": nu.r, "m": nu.m, "a": [[encode_scalar(x) for x in row] for row in nu.a]}


def decode_exponent(body) -> RamifiedExponent:
    rec = _record(body, ("r", "m", "a"), "exponent")
    return RamifiedExponent(_int(rec["r"], "r"), _int(rec["m"], "m"), _table(rec["a"], "a"))


def encode_direction(d: DeformationDirection) -> dict:
    return {"r": d.r, "m": d.m, "b": [[encode_scalar(x) for x in row] for row in d.b]}


def decode_direction(body) -> DeformationDirection:
    rec = _record(body, ("r", "m", "b"), "direction")
    return DeformationDirection(_int(rec["r"], "r"), _int(rec["m"], "m"), _table(rec["b"], "b"))


def encode_connection(c: Connection) -> dict:
    return {"r": c.r, "m": c.m, "prec": _encode_prec(c.prec), "A": encode_matrix(c.A)}


def decode_connection(body) -> Connection:
    rec = _record(body, ("r", "m", "prec", "A"), "connection")
    return Connection(_int(rec["r"], "r"), _int(rec["m"], "m"), decode_matrix(rec["A"]), _decode_prec(rec["prec"]))


def encode_gauge(g: Gauge) -> dict:
    return {"object": "gauge", "P": encode_matrix(g.P)}


def encode_lift(lift) -> dict:
    body = {
        "ring": lift.ring,
        "base": encode_connection(lift.base),
        "B": {str(k): encode_matrix(v) for k, v in sorted(lift.B.items())},
        "C": {str(k): encode_matrix(v) for k, v in sorted(lift.C.items())},
    }
    if lift.B12 is not None:
        body["B12"] = encode_matrix(lift.B12)
    if lift.C12 is not None:
        body["C12"] = encode_matrix(lift.C12)
    if lift.B21 is not None:
        body["B21"] = encode_matrix(lift.B21)
    return body


def decode_lift(body):
    from .isomonodromy import HorizontalLift

    rec = _record(body, ("ring", "base", "B", "C"), "lift")
    if not isinstance(rec["B"], dict) or not isinstance(rec["C"], dict):
        raise InvalidDocument("lift B and C must be records keyed by parameter index")
    try:
        bs = {int(k): decode_matrix(v) for k, v in rec["B"].items()}
        cs = {int(k): decode_matrix(v) for k, v in rec["C"].items()}
    except ValueError as exc:
        raise InvalidDocument("lift parameter keys must be integers") from exc
    b12 = decode_matrix(rec["B12"]) if "B12" in rec else None
    c12 = decode_matrix(rec["C12"]) if "C12" in rec else None
    b21 = decode_matrix(rec["B21"]) if "B21" in rec else None
    return HorizontalLift(decode_connection(rec["base"]), rec["ring"], bs, cs, b12, c12, B21=b21)


ENCODERS = {
    "exponent": encode_exponent,
    "direction": encode_direction,
    "connection": encode_connection,
    "lift": encode_lift,
}
DECODERS = {
    "exponent": decode_exponent,
    "direction": decode_direction,
    "connection": decode_connection,
    "lift": decode_lift,
    "report": lambda body: body,
}


# ---- envelope --------------------------------------------------------------

def envelope(kind: str, body) -> dict:
    if kind not in KINDS:
        raise InvalidDocument(f"unknown document kind {kind!r}")
    return {"schema_version": SCHEMA_VERSION, "kind": kind, "body": body}


def render(kind: str, obj) -> str:
    """Envelope text for a typed object (or a plain report body)."""
    body = ENCODERS[kind](obj) if kind in ENCODERS else obj
    return json.dumps(envelope(kind, body), indent=2, ensure_ascii=False) + "\n"


def parse(text: str, expect: str | None = None):
    """(kind, object) from envelope text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidDocument(f"not valid JSON: {exc.msg} at line {exc.lineno}") from exc
    rec = _record(doc, ("schema_version", "kind", "body"), "document")
    if rec["schema_version"] != SCHEMA_VERSION:
        raise InvalidDocument(f"unsupported schema_version {rec['schema_version']!r}")
    kind = rec["kind"]
    if kind not in KINDS:
        raise InvalidDocument(f"unknown document kind {kind!r}")
    if expect is not None and kind != expect:
        raise InvalidDocument(f"expected a {expect} document, got {kind}")
    try:
        return kind, DECODERS[kind](rec["body"])
    except InvalidDocument:
        raise
    except RamiconError:
        raise
    except (TypeError, KeyError, AttributeError, IndexError, ValueError) as exc:
        raise InvalidDocument(f"malformed {kind} body: {exc}") from exc


def load(path: str, expect: str | None = None):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidDocument(f"cannot read {path}: {exc.strerror}") from exc
    return parse(text, expect)


__all__ = [
    "KINDS",
    "SCHEMA_VERSION",
    "decode_connection",
    "decode_direction",
    "decode_exponent",
    "decode_lift",
    "decode_matrix",
    "decode_scalar",
    "decode_series",
    "encode_connection",
    "encode_direction",
    "encode_exponent",
    "encode_gauge",
    "encode_lift",
    "encode_matrix",
    "encode_scalar",
    "encode_series",
    "envelope",
    "load",
    "parse",
    "render",
]
