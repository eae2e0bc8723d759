"""Horizontal lifts of ramified, unramified and logarithmic connections.

A one-parameter lift over C[eps]/(eps^2) is the form

    (A + eps C) dz/z^m + B d(eps),

and it is integrable exactly when C = z^m dB/dz + [A, B].  For a ramified
point in adapted gauge B is an explicit polynomial in N and 1/z.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra.cyclotomic import scalar, simplify
from .algebra.forms import EpsMatrix, FormMatrix, TwoForm, curvature_form
from .algebra.matrix import SeriesMatrix, commutator, diag
from .algebra.series import INF, TruncSeries
from .connection import Connection, Gauge, companion, normal_matrix
from .errors import (
    DimensionMismatch,
    NotAdapted,
    NotEquivalent,
    NotLogarithmic,
    PrecisionExhausted,
    ResidueDeformation,
)
from .exponent import DeformationDirection, RamifiedExponent, validate_exponent


@dataclass(frozen=True)
class AdaptedConnection:
    """A = sum a_kl z^l N^k + z^(m-1) R_r + z^depth A'."""

    conn: Connection
    nu: RamifiedExponent
    depth: int
    remainder: SeriesMatrix | None

    @property
    def A(self) -> SeriesMatrix:
        return self.conn.A


def _base_part(nu: RamifiedExponent) -> SeriesMatrix:
    return normal_matrix(nu).A


def decompose(conn: Connection, nu: RamifiedExponent, depth: int) -> AdaptedConnection:
    """Split off the normal form; raises NotAdapted when the difference has terms below z^depth."""
    if conn.prec < depth:
        raise PrecisionExhausted(f"connection known modulo z^{conn.prec}, depth {depth} requested")
    diff = conn.A - _base_part(nu).truncate(conn.prec)
    for x in diff.entries():
        v = x.valuation()
        if v < depth:
            raise NotAdapted(f"connection differs from the normal form at z^{v} < z^{depth}")
    rem = None
    if conn.prec > depth:
        rem = diff.map(lambda x: x.with_ord(max(x.ord, depth)).shift(-depth))
    return AdaptedConnection(conn, nu, depth, rem)


def adapt(c: Connection, nu: RamifiedExponent, depth: int) -> tuple:
    """(G, adapted connection) with the normal form matched modulo z^depth."""
    from .normalform import normalize

    validate_exponent(nu)
    if depth not in (2 * nu.m - 1, 3 * nu.m - 1):
        raise DimensionMismatch(f"depth must be 2m-1 or 3m-1, got {depth}")
    if c.prec < depth:
        raise PrecisionExhausted(f"connection known modulo z^{c.prec}, depth {depth} requested")
    try:
        return Gauge.identity(c.r), decompose(c, nu, depth)
    except NotAdapted:
        pass
    gauge, out = normalize(c, nu, depth)
    return gauge, decompose(out, nu, depth)


def direction_matrix(d: DeformationDirection) -> SeriesMatrix:
    """nu_v(N) numerator: sum b_kl z^l N^k."""
    n_mat = companion(d.r)
    total = SeriesMatrix.zero(d.r)
    power = SeriesMatrix.identity(d.r)
    for k in range(d.r):
        if k:
            power = power * n_mat
        if any(x != 0 for x in d.b[k]):
            total = total + power * TruncSeries("z", 0, INF, d.b[k])
    return total


def lift_matrix(d: DeformationDirection) -> SeriesMatrix:
    """B = sum r b_kl / ((-mr + lr + r + k) z^(m-l-1)) N^k."""
    r, m = d.r, d.m
    n_mat = companion(r)
    total = SeriesMatrix.zero(r)
    power = SeriesMatrix.identity(r)
    for k in range(r):
        if k:
            power = power * n_mat
        for l in range(m - 1):
            b = d.b[k][l]
            if b == 0:
                continue
            coef = Fraction(r) / (-m * r + l * r + r + k)
            total = total + power.shift(-(m - l - 1)) * (b * coef)
    return total


def correction_matrix(a: SeriesMatrix, b: SeriesMatrix, m: int) -> SeriesMatrix:
    """C = z^m dB/dz + [A, B]."""
    return b.d().shift(m) + commutator(a, b)


@dataclass(frozen=True)
class HorizontalLift:
    base: Connection
    ring: str
    B: dict
    C: dict
    B12: SeriesMatrix | None = None
    C12: SeriesMatrix | None = None
    window: object = None
    checks: dict = field(default_factory=dict)
    # eps1 part of the d eps2 coefficient when it differs from B12 (after a gauge)
    B21: SeriesMatrix | None = None

    def total_form(self) -> FormMatrix:
        a, m, ring = self.base.A, self.base.m, self.ring
        n = self.base.r
        if ring == "eps":
            dz = EpsMatrix(ring, {(0,): a.shift(-m), (1,): self.C[1].shift(-m)}, n)
            return FormMatrix(ring, dz, {1: EpsMatrix(ring, {(0,): self.B[1]}, n)})
        if ring == "eps1eps2":
            b12 = self.B12 if self.B12 is not None else SeriesMatrix.zero(n)
            c12 = self.C12 if self.C12 is not None else SeriesMatrix.zero(n)
            dz = EpsMatrix(ring, {
                (0, 0): a.shift(-m),
                (1, 0): self.C[1].shift(-m),
                (0, 1): self.C[2].shift(-m),
                (1, 1): c12.shift(-m),
            }, n)
            q1 = EpsMatrix(ring, {(0, 0): self.B[1], (0, 1): b12}, n)
            b21 = self.B21 if self.B21 is not None else b12
            q2 = EpsMatrix(ring, {(0, 0): self.B[2], (1, 0): b21}, n)
            return FormMatrix(ring, dz, {1: q1, 2: q2})
        raise DimensionMismatch(f"unsupported parameter ring {ring!r}")


def curvature(lift: HorizontalLift) -> TwoForm:
    return curvature_form(lift.total_form())


def is_flat(lift: HorizontalLift) -> bool:
    return curvature(lift).is_zero()


def _pole_order(mat: SeriesMatrix) -> int:
    v = mat.valuation()
    return 0 if v == INF or v >= 0 else -v


def agreement_window(a: SeriesMatrix, b: SeriesMatrix) -> object:
    """Largest w with a = b modulo z^w (capped at the common precision)."""
    diff = a - b
    return diff.valuation()


def lift_ramified(ac: AdaptedConnection, nu: RamifiedExponent, direction: DeformationDirection) -> HorizontalLift:
    if ac.depth < 2 * nu.m - 1:
        raise NotAdapted(f"lift needs depth >= 2m-1, got {ac.depth}")
    if (direction.r, direction.m) != (nu.r, nu.m):
        raise DimensionMismatch("direction shape differs from the exponent")
    b = lift_matrix(direction)
    c = correction_matrix(ac.A, b, nu.m)
    window = agreement_window(c, direction_matrix(direction).truncate(c.prec))
    checks = {
        "C_regular": c.valuation() >= 0,
        "B_pole_bound": _pole_order(b) <= nu.m - 1,
        "C_matches_direction": window >= min(nu.m, c.prec),
    }
    lift = HorizontalLift(ac.conn, "eps", {1: b}, {1: c}, window=window, checks=checks)
    checks["flat"] = is_flat(lift)
    return lift


def lift_two_param(ac: AdaptedConnection, nu: RamifiedExponent, dir1: DeformationDirection,
                   dir2: DeformationDirection, dir12: DeformationDirection | None = None) -> HorizontalLift:
    if ac.depth < 3 * nu.m - 1:
        raise NotAdapted(f"two-parameter lift needs depth >= 3m-1, got {ac.depth}")
    dir12 = dir12 if dir12 is not None else DeformationDirection.zero(nu.r, nu.m)
    m = nu.m
    b1, b2, b12 = lift_matrix(dir1), lift_matrix(dir2), lift_matrix(dir12)
    c1 = correction_matrix(ac.A, b1, m)
    c2 = correction_matrix(ac.A, b2, m)
    k12, k21 = commutator(c1, b2), commutator(c2, b1)
    c12 = correction_matrix(ac.A, b12, m) + k12
    checks = {
        "claim": k12 == k21 if k12.prec == k21.prec else k12.agrees(k21),
        "claim_valuation": k12.valuation() >= m + 1 and k21.valuation() >= m + 1,
        "B_commute": commutator(b1, b2).is_zero(),
        "C_regular": all(x.valuation() >= 0 for x in (c1, c2, c12)),
        "B_pole_bound": all(_pole_order(x) <= m - 1 for x in (b1, b2, b12)),
    }
    lift = HorizontalLift(ac.conn, "eps1eps2", {1: b1, 2: b2}, {1: c1, 2: c2}, b12, c12, checks=checks)
    checks["flat"] = is_flat(lift)
    return lift


def _primitive(coeffs: Sequence, m: int) -> TruncSeries:
    """Termwise primitive of sum_j c_j z^(j-m) dz; a dz/z term has none."""
    out = {}
    for j, c in enumerate(coeffs):
        if c == 0:
            continue
        e = j - m + 1
        if e == 0:
            raise ResidueDeformation("deformation with a dz/z term has no rational primitive")
        out[e] = simplify(scalar(c) / e)
    if not out:
        return TruncSeries.zero("z")
    lo = min(out)
    return TruncSeries("z", lo, INF, [out.get(e, Fraction(0)) for e in range(lo, max(out) + 1)])


def lift_unramified(diag_conn: Connection, mu_v: Sequence[Sequence]) -> HorizontalLift:
    """B = diag of the primitives of the deformed exponents mu_{k,v}."""
    r, m = diag_conn.r, diag_conn.m
    if len(mu_v) != r:
        raise DimensionMismatch(f"need {r} deformation forms")
    a = diag_conn.A
    window = min(2 * m - 1, diag_conn.prec)
    for i in range(r):
        for j in range(r):
            if i != j and a[i, j].valuation() < window:
                raise NotAdapted("connection is not diagonal modulo z^(2m-1)")
    leads = [a[i, i].coeff(0) for i in range(r)]
    if len(set(leads)) != r:
        raise NotAdapted("leading diagonal entries must be pairwise distinct")
    b = diag([_primitive(row, m) for row in mu_v])
    c = correction_matrix(a, b, m)
    lift = HorizontalLift(diag_conn, "eps", {1: b}, {1: c})
    lift.checks["flat"] = is_flat(lift)
    return lift


def lift_logarithmic(c: Connection, residues: Sequence) -> HorizontalLift:
    """At a logarithmic point the lift has B = 0 and C = 0."""
    if c.m != 1:
        raise NotLogarithmic(f"pole order {c.m} is not logarithmic")
    res = c.A.coefficient(0)
    r = c.r
    if len(residues) != r:
        raise DimensionMismatch(f"need {r} residues")
    for i in range(r):
        for j in range(i + 1, r):
            if res[i][j] != 0:
                raise NotLogarithmic("residue is not lower triangular in the given basis")
        if res[i][i] != scalar(residues[i]):
            raise NotLogarithmic(f"residue diagonal entry {i} is {res[i][i]}, expected {residues[i]}")
    zero = SeriesMatrix.zero(r)
    lift = HorizontalLift(c, "eps", {1: zero}, {1: zero})
    lift.checks["flat"] = is_flat(lift)
    return lift


def gauge_lift(lift: HorizontalLift, q: dict) -> HorizontalLift:
    """Apply I + sum eps_j Q_j (+ eps1 eps2 Q_12) and read back the lift matrices."""
    n, m = lift.base.r, lift.base.m
    form = lift.total_form()
    if lift.ring == "eps":
        g = EpsMatrix("eps", {(0,): SeriesMatrix.identity(n), (1,): q[1]}, n)
    else:
        g = EpsMatrix("eps1eps2", {(0, 0): SeriesMatrix.identity(n), (1, 0): q[1], (0, 1): q[2],
                                   (1, 1): q.get(12, SeriesMatrix.zero(n))}, n)
    out = form.gauge(g, prec=lift.base.prec)
    dz = out.dz_part
    if lift.ring == "eps":
        return HorizontalLift(lift.base, "eps", {1: out.q(1).coeff((0,))}, {1: dz.coeff((1,)).shift(m)})
    return HorizontalLift(
        lift.base, "eps1eps2",
        {1: out.q(1).coeff((0, 0)), 2: out.q(2).coeff((0, 0))},
        {1: dz.coeff((1, 0)).shift(m), 2: dz.coeff((0, 1)).shift(m)},
        out.q(1).coeff((0, 1)), dz.coeff((1, 1)).shift(m),
        B21=out.q(2).coeff((1, 0)),
    )


def _require_regular(mat: SeriesMatrix, name: str):
    if mat.valuation() < 0:
        raise NotEquivalent(f"{name} has a pole: the lifts are different deformations")


def uniqueness_transform(lift_a: HorizontalLift, lift_b: HorizontalLift) -> dict:
    """Regular Q with (I + eps Q) carrying lift_b to lift_a; keys 1, 2 and 12."""
    if lift_a.ring != lift_b.ring:
        raise NotEquivalent("lifts over different parameter rings")
    if not lift_a.base.A.agrees(lift_b.base.A):
        raise NotEquivalent("lifts over different base connections")
    if lift_a.ring == "eps":
        q = {1: lift_a.B[1] - lift_b.B[1]}
        _require_regular(q[1], "Q")
    else:
        q1 = lift_a.B[1] - lift_b.B[1]
        q2 = lift_a.B[2] - lift_b.B[2]
        _require_regular(q1, "Q_1")
        _require_regular(q2, "Q_2")
        b12a = lift_a.B12 if lift_a.B12 is not None else SeriesMatrix.zero(lift_a.base.r)
        b12b = lift_b.B12 if lift_b.B12 is not None else SeriesMatrix.zero(lift_a.base.r)
        q12 = b12a - b12b - commutator(lift_b.B[1], q2) + q2 * q1
        q = {1: q1, 2: q2, 12: q12}
    moved = gauge_lift(lift_b, q)
    if not moved.total_form().agrees(lift_a.total_form()):
        raise NotEquivalent("no regular gauge I + eps Q relates the two lifts")
    return q


def in_commutant(q: SeriesMatrix, m: int) -> bool:
    """Q mod z^m commutes with N, i.e. lies in O[N]."""
    n_mat = companion(q.n)
    lhs = commutator(q, n_mat).truncate(m)
    return lhs.is_zero()


@dataclass(frozen=True)
class BracketReport:
    checks: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def commutator_bracket_check(nu: RamifiedExponent, dir1: DeformationDirection, dir2: DeformationDirection,
                             ac: AdaptedConnection) -> BracketReport:
    one1 = lift_ramified(ac, nu, dir1)
    one2 = lift_ramified(ac, nu, dir2)
    sum_lift = lift_ramified(ac, nu, dir1 + dir2)
    two = lift_two_param(ac, nu, dir1, dir2)
    swapped = lift_two_param(ac, nu, dir2, dir1)
    checks = {
        "additive_B": sum_lift.B[1] == one1.B[1] + one2.B[1],
        "additive_C": sum_lift.C[1].agrees(one1.C[1] + one2.C[1]),
        "scaling_B": lift_ramified(ac, nu, dir1 * 3).B[1] == one1.B[1] * 3,
        "two_param_flat": two.checks["flat"],
        "claim": two.checks["claim"],
    }
    diag_form = two.total_form()
    restricted = HorizontalLift(
        ac.conn, "eps",
        {1: diag_form.q(1).substitute_diagonal().coeff((0,)) + diag_form.q(2).substitute_diagonal().coeff((0,))},
        {1: diag_form.dz_part.substitute_diagonal().coeff((1,)).shift(nu.m)},
    )
    try:
        q = uniqueness_transform(restricted, sum_lift)
        checks["diagonal_matches_sum"] = q[1].is_zero()
    except NotEquivalent:
        checks["diagonal_matches_sum"] = False
    antisym = two.C12 - swapped.C12
    zero_c = lift_ramified(ac, nu, DeformationDirection.zero(nu.r, nu.m)).C[1]
    checks["antisymmetrization_trivial"] = antisym.agrees(zero_c.truncate(antisym.prec))
    return BracketReport(checks)
