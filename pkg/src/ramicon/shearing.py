"""Pullback to the r-fold cover w^r = z, the Vandermonde elementary transform,
Galois action of w -> zeta w, and Galois-averaged descent of lifts.

On the cover the frame e_k becomes w^k, and the Vandermonde matrix
V = (zeta^(jk) w^k) evaluates a polynomial in w at the r conjugate points
zeta^j w.  Hence V N V^-1 = diag(zeta^j w) and the normal form becomes diagonal.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra.cyclotomic import CycNum, simplify, zeta
from .algebra.forms import EpsMatrix, FormMatrix
from .algebra.matrix import SeriesMatrix, diag
from .algebra.series import INF, TruncSeries, from_w, to_w
from .connection import Connection, Gauge
from .errors import DimensionMismatch, NotDescendable, NotPullbackable, NotRamified
from .exponent import DeformationDirection, RamifiedExponent, validate_exponent


def pullback(c: Connection) -> Connection:
    """z = w^r: A(z) dz/z^m becomes r A(w^r) dw / w^(mr-r+1)."""
    if c.var != "z":
        raise DimensionMismatch("pullback expects a connection in z")
    r = c.r
    a_w = c.A.to_w(r) * r
    return Connection(r, c.m * r - r + 1, a_w, c.prec * r if c.prec != INF else INF)


@dataclass(frozen=True)
class VandermondeGauge:
    """V = Z S with S = diag(1, w, ..., w^(r-1)) and Z = (zeta^(jk)); Z^-1 = (zeta^(-jk)) / r."""

    r: int

    def z_matrix(self) -> list:
        return [[zeta(self.r, j * k) for k in range(self.r)] for j in range(self.r)]

    def z_inverse(self) -> list:
        return [[simplify(zeta(self.r, -j * k) / self.r) for k in range(self.r)] for j in range(self.r)]

    def matrix(self) -> SeriesMatrix:
        r = self.r
        return SeriesMatrix(
            [[TruncSeries.monomial(zeta(r, j * k), k, "w") for k in range(r)] for j in range(r)], "w"
        )

    def conjugate(self, x: SeriesMatrix) -> SeriesMatrix:
        """V X V^-1."""
        r = self.r
        sxs = SeriesMatrix([[x[j, k].shift(j - k) for k in range(r)] for j in range(r)], "w")
        return _const_conj(self.z_matrix(), sxs, self.z_inverse())

    def unconjugate(self, x: SeriesMatrix) -> SeriesMatrix:
        """V^-1 X V."""
        r = self.r
        y = _const_conj(self.z_inverse(), x, self.z_matrix())
        return SeriesMatrix([[y[j, k].shift(k - j) for k in range(r)] for j in range(r)], "w")

    def log_derivative(self) -> SeriesMatrix:
        """V^-1 dV/dw = diag(k / w)."""
        r = self.r
        return diag([TruncSeries.monomial(Fraction(k), -1, "w") if k else TruncSeries.zero("w") for k in range(r)], "w")


def _const_conj(left: list, x: SeriesMatrix, right: list) -> SeriesMatrix:
    lm = SeriesMatrix(left, x.var)
    rm = SeriesMatrix(right, x.var)
    return lm * x * rm


def vandermonde(r: int) -> VandermondeGauge:
    if r < 1:
        raise DimensionMismatch("rank must be positive")
    return VandermondeGauge(r)


def _nu0_w(nu: RamifiedExponent) -> TruncSeries:
    """r * nu_0 numerator evaluated at z = w^r."""
    return to_w(TruncSeries("z", 0, INF, nu.a[0]), nu.r) * nu.r


def lambda_form(nu: RamifiedExponent) -> SeriesMatrix:
    """Numerator of Lambda(w) dw / w^(mr-r): entries r sum_{k>=1} a_kl zeta^(jk) w^(lr+k-1)."""
    r, m = nu.r, nu.m
    entries = []
    for j in range(r):
        terms = {}
        for k in range(1, r):
            for l in range(m):
                a = nu.a[k][l]
                if a != 0:
                    e = l * r + k - 1
                    terms[e] = terms.get(e, Fraction(0)) + r * a * zeta(r, j * k)
        hi = max(terms, default=-1) + 1
        entries.append(TruncSeries("w", 0, INF, [simplify(terms.get(e, Fraction(0))) for e in range(hi)]))
    return diag(entries, "w")


@dataclass(frozen=True)
class ShearedConnection:
    base: Connection
    vandermonde_gauge: VandermondeGauge
    galois_marker: int
    normalizing_gauge: Gauge | None = None

    @property
    def matrix(self) -> SeriesMatrix:
        return self.base.A

    def is_diagonal(self) -> bool:
        r = self.base.r
        return all(self.base.A[i, j].is_zero() for i in range(r) for j in range(r) if i != j)

    def leading_terms(self) -> list:
        return [self.base.A[j, j].coeff(0) for j in range(self.base.r)]


def shear_matrix(a_z: SeriesMatrix, nu: RamifiedExponent, prec=INF) -> tuple:
    """(numerator, precision) of the sheared and twisted matrix, pole order mr - r."""
    r, m = nu.r, nu.m
    p = m * r - r + 1
    vg = vandermonde(r)
    a_w = a_z.to_w(r) * r
    conj = vg.conjugate(a_w)
    # - w^p V' V^-1 = - w^p Z diag(k/w) Z^-1
    deriv = _const_conj(vg.z_matrix(), vg.log_derivative(), vg.z_inverse()).shift(p)
    twisted = conj - deriv - SeriesMatrix.identity(r, "w") * _nu0_w(nu)
    wprec = INF if prec == INF else prec * r - (r - 1)
    twisted = twisted.truncate(wprec)
    for x in twisted.entries():
        if x.valuation() < 1:
            raise NotRamified("sheared matrix is not divisible by w")
    out = twisted.map(lambda x: x.with_ord(max(x.ord, 1)).shift(-1) if x.prec > 1 else x.shift(-1))
    return out, (INF if wprec == INF else wprec - 1)


def shear(c: Connection, nu: RamifiedExponent, q: int | None = None) -> ShearedConnection:
    """Normalize, pull back, apply the Vandermonde transform and the -nu_0 twist."""
    validate_exponent(nu)
    if (c.r, c.m) != (nu.r, nu.m):
        raise NotRamified("connection and exponent shapes differ")
    from .normalform import normalize

    gauge = None
    a = c.A
    prec = c.prec
    if c.A.prec != INF or not _is_normal(c, nu):
        q = q if q is not None else int(c.prec)
        gauge, out = normalize(c, nu, q)
        a, prec = out.A, q
    mat, wprec = shear_matrix(a, nu, prec)
    r, m = nu.r, nu.m
    base = Connection(r, m * r - r, mat, wprec)
    return ShearedConnection(base, vandermonde(r), r, gauge)


def _is_normal(c: Connection, nu: RamifiedExponent) -> bool:
    from .connection import normal_matrix

    return c.A == normal_matrix(nu).A


def galois_substitute(m: SeriesMatrix, j: int, r: int, pole: int | None = None) -> SeriesMatrix:
    """w -> zeta^j w entrywise; with a pole order p the dw/w^p factor contributes zeta^(j(1-p))."""
    z = zeta(r, j)
    out = m.subs_scale(z)
    if pole is not None:
        out = out * zeta(r, j * (1 - pole))
    return out


def galois_conjugate(m: SeriesMatrix, j: int, r: int | None = None, pole: int | None = None) -> SeriesMatrix:
    """Substitute w -> zeta^j w and conjugate by the branch permutation P e_i = e_(i+j)."""
    r = m.n if r is None else r
    sub = galois_substitute(m, j, r, pole)
    n = m.n
    return SeriesMatrix([[sub[(a - j) % n, (b - j) % n] for b in range(n)] for a in range(n)], m.var)


def galois_average(x: SeriesMatrix, r: int) -> SeriesMatrix:
    """(1/r) sum_j X(zeta^j w): keeps exactly the exponents divisible by r."""
    total = None
    for j in range(r):
        term = x.subs_scale(zeta(r, j))
        total = term if total is None else total + term
    return total * Fraction(1, r)


def _direction_exponent(d: DeformationDirection) -> RamifiedExponent:
    """nu_v packaged with the table shape of an exponent (no residue column)."""
    return RamifiedExponent(d.r, d.m, [list(row) + [0] for row in d.b])


def _primitive_w(x: TruncSeries, pole: int) -> TruncSeries:
    """Primitive of x dw / w^pole; the dw/w term must vanish."""
    out = []
    lo = x.ord - pole + 1
    for e, c in x.terms():
        k = e - pole + 1
        if k == 0:
            raise NotDescendable("w-side deformation has a dw/w term")
        out.append((k, c / k))
    if not out:
        return TruncSeries.zero("w")
    lo = min(k for k, _ in out)
    hi = max(k for k, _ in out) + 1
    table = dict(out)
    return TruncSeries("w", lo, INF, [table.get(e, Fraction(0)) for e in range(lo, hi)])


def lift_sheared(nu: RamifiedExponent, direction: DeformationDirection) -> FormMatrix:
    """Flat w-side lift of the split form: (Lambda + eps Lambda_v) dw/w^p + B' d(eps) with B' diagonal."""
    r, m = nu.r, nu.m
    p = m * r - r
    lam = lambda_form(nu)
    lam_v = lambda_form(_direction_exponent(direction)) if any(
        x != 0 for k in range(1, r) for x in direction.b[k]) else SeriesMatrix.zero(r, var="w")
    bprime = diag([_primitive_w(lam_v[j, j], p) for j in range(r)], "w")
    dz = EpsMatrix("eps", {(0,): lam.shift(-p), (1,): lam_v.shift(-p)}, r, "w")
    return FormMatrix("eps", dz, {1: EpsMatrix("eps", {(0,): bprime}, r, "w")})


def _descend_matrix(x: SeriesMatrix, r: int, what: str) -> SeriesMatrix:
    try:
        return x.from_w(r)
    except NotPullbackable as exc:
        raise NotDescendable(f"{what} is not Galois invariant: {exc}") from None


def descend(total: FormMatrix, nu: RamifiedExponent, direction: DeformationDirection) -> FormMatrix:
    """Carry a w-side lift of the split form back to a z-side lift in adapted gauge.

    The dz part is inverted through the Vandermonde transform and must already
    be invariant; the d(eps) part is Galois-averaged.  The scalar parts nu_0 and
    nu_(v,0), removed by the twist on the cover, are restored on the z side.
    """
    if total.ring != "eps" or total.var != "w":
        raise DimensionMismatch("descend expects a one-parameter form in w")
    r, m = nu.r, nu.m
    p = m * r - r
    vg = vandermonde(r)
    lam = total.dz_part.coeff((0,)).shift(p)
    lam_v = total.dz_part.coeff((1,)).shift(p)
    nu_v = _direction_exponent(direction)
    # r A(w^r) = V^-1 (w M + r nu_0) V + w^(p+1) V^-1 V'
    a_w = vg.unconjugate(lam.shift(1) + SeriesMatrix.identity(r, "w") * _nu0_w(nu)) + vg.log_derivative().shift(p + 1)
    c_w = vg.unconjugate(lam_v.shift(1) + SeriesMatrix.identity(r, "w") * _nu0_w(nu_v))
    a_z = _descend_matrix(a_w * Fraction(1, r), r, "dz part")
    c_z = _descend_matrix(c_w * Fraction(1, r), r, "eps dz part")
    bprime = total.q(1).coeff((0,))
    b_w = galois_average(vg.unconjugate(bprime), r)
    b_z = _descend_matrix(b_w, r, "averaged d(eps) part")
    scalar_part = _primitive_z(direction.b[0], m)
    b_z = b_z + SeriesMatrix.identity(r) * scalar_part
    dz = EpsMatrix("eps", {(0,): a_z.shift(-m), (1,): c_z.shift(-m)}, r)
    return FormMatrix("eps", dz, {1: EpsMatrix("eps", {(0,): b_z}, r)})


def _primitive_z(coeffs, m: int) -> TruncSeries:
    """Primitive of sum_l b_l z^(l-m) dz (l <= m-2, so no logarithm)."""
    terms = {}
    for l, b in enumerate(coeffs):
        if b != 0:
            e = l - m + 1
            terms[e] = b / e
    if not terms:
        return TruncSeries.zero("z")
    lo = min(terms)
    return TruncSeries("z", lo, INF, [terms.get(e, Fraction(0)) for e in range(lo, max(terms) + 1)])
