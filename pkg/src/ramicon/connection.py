"""Connections d + A dz/z^m on a formal disk and their gauge transformations."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra.matrix import SeriesMatrix, diag
from .algebra.series import INF, TruncSeries
from .errors import DimensionMismatch, PrecisionExhausted, RamiconError, SingularGauge
from .exponent import RamifiedExponent, nu_numerator, validate_exponent


@dataclass(frozen=True)
class Connection:
    """d + A dz/z^m with A regular, known modulo var^prec."""

    r: int
    m: int
    A: SeriesMatrix
    prec: object = INF

    def __post_init__(self):
        if self.A.shape != (self.r, self.r):
            raise DimensionMismatch(f"matrix shape {self.A.shape} for rank {self.r}")
        if self.A.ord < 0:
            raise DimensionMismatch("A must be regular; the pole is carried by 1/z^m")
        prec = min(self.prec, self.A.prec)
        if prec < self.m:
            raise PrecisionExhausted(f"precision {prec} below the pole order {self.m}")
        object.__setattr__(self, "prec", prec)
        if prec != INF:
            object.__setattr__(self, "A", self.A.truncate(prec))

    @property
    def var(self) -> str:
        return self.A.var

    def truncate(self, prec) -> "Connection":
        return Connection(self.r, self.m, self.A, min(prec, self.prec))

    def form(self) -> SeriesMatrix:
        """The Laurent matrix A / var^m."""
        return self.A.shift(-self.m)

    def __eq__(self, other):
        if not isinstance(other, Connection):
            return NotImplemented
        return (self.r, self.m, self.prec) == (other.r, other.m, other.prec) and self.A == other.A

    __hash__ = None


@dataclass(frozen=True)
class Gauge:
    """Invertible change of basis P (its constant term must be invertible)."""

    P: SeriesMatrix
    eps_parts: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.P.shape[0] != self.P.shape[1]:
            raise DimensionMismatch("gauge must be square")
        if self.P.ord < 0:
            raise SingularGauge("gauge has a pole")
        from .algebra import linalg

        if linalg.det(self.P.coefficient(0)) == 0:
            raise SingularGauge("constant term of the gauge is singular")

    @classmethod
    def identity(cls, r: int, var: str = "z") -> "Gauge":
        return cls(SeriesMatrix.identity(r, var))

    def __mul__(self, other: "Gauge") -> "Gauge":
        return Gauge(self.P * other.P)

    def inverse(self, prec) -> "Gauge":
        return Gauge(self.P.inverse(prec))

    def truncate(self, prec) -> "Gauge":
        return Gauge(self.P.truncate(prec))

    def is_identity(self, upto=None) -> bool:
        p = self.P.prec if upto is None else upto
        return self.P.agrees(SeriesMatrix.identity(self.P.n, self.P.var), p)


def companion(r: int, q=INF, var: str = "z") -> SeriesMatrix:
    """Multiplication by w on the basis 1, w, ..., w^(r-1): ones below the diagonal, z in the corner."""
    rows = [[TruncSeries.zero(var) for _ in range(r)] for _ in range(r)]
    for i in range(1, r):
        rows[i][i - 1] = TruncSeries.const(1, var)
    corner = TruncSeries.monomial(1, 1, var)
    if r == 1:
        rows[0][0] = corner
    else:
        rows[0][r - 1] = rows[0][r - 1] + corner
    return SeriesMatrix(rows, var).truncate(q)


def residue_shift(r: int, var: str = "z") -> SeriesMatrix:
    """R_r = diag(0, 1/r, ..., (r-1)/r)."""
    return diag([TruncSeries.const(Fraction(i, r), var) for i in range(r)], var)


def normal_matrix(nu: RamifiedExponent, q=INF) -> Connection:
    """The normal form nu(N) + z^(m-1) R_r of a generic nu-ramified connection."""
    validate_exponent(nu)
    n_mat = companion(nu.r)
    a = nu_numerator(nu, n_mat) + residue_shift(nu.r).shift(nu.m - 1)
    return Connection(nu.r, nu.m, a, q)


def apply_gauge(a: SeriesMatrix, p: SeriesMatrix, m: int, prec) -> SeriesMatrix:
    """var^m P^-1 dP/dvar + P^-1 A P, known modulo var^prec."""
    if prec == INF:
        if p.top() > 1:
            raise PrecisionExhausted("a non-constant gauge needs a finite working precision")
        pinv = p.inverse()
    else:
        pinv = p.inverse(prec)
    out = pinv * (a * p + p.d().shift(m))
    return out.truncate(prec)


def gauge_transform(c: Connection, g: Gauge | SeriesMatrix) -> Connection:
    p = g.P if isinstance(g, Gauge) else g
    if p.shape != (c.r, c.r):
        raise DimensionMismatch("gauge and connection sizes differ")
    if p.ord < 0:
        raise SingularGauge("gauge has a pole")
    prec = min(c.prec, p.prec)
    return Connection(c.r, c.m, apply_gauge(c.A, p, c.m, prec), prec)


@dataclass(frozen=True)
class GenericityReport:
    generic: bool
    precision: object
    gauge: Gauge | None = None
    reason: str = ""


def nu_connection_operator_check(c: Connection, nu: RamifiedExponent, q) -> GenericityReport:
    """Whether c is generic nu-ramified modulo z^q, decided by running the normalization."""
    from .normalform import normalize

    try:
        gauge, _ = normalize(c, nu, q)
    except RamiconError as exc:
        return GenericityReport(False, q, None, f"{type(exc).__name__}: {exc}")
    return GenericityReport(True, q, gauge, "")
