"""Exponent data of generic ramified and unramified irregular singularities.

A ramified exponent of rank r and pole order m is the one-form

    nu(w) = sum_{k,l} a[k][l] z^l w^k dz / z^m,     w^r = z,

with 0 <= k < r and 0 <= l < m.  ``nu_k(z)`` collects the terms with a fixed k.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import poly
from .algebra.cyclotomic import CycNum, scalar, simplify, zeta
from .algebra.forms import FormMatrix
from .algebra.matrix import SeriesMatrix
from .algebra.series import INF, TruncSeries
from .errors import (
    DegenerateLeading,
    DimensionMismatch,
    IllegalResidueTerm,
    PrecisionExhausted,
    RepeatedRoots,
)


def _table(rows: Sequence[Sequence], nrows: int, ncols: int, what: str) -> tuple:
    if len(rows) != nrows or any(len(row) != ncols for row in rows):
        raise DimensionMismatch(f"{what} table must be {nrows}x{ncols}")
    return tuple(tuple(simplify(scalar(x)) for x in row) for row in rows)


def _zeta_like(r: int, power: int, ref):
    """zeta_r^power, embedded in the field of ``ref`` when ref is cyclotomic."""
    z = CycNum.zeta(r, power)
    if isinstance(ref, CycNum) and ref.order != r:
        return simplify(z.embed(ref.order))
    return simplify(z)


@dataclass(frozen=True)
class RamifiedExponent:
    r: int
    m: int
    a: tuple

    def __init__(self, r: int, m: int, a: Sequence[Sequence]):
        if r < 2:
            raise DimensionMismatch("ramified exponents need r >= 2")
        if m < 2:
            raise DimensionMismatch("ramified exponents need m >= 2")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "a", _table(a, r, m, "exponent"))

    @classmethod
    def from_terms(cls, r: int, m: int, terms: dict) -> "RamifiedExponent":
        """Build from {(k, l): a_kl}; missing terms are zero."""
        a = [[terms.get((k, l), Fraction(0)) for l in range(m)] for k in range(r)]
        return cls(r, m, a)

    def nu(self, k: int) -> list:
        """Coefficients of nu_k(z) * z^m / dz, lowest power first."""
        return list(self.a[k])

    @property
    def residue(self):
        return self.a[0][self.m - 1]

    def __str__(self):
        terms = [f"({x})*z^{l}*w^{k}" for k, row in enumerate(self.a) for l, x in enumerate(row) if x != 0]
        return " + ".join(terms or ["0"]) + f" dz/z^{self.m}"


def validate_exponent(nu: RamifiedExponent) -> None:
    if nu.a[1][0] == 0:
        raise DegenerateLeading("a_{1,0} = 0: the leading term of nu_1 vanishes")
    for k in range(1, nu.r):
        if nu.a[k][nu.m - 1] != 0:
            raise IllegalResidueTerm(f"a_{{{k},{nu.m - 1}}} != 0: only nu_0 may carry a dz/z term")


@dataclass(frozen=True)
class DeformationDirection:
    """nu_v(w) = sum b[k][l] z^l w^k dz / z^m with l <= m - 2."""

    r: int
    m: int
    b: tuple

    def __init__(self, r: int, m: int, b: Sequence[Sequence]):
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "b", _table(b, r, m - 1, "direction"))

    @classmethod
    def zero(cls, r: int, m: int) -> "DeformationDirection":
        return cls(r, m, [[0] * (m - 1) for _ in range(r)])

    @classmethod
    def from_terms(cls, r: int, m: int, terms: dict) -> "DeformationDirection":
        return cls(r, m, [[terms.get((k, l), Fraction(0)) for l in range(m - 1)] for k in range(r)])

    def _check(self, other: "DeformationDirection"):
        if (self.r, self.m) != (other.r, other.m):
            raise DimensionMismatch("directions of different shapes")

    def __add__(self, other: "DeformationDirection") -> "DeformationDirection":
        self._check(other)
        return DeformationDirection(
            self.r, self.m, [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(self.b, other.b)]
        )

    def __mul__(self, t) -> "DeformationDirection":
        t = scalar(t)
        return DeformationDirection(self.r, self.m, [[x * t for x in row] for row in self.b])

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.b for x in row)

    def as_exponent_terms(self) -> dict:
        return {(k, l): x for k, row in enumerate(self.b) for l, x in enumerate(row) if x != 0}


@dataclass(frozen=True)
class UnramifiedExponentTuple:
    """mu_k = sum_j mu[k][j] z^j dz / z^m for 0 <= k < r."""

    r: int
    m: int
    mu: tuple

    def __init__(self, r: int, m: int, mu: Sequence[Sequence]):
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "mu", _table(mu, r, m, "unramified exponent"))
        leads = [row[0] for row in self.mu]
        if m >= 2 and len(set(leads)) != r:
            raise DegenerateLeading("leading coefficients of the mu_k must be pairwise distinct")


def nu_numerator(nu: RamifiedExponent, n_mat: SeriesMatrix, prec=INF) -> SeriesMatrix:
    """sum_{k,l} a_kl z^l N^k as a matrix (the dz/z^m factor omitted)."""
    r = n_mat.n
    powers = [SeriesMatrix.identity(r, n_mat.var)]
    for _ in range(1, nu.r):
        powers.append((powers[-1] * n_mat).truncate(prec))
    total = SeriesMatrix.zero(r, var=n_mat.var)
    for k in range(nu.r):
        coeffs = nu.a[k]
        if all(x == 0 for x in coeffs):
            continue
        f = TruncSeries(n_mat.var, 0, INF, coeffs)
        total = total + powers[k] * f
    return total.truncate(prec)


def nu_of_matrix(nu: RamifiedExponent, n_mat: SeriesMatrix, q) -> FormMatrix:
    """(sum a_kl z^l N^k) dz / z^m as a dz-only form, numerator known mod z^q."""
    if q != INF and q <= 0:
        raise PrecisionExhausted("precision must be positive")
    num = nu_numerator(nu, n_mat, q)
    return FormMatrix.dz_only(num.shift(-nu.m))


def galois_twist(nu: RamifiedExponent, j: int) -> RamifiedExponent:
    """a_kl -> zeta_r^(jk) a_kl, i.e. nu(w) -> nu(zeta_r^j w)."""
    a = [[x * _zeta_like(nu.r, j * k, x) if x != 0 else x for x in row] for k, row in enumerate(nu.a)]
    return RamifiedExponent(nu.r, nu.m, [[simplify(x) for x in row] for row in a])


@dataclass(frozen=True)
class UnfoldedExponent:
    """nu_{k,h} = nu_k numerator * dz / ((z - h^r q_1) ... (z - h^r q_{m-1}) (z - h^r))."""

    base: RamifiedExponent
    h: object
    q: tuple

    def roots(self) -> list:
        hr = self.h ** self.base.r
        return [hr * qj for qj in self.q] + [hr]

    def denominator(self) -> list:
        """Coefficients of the denominator polynomial, lowest first."""
        out = poly.from_roots(self.roots())
        return [simplify(x) for x in out] + [0] * (self.base.m + 1 - len(out))

    def numerator(self, k: int) -> list:
        return list(self.base.a[k])

    def specialize(self) -> RamifiedExponent:
        """Read back the exponent when the denominator is z^m (h = 0)."""
        den = poly.trim(self.denominator())
        if den != [0] * self.base.m + [1]:
            raise ValueError("denominator is not z^m; set h = 0 first")
        return RamifiedExponent(self.base.r, self.base.m, [list(row) for row in self.base.a])

    def at(self, h) -> "UnfoldedExponent":
        return UnfoldedExponent(self.base, simplify(scalar(h)), self.q)

    def residue(self, k: int, j: int):
        """Residue of nu_{k,h} at its j-th pole (1-based; j = m is z = h^r)."""
        roots = self.roots()
        z0 = roots[j - 1]
        if sum(1 for x in roots if x == z0) > 1:
            raise RepeatedRoots("residue at a multiple pole")
        dprime = Fraction(1)
        for i, x in enumerate(roots):
            if i != j - 1:
                dprime = dprime * (z0 - x)
        return simplify(poly.evaluate(self.numerator(k), z0) / dprime)

    def expand(self, k: int, prec: int) -> TruncSeries:
        """Laurent expansion of the numerator/denominator quotient at z = 0 up to z^prec."""
        num = TruncSeries("z", 0, INF, self.numerator(k))
        den = TruncSeries("z", 0, INF, self.denominator())
        lead = den.valuation()
        if lead == INF:
            raise ValueError("zero denominator")
        den = den.with_ord(lead)
        return (num * den.inv(prec)).truncate(prec)


def unfold_exponent(nu: RamifiedExponent, h, q: Sequence) -> UnfoldedExponent:
    validate_exponent(nu)
    qs = tuple(simplify(scalar(x)) for x in q)
    if len(qs) != nu.m - 1:
        raise DimensionMismatch(f"need {nu.m - 1} values q_j, got {len(qs)}")
    if len(set(qs)) != len(qs):
        raise RepeatedRoots("the q_j must be pairwise distinct")
    if any(x == 1 for x in qs):
        raise RepeatedRoots("q_j = 1 collides with the pole at z = h^r")
    return UnfoldedExponent(nu, simplify(scalar(h)), qs)


@dataclass(frozen=True)
class ResidueSpectrum:
    charpoly: tuple
    separable: bool


def unfolded_residue_spectrum(u: UnfoldedExponent, j: int) -> ResidueSpectrum:
    """Characteristic polynomial of the N-part of the residue at z = h^r q_j.

    The N-part is the companion matrix with z - h^r in the corner, so its r-th
    power is (z - h^r) Id; it is evaluated at the pole z = h^r q_j (q_m = 1).
    """
    r, m = u.base.r, u.base.m
    if not 1 <= j <= m:
        raise DimensionMismatch(f"pole index {j} outside 1..{m}")
    qj = u.q[j - 1] if j < m else Fraction(1)
    hr = u.h ** r
    corner = hr * qj - hr
    mat = [[Fraction(0)] * r for _ in range(r)]
    for i in range(1, r):
        mat[i][i - 1] = Fraction(1)
    mat[0][r - 1] = corner
    cp = [simplify(x) for x in poly.charpoly(mat)]
    return ResidueSpectrum(tuple(cp), poly.is_separable(cp))
