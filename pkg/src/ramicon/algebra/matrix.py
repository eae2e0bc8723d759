"""Matrices whose entries are truncated series in one variable."""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Sequence

from ..errors import DimensionMismatch, PrecisionExhausted, SingularGauge, SingularSystem, VariableMismatch
from . import linalg
from .cyclotomic import CycNum, scalar
from .series import INF, TruncSeries, from_w, series_d_dz, to_w


def _as_series(x, var: str) -> TruncSeries:
    if isinstance(x, TruncSeries):
        if x.var != var:
            raise VariableMismatch(f"entry in {x.var}, matrix in {var}")
        return x
    return TruncSeries.const(scalar(x), var)


class SeriesMatrix:
    __slots__ = ("var", "rows")

    def __init__(self, entries: Iterable[Iterable], var: str = "z"):
        rows = tuple(tuple(_as_series(x, var) for x in row) for row in entries)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise DimensionMismatch("ragged or empty matrix")
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, key, value):
        raise AttributeError("SeriesMatrix is immutable")

    # ---- constructors -------------------------------------------------
    @classmethod
    def identity(cls, n: int, var: str = "z") -> "SeriesMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)], var)

    @classmethod
    def zero(cls, rows: int, cols: int | None = None, var: str = "z", prec=INF) -> "SeriesMatrix":
        cols = rows if cols is None else cols
        return cls([[TruncSeries.zero(var, prec) for _ in range(cols)] for _ in range(rows)], var)

    @classmethod
    def constant(cls, m: Sequence[Sequence], var: str = "z") -> "SeriesMatrix":
        return cls(m, var)

    @classmethod
    def from_coefficients(cls, coeffs: dict, n: int, var: str = "z", prec=INF, cols: int | None = None) -> "SeriesMatrix":
        """Build sum_e var^e * coeffs[e] from constant coefficient matrices."""
        cols = n if cols is None else cols
        if coeffs:
            lo = min(coeffs)
            hi = max(coeffs) + 1
        else:
            lo = hi = 0
        if prec != INF:
            hi = min(hi, prec)
        entries = []
        for i in range(n):
            row = []
            for j in range(cols):
                cs = [coeffs[e][i][j] if e in coeffs else Fraction(0) for e in range(lo, hi)]
                row.append(TruncSeries(var, lo, prec, cs))
            entries.append(row)
        return cls(entries, var)

    # ---- inspection ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def n(self) -> int:
        return len(self.rows)

    def __getitem__(self, ij) -> TruncSeries:
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for row in self.rows:
            yield from row

    @property
    def prec(self):
        return min(x.prec for x in self.entries())

    @property
    def ord(self) -> int:
        return min(x.ord for x in self.entries())

    def valuation(self):
        """Smallest exponent carrying a nonzero coefficient (prec when all known ones vanish)."""
        return min(x.valuation() for x in self.entries())

    def top(self) -> int:
        return max(x.top() for x in self.entries())

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.entries())

    def coefficient(self, e: int) -> list:
        """Constant matrix of the var^e coefficients."""
        return [[x.coeff(e) for x in row] for row in self.rows]

    def coefficient_dict(self, upto=None) -> dict:
        hi = self.top() if upto is None else upto
        if self.prec != INF:
            hi = min(hi, self.prec)
        return {e: self.coefficient(e) for e in range(self.ord, hi)}

    def agrees(self, other: "SeriesMatrix", upto=None) -> bool:
        self._check(other)
        return all(a.agrees(b, upto) for a, b in zip(self.entries(), other.entries()))

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.var == other.var and self.shape == other.shape and all(
            a == b for a, b in zip(self.entries(), other.entries())
        )

    __hash__ = None

    def __repr__(self):
        return "SeriesMatrix(" + "; ".join(", ".join(repr(x) for x in row) for row in self.rows) + ")"

    def _check(self, other: "SeriesMatrix"):
        if self.var != other.var:
            raise VariableMismatch(f"matrices in {self.var} and {other.var}")

    # ---- algebra ------------------------------------------------------
    def map(self, f: Callable[[TruncSeries], TruncSeries]) -> "SeriesMatrix":
        return SeriesMatrix([[f(x) for x in row] for row in self.rows], self.var)

    def __add__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch("shape mismatch in addition")
        return SeriesMatrix([[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)], self.var)

    def __neg__(self):
        return self.map(lambda x: -x)

    def __sub__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.map(lambda x: x.scale(other))
        if isinstance(other, TruncSeries):
            return self.map(lambda x: x * other)
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        self._check(other)
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch("shape mismatch in product")
        rows = []
        cols = other.shape[1]
        for row in self.rows:
            out = []
            for j in range(cols):
                acc = None
                for k, a in enumerate(row):
                    b = other.rows[k][j]
                    if a.is_zero() and a.is_exact and b.prec == INF:
                        continue
                    if b.is_zero() and b.is_exact and a.prec == INF:
                        continue
                    t = a * b
                    acc = t if acc is None else acc + t
                out.append(acc if acc is not None else TruncSeries.zero(self.var))
            rows.append(out)
        return SeriesMatrix(rows, self.var)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycNum, TruncSeries)):
            return self * other
        return NotImplemented

    def transpose(self) -> "SeriesMatrix":
        return SeriesMatrix(list(zip(*self.rows)), self.var)

    T = property(transpose)

    def d(self) -> "SeriesMatrix":
        return self.map(series_d_dz)

    def truncate(self, prec) -> "SeriesMatrix":
        return self.map(lambda x: x.truncate(prec))

    def shift(self, k: int) -> "SeriesMatrix":
        return self.map(lambda x: x.shift(k))

    def subs_scale(self, c) -> "SeriesMatrix":
        return self.map(lambda x: x.subs_scale(c))

    def to_w(self, r: int) -> "SeriesMatrix":
        return SeriesMatrix([[to_w(x, r) for x in row] for row in self.rows], "w")

    def from_w(self, r: int) -> "SeriesMatrix":
        return SeriesMatrix([[from_w(x, r) for x in row] for row in self.rows], "z")

    def power(self, k: int) -> "SeriesMatrix":
        result = SeriesMatrix.identity(self.n, self.var)
        for _ in range(k):
            result = result * self
        return result

    def inverse(self, prec=None) -> "SeriesMatrix":
        """Inverse of a matrix with regular entries and invertible constant term.

        Exact inputs need a target precision unless the inverse is constant.
        """
        n = self.n
        if self.shape[1] != n:
            raise DimensionMismatch("inverse of a non-square matrix")
        if self.ord < 0:
            raise SingularGauge("inverse requires regular entries")
        p = self.prec
        if prec is not None:
            p = min(p, prec)
        if p == INF:
            if self.top() <= 1:
                try:
                    return SeriesMatrix(linalg.inverse(self.coefficient(0)), self.var)
                except SingularSystem as exc:
                    raise SingularGauge("constant term is singular") from exc
            raise PrecisionExhausted("inverse of an exact non-constant matrix needs a target precision")
        p = int(p)
        if p <= 0:
            raise PrecisionExhausted("no precision left for the inverse")
        coeffs = [self.coefficient(e) for e in range(min(p, self.top()))]
        try:
            inv0 = linalg.inverse(coeffs[0])
        except SingularSystem as exc:
            raise SingularGauge("constant term is singular") from exc
        xs = [inv0]
        for k in range(1, p):
            acc = linalg.zeros(n, n)
            for j in range(1, min(k, len(coeffs) - 1) + 1):
                acc = linalg.mat_add(acc, linalg.mat_mul(coeffs[j], xs[k - j]))
            xs.append(linalg.mat_scale(linalg.mat_mul(inv0, acc), -1))
        return SeriesMatrix.from_coefficients(dict(enumerate(xs)), n, self.var, p)


def commutator(a: SeriesMatrix, b: SeriesMatrix) -> SeriesMatrix:
    return a * b - b * a


def diag(entries: Sequence, var: str = "z") -> SeriesMatrix:
    n = len(entries)
    return SeriesMatrix(
        [[entries[i] if i == j else TruncSeries.zero(var) for j in range(n)] for i in range(n)], var
    )


def scalar_matrix(s: TruncSeries, n: int) -> SeriesMatrix:
    return diag([s] * n, s.var)
