"""Truncated Laurent series with explicit precision.

A series is ``sum_{e >= ord} c_e var^e + O(var^prec)``.  The stored
coefficient tuple covers exponents ``ord .. ord+len-1``; exponents between
the end of the tuple and ``prec`` are known zeros, exponents at or beyond
``prec`` are unknown.  ``prec`` may be ``math.inf`` for exact (polynomial or
Laurent polynomial) values.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import (
    NonUnitLeading,
    NotPullbackable,
    PrecisionExhausted,
    VariableMismatch,
)
from .cyclotomic import CycNum, Scalar, scalar

INF = math.inf
VARIABLES = ("z", "w")


class TruncSeries:
    __slots__ = ("var", "ord", "prec", "coeffs")

    def __init__(self, var: str, ord: int, prec, coeffs: Iterable = ()):
        if var not in VARIABLES:
            raise ValueError(f"unknown variable {var!r}")
        if prec != INF:
            prec = int(prec)
        if not prec > ord:
            raise PrecisionExhausted(f"precision {prec} does not exceed order {ord}")
        cs = [scalar(c) for c in coeffs]
        if prec != INF and len(cs) > prec - ord:
            cs = cs[: prec - ord]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "var", var)
        object.__setattr__(self, "ord", int(ord))
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, key, value):
        raise AttributeError("TruncSeries is immutable")

    # ---- constructors -------------------------------------------------
    @classmethod
    def zero(cls, var: str = "z", prec=INF, ord: int = 0) -> "TruncSeries":
        return cls(var, ord, prec, ())

    @classmethod
    def const(cls, c, var: str = "z", prec=INF) -> "TruncSeries":
        return cls(var, 0, prec, (c,))

    @classmethod
    def monomial(cls, c, e: int, var: str = "z", prec=INF) -> "TruncSeries":
        return cls(var, e, prec, (c,))

    @classmethod
    def poly(cls, coeffs: Sequence, var: str = "z", prec=INF, ord: int = 0) -> "TruncSeries":
        return cls(var, ord, prec, coeffs)

    # ---- inspection ---------------------------------------------------
    def coeff(self, e: int):
        if e >= self.prec:
            raise PrecisionExhausted(f"coefficient of {self.var}^{e} is beyond precision {self.prec}")
        i = e - self.ord
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __getitem__(self, e: int):
        return self.coeff(e)

    @property
    def is_exact(self) -> bool:
        return self.prec == INF

    def top(self) -> int:
        """One past the largest exponent with a stored coefficient."""
        return self.ord + len(self.coeffs)

    def valuation(self):
        """Smallest exponent with nonzero coefficient, or prec if none is known."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return self.ord + i
        return self.prec

    def is_zero(self) -> bool:
        """All known coefficients vanish."""
        return all(c == 0 for c in self.coeffs)

    def terms(self):
        """(exponent, coefficient) pairs of nonzero stored coefficients."""
        return [(self.ord + i, c) for i, c in enumerate(self.coeffs) if c != 0]

    def __repr__(self):
        body = " + ".join(f"({c})*{self.var}^{e}" for e, c in self.terms()) or "0"
        tail = "" if self.is_exact else f" + O({self.var}^{self.prec})"
        return f"TruncSeries({body}{tail}; ord={self.ord})"

    # ---- comparison ---------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = TruncSeries.const(other, self.var, self.prec)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.var != other.var or self.prec != other.prec:
            return False
        return self.agrees(other, self.prec)

    __hash__ = None

    def agrees(self, other: "TruncSeries", upto=None) -> bool:
        """Coefficients agree for every exponent below ``upto`` (default: common precision)."""
        _check_var(self, other)
        limit = min(self.prec, other.prec) if upto is None else upto
        if limit > min(self.prec, other.prec):
            raise PrecisionExhausted(f"cannot compare beyond precision {min(self.prec, other.prec)}")
        lo = min(self.ord, other.ord)
        hi = max(self.top(), other.top())
        if limit != INF:
            hi = min(hi, int(limit))
        for e in range(lo, hi):
            if self.coeff(e) != other.coeff(e):
                return False
        return True

    # ---- ring operations ---------------------------------------------
    def __neg__(self):
        return TruncSeries(self.var, self.ord, self.prec, [-c for c in self.coeffs])

    def __add__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = TruncSeries.const(other, self.var)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        _check_var(self, other)
        prec = min(self.prec, other.prec)
        ord_ = min(self.ord, other.ord)
        hi = max(self.top(), other.top())
        if prec != INF:
            hi = min(hi, int(prec))
        cs = [Fraction(0)] * max(hi - ord_, 0)
        for i, c in enumerate(self.coeffs):
            if self.ord + i < hi:
                cs[self.ord + i - ord_] += c
        for i, c in enumerate(other.coeffs):
            if other.ord + i < hi:
                cs[other.ord + i - ord_] += c
        return TruncSeries(self.var, ord_, prec, cs)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            other = TruncSeries.const(other, self.var)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncSeries":
        c = scalar(c)
        if c == 0:
            return TruncSeries(self.var, self.ord, self.prec, ())
        return TruncSeries(self.var, self.ord, self.prec, [x * c for x in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(other)
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return series_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, CycNum)):
            return self.scale(1 / scalar(other))
        if not isinstance(other, TruncSeries):
            return NotImplemented
        if self.is_exact:
            return self * series_inv(other)
        return self * series_inv(other, prec=self.prec - self.ord - other.ord)

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use series_inv for negative powers")
        result = TruncSeries.const(1, self.var)
        for _ in range(n):
            result = result * self
        return result

    # ---- shape changes -----------------------------------------------
    def truncate(self, prec) -> "TruncSeries":
        """Forget coefficients at exponents >= prec (prec may only decrease)."""
        return TruncSeries(self.var, self.ord, min(prec, self.prec), self.coeffs)

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by var^k."""
        return TruncSeries(self.var, self.ord + k, self.prec + k, self.coeffs)

    def with_ord(self, ord: int) -> "TruncSeries":
        """Re-declare the lowest exponent (the dropped coefficients must vanish)."""
        if ord > self.ord:
            for e in range(self.ord, min(ord, self.top())):
                if self.coeff(e) != 0:
                    raise ValueError("cannot raise ord above a nonzero coefficient")
            return TruncSeries(self.var, ord, self.prec, self.coeffs[ord - self.ord:])
        return TruncSeries(self.var, ord, self.prec, [Fraction(0)] * (self.ord - ord) + list(self.coeffs))

    def map_coeffs(self, f) -> "TruncSeries":
        return TruncSeries(self.var, self.ord, self.prec, [f(c) for c in self.coeffs])

    def subs_scale(self, c) -> "TruncSeries":
        """Substitute var -> c*var."""
        c = scalar(c)
        out = []
        p = c ** self.ord if self.ord >= 0 else (1 / c) ** (-self.ord)
        for x in self.coeffs:
            out.append(x * p)
            p = p * c
        return TruncSeries(self.var, self.ord, self.prec, out)

    def relabel(self, var: str) -> "TruncSeries":
        return TruncSeries(var, self.ord, self.prec, self.coeffs)

    def d(self) -> "TruncSeries":
        return series_d_dz(self)

    def inv(self, prec=None) -> "TruncSeries":
        return series_inv(self, prec)


def _check_var(a: TruncSeries, b: TruncSeries):
    if a.var != b.var:
        raise VariableMismatch(f"series in {a.var} and {b.var}")


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    _check_var(a, b)
    ord_ = a.ord + b.ord
    prec = min(a.prec + b.ord, b.prec + a.ord)
    la, lb = len(a.coeffs), len(b.coeffs)
    n = la + lb - 1 if la and lb else 0
    if prec != INF:
        n = min(n, int(prec) - ord_)
    cs = [Fraction(0)] * max(n, 0)
    for i, x in enumerate(a.coeffs):
        if x == 0 or i >= n:
            continue
        for j in range(min(lb, n - i)):
            y = b.coeffs[j]
            if y != 0:
                cs[i + j] += x * y
    return TruncSeries(a.var, ord_, prec, cs)


def series_inv(a: TruncSeries, prec=None) -> TruncSeries:
    """Multiplicative inverse; the coefficient at ``a.ord`` must be nonzero.

    For an exact input whose inverse is not a monomial an explicit target
    ``prec`` is required.
    """
    lead = a.coeff(a.ord) if a.ord < a.prec else 0
    if lead == 0:
        raise NonUnitLeading(f"coefficient of {a.var}^{a.ord} is zero")
    o = a.ord
    rel = a.prec - o  # relative precision of the unit part
    if rel == INF:
        if len(a.coeffs) == 1:
            return TruncSeries(a.var, -o, INF, (1 / lead,))
        if prec is None:
            raise PrecisionExhausted("inverse of a non-monomial exact series needs a target precision")
        rel = prec + o
        if rel <= 0:
            raise PrecisionExhausted("target precision below the inverse's order")
    elif prec is not None:
        rel = min(rel, prec + o)
    rel = int(rel)
    u = a.coeffs
    inv_lead = 1 / lead
    out = [inv_lead]
    for n in range(1, rel):
        acc = Fraction(0)
        for j in range(1, min(n, len(u) - 1) + 1):
            if u[j] != 0:
                acc += u[j] * out[n - j]
        out.append(-acc * inv_lead)
    return TruncSeries(a.var, -o, -o + rel, out)


def series_d_dz(a: TruncSeries) -> TruncSeries:
    """Derivative in the series' own variable; precision drops by one."""
    new_ord = a.ord - 1 if a.ord != 0 else 0
    prec = a.prec - 1
    if not prec > new_ord:
        raise PrecisionExhausted("derivative leaves no known coefficients")
    cs = []
    for e in range(new_ord, a.top() - 1):
        cs.append((e + 1) * a.coeff(e + 1) if e + 1 >= a.ord else Fraction(0))
    return TruncSeries(a.var, new_ord, prec, cs)


def to_w(a: TruncSeries, r: int) -> TruncSeries:
    """Relabel z^e as w^(r e)."""
    if a.var != "z":
        raise VariableMismatch("to_w expects a z-series")
    cs = []
    for i, c in enumerate(a.coeffs):
        if i:
            cs.extend([Fraction(0)] * (r - 1))
        cs.append(c)
    prec = a.prec * r if a.prec != INF else INF
    return TruncSeries("w", a.ord * r, prec, cs)


def from_w(a: TruncSeries, r: int) -> TruncSeries:
    """Inverse of :func:`to_w`; every exponent with nonzero coefficient must be divisible by r.

    The precision becomes ceil(prec / r): a z-exponent e is known iff r*e < prec.
    """
    if a.var != "w":
        raise VariableMismatch("from_w expects a w-series")
    for e, c in a.terms():
        if e % r:
            raise NotPullbackable(f"w^{e} is not a power of z = w^{r}")
    ord_ = -((-a.ord) // r)
    prec = INF if a.prec == INF else -((-a.prec) // r)
    hi = -((-a.top()) // r)
    cs = [a.coeff(r * e) for e in range(ord_, hi)]
    if prec != INF:
        cs = cs[: max(prec - ord_, 0)]
    return TruncSeries("z", ord_, prec, cs)


def series(coeffs: Sequence, var: str = "z", prec=INF, ord: int = 0) -> TruncSeries:
    return TruncSeries(var, ord, prec, coeffs)


def scalar_series(c, var="z") -> TruncSeries:
    return TruncSeries.const(c, var)
