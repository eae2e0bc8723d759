"""Exact scalars: rationals and elements of cyclotomic fields Q(zeta_R).

Rationals are plain :class:`fractions.Fraction`.  A :class:`CycNum` stores the
coordinates of an element of Q[x]/(Phi_R(x)) in the power basis
1, zeta, ..., zeta^(phi(R)-1).  Mixed arithmetic between a CycNum and an
int/Fraction coerces the rational into the field; two CycNums of different
order raise :class:`OrderMismatch`.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Sequence, Union

from ..errors import DivisionByZero, InvalidDocument, OrderMismatch

Rational = Fraction


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def _poly_exact_div_int(num: list[int], den: Sequence[int]) -> list[int]:
    """Divide integer polynomials (low degree first) by a monic divisor, exactly."""
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        out[i - dd] = c
        if c:
            for j, dc in enumerate(den):
                num[i - dd + j] -= c * dc
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Phi_n with integer coefficients, lowest degree first.

    Computed as (x^n - 1) divided by Phi_d for every proper divisor d.
    """
    if n < 1:
        raise ValueError("cyclotomic order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n):
        if d < n:
            poly = _poly_exact_div_int(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _reduce(coeffs: list, modulus: Sequence[int]) -> list:
    deg = len(modulus) - 1
    coeffs = list(coeffs)
    for i in range(len(coeffs) - 1, deg - 1, -1):
        c = coeffs[i]
        if c:
            coeffs[i] = 0
            for j in range(deg):
                if modulus[j]:
                    coeffs[i - deg + j] -= c * modulus[j]
    coeffs = coeffs[:deg]
    coeffs += [Fraction(0)] * (deg - len(coeffs))
    return coeffs


def _poly_trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a: list, b: list) -> tuple[list, list]:
    a = _poly_trim([Fraction(x) for x in a])
    b = _poly_trim([Fraction(x) for x in b])
    if not b:
        raise DivisionByZero("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        shift = len(a) - len(b)
        q[shift] = c
        for j, bc in enumerate(b):
            a[shift + j] -= c * bc
        a.pop()
        _poly_trim(a)
    return q, a


def _poly_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a: list, b: list) -> list:
    n = max(len(a), len(b))
    return _poly_trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)])


def _poly_inverse_mod(a: list, modulus: Sequence[int]) -> list:
    """Inverse of a modulo an irreducible modulus via the extended Euclidean algorithm."""
    r0, r1 = [Fraction(c) for c in modulus], _poly_trim([Fraction(c) for c in a])
    s0, s1 = [], [Fraction(1)]
    if not r1:
        raise DivisionByZero("division by zero in cyclotomic field")
    while r1:
        q, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    # r0 is a nonzero constant because the modulus is irreducible
    if len(r0) != 1:
        raise DivisionByZero("element is not invertible")
    inv_c = 1 / r0[0]
    return [c * inv_c for c in s0]


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, CycNum) and x.is_rational():
        return x.coeffs[0]
    raise TypeError(f"not a rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    """Parse "p/q" or "p"; reject zero denominators and stray characters."""
    if not isinstance(text, str):
        raise InvalidDocument(f"rational must be a string, got {type(text).__name__}")
    s = text.strip()
    parts = s.split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            num, den = int(parts[0]), int(parts[1])
            if den == 0:
                raise InvalidDocument(f"zero denominator in {text!r}")
            return Fraction(num, den)
    except ValueError:
        pass
    raise InvalidDocument(f"malformed rational {text!r}")


def render_rational(x: Fraction) -> str:
    x = as_rational(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class CycNum:
    """Immutable element of Q(zeta_order) in the power basis."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable = ()):
        if order < 1:
            raise ValueError("order must be positive")
        modulus = cyclotomic_polynomial(order)
        cs = [as_rational(c) for c in coeffs]
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", tuple(_reduce(cs, modulus)))

    def __setattr__(self, key, value):
        raise AttributeError("CycNum is immutable")

    @classmethod
    def zeta(cls, order: int, power: int = 1) -> "CycNum":
        power %= order
        return cls(order, [0] * power + [1])

    @classmethod
    def rational(cls, order: int, value) -> "CycNum":
        return cls(order, [as_rational(value)])

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _coerce(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.order != self.order:
                raise OrderMismatch(f"Q(zeta_{self.order}) vs Q(zeta_{other.order})")
            return other
        if isinstance(other, (int, Fraction)):
            return CycNum(self.order, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycNum(self.order, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.order, [-a for a in self.coeffs])

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycNum(self.order, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.order, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = _poly_mul(list(self.coeffs), list(o.coeffs))
        return CycNum(self.order, prod)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        if self.is_zero():
            raise DivisionByZero("division by zero in cyclotomic field")
        if self.is_rational():
            return CycNum(self.order, [1 / self.coeffs[0]])
        return CycNum(self.order, _poly_inverse_mod(list(self.coeffs), cyclotomic_polynomial(self.order)))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisionByZero("division by zero")
            return CycNum(self.order, [a / other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = CycNum(self.order, [1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CycNum):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def galois(self, j: int) -> "CycNum":
        """Apply the automorphism zeta -> zeta^j (j coprime to the order)."""
        if gcd(j, self.order) != 1:
            raise ValueError("Galois exponent must be a unit mod the order")
        out = [Fraction(0)] * (self.order)
        for i, c in enumerate(self.coeffs):
            out[(i * j) % self.order] += c
        return CycNum(self.order, out)

    def embed(self, order: int) -> "CycNum":
        """Image under Q(zeta_R) -> Q(zeta_order) for R dividing order."""
        if order % self.order:
            raise OrderMismatch(f"cannot embed Q(zeta_{self.order}) into Q(zeta_{order})")
        step = order // self.order
        out = [Fraction(0)] * (step * len(self.coeffs))
        for i, c in enumerate(self.coeffs):
            out[i * step] = c
        return CycNum(order, out)

    def __repr__(self):
        if self.is_rational():
            return f"CycNum({self.order}, {render_rational(self.coeffs[0])})"
        terms = [f"{render_rational(c)}*z^{i}" for i, c in enumerate(self.coeffs) if c]
        return f"CycNum({self.order}, {' + '.join(terms)})"


Scalar = Union[Fraction, CycNum]

_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": lambda a, b: a / b,
}


def cyc_arith(a: CycNum, b: CycNum, op: str) -> CycNum:
    if isinstance(a, CycNum) and isinstance(b, CycNum) and a.order != b.order:
        raise OrderMismatch(f"Q(zeta_{a.order}) vs Q(zeta_{b.order})")
    if op not in _OPS:
        raise ValueError(f"unknown operation {op!r}")
    if op == "div" and b == 0:
        raise DivisionByZero("division by zero")
    return _OPS[op](a, b)


def scalar(x) -> Scalar:
    """Normalize an int/Fraction/CycNum; rational CycNums stay CycNums."""
    if isinstance(x, (Fraction, CycNum)):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"unsupported scalar {x!r}")


def simplify(x: Scalar) -> Scalar:
    """Collapse a rational-valued CycNum to a Fraction (canonical form)."""
    if isinstance(x, CycNum) and x.is_rational():
        return x.coeffs[0]
    return x


def zeta(order: int, power: int = 1) -> Scalar:
    """zeta_order^power, as a Fraction when it happens to be rational."""
    return simplify(CycNum.zeta(order, power))
