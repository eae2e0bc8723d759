"""Dense univariate polynomials over Q or Q(zeta), lowest degree first."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import DivisionByZero


def trim(p: Sequence) -> list:
    out = list(p)
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(p: Sequence) -> int:
    """Degree, with -1 for the zero polynomial."""
    return len(trim(p)) - 1


def add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def sub(a: Sequence, b: Sequence) -> list:
    return add(a, [-x for x in b])


def mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x != 0:
            for j, y in enumerate(b):
                if y != 0:
                    out[i + j] += x * y
    return trim(out)


def divmod_(a: Sequence, b: Sequence) -> tuple[list, list]:
    a, b = trim(a), trim(b)
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
        a = trim(a)
    return trim(q), a


def gcd(a: Sequence, b: Sequence) -> list:
    """Monic gcd."""
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_(a, b)[1]
    if not a:
        return []
    lead = a[-1]
    return [x / lead for x in a]


def derivative(p: Sequence) -> list:
    return trim([i * p[i] for i in range(1, len(p))])


def evaluate(p: Sequence, x):
    acc = Fraction(0)
    for c in reversed(list(p)):
        acc = acc * x + c
    return acc


def is_separable(p: Sequence) -> bool:
    """No repeated roots over an algebraic closure (characteristic zero)."""
    if degree(p) < 1:
        return True
    return degree(gcd(p, derivative(p))) == 0


def from_roots(roots: Sequence) -> list:
    out: list = [Fraction(1)]
    for r in roots:
        out = mul(out, [-r, Fraction(1)])
    return out


def charpoly(m: Sequence[Sequence]) -> list:
    """det(x I - m) by the Faddeev-LeVerrier recursion."""
    n = len(m)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # mk <- m (mk + c_{n-k+1} I)
        shifted = [[mk[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        mk = [[sum((m[i][t] * shifted[t][j] for t in range(n)), Fraction(0)) for j in range(n)] for i in range(n)]
        tr = sum((mk[i][i] for i in range(n)), Fraction(0))
        coeffs[n - k] = -tr / k
    return coeffs
