"""Dense exact linear algebra over Q or Q(zeta_R).

Matrices are lists of row lists.  Everything here works on any field
elements supporting + - * / and comparison with 0.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from ..errors import SingularSystem

Matrix = list


def zeros(rows: int, cols: int) -> Matrix:
    return [[Fraction(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = zeros(len(a), cols)
    for i, row in enumerate(a):
        orow = out[i]
        for k in range(inner):
            x = row[k]
            if x == 0:
                continue
            brow = b[k]
            for j in range(cols):
                y = brow[j]
                if y != 0:
                    orow[j] += x * y
    return out


def mat_vec(a: Matrix, v: Sequence) -> list:
    return [sum((x * y for x, y in zip(row, v) if x != 0 and y != 0), Fraction(0)) for row in a]


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, c) -> Matrix:
    return [[x * c for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(row) for row in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                mi, mr = m[i], m[r]
                m[i] = [x - f * y for x, y in zip(mi, mr)]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(rref(a)[1])


def nullspace(a: Matrix, cols: int | None = None) -> list[list]:
    """Basis of {x : a x = 0}; free variables set to unit vectors in order."""
    if cols is None:
        cols = len(a[0]) if a else 0
    if not a:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    m, pivots = rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -m[r][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence, cols: int | None = None) -> list:
    """One solution of a x = b with free variables set to zero.

    Raises SingularSystem when the system is inconsistent.
    """
    if cols is None:
        cols = len(a[0]) if a else 0
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    m, pivots = rref(aug) if aug else ([], [])
    if cols in pivots:
        raise SingularSystem("inconsistent linear system")
    x = [Fraction(0)] * cols
    for r, p in enumerate(pivots):
        x[p] = m[r][cols]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    m, pivots = rref(aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        raise SingularSystem("matrix is singular")
    return [row[n:] for row in m]


def det(a: Matrix):
    m = [list(row) for row in a]
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d = d * m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return d


def column_space_basis(vectors: list[list]) -> list[int]:
    """Indices of a maximal independent subfamily, chosen greedily in order."""
    chosen: list[int] = []
    current: list[list] = []
    r = 0
    for i, v in enumerate(vectors):
        trial = current + [list(v)]
        rk = rank(trial)
        if rk > r:
            chosen.append(i)
            current = trial
            r = rk
    return chosen
