"""Independent sympy oracles shared by the test modules."""
from fractions import Fraction

import sympy as sp
from hypothesis import strategies as st

from ramicon.algebra.cyclotomic import CycNum

z, w, x = sp.symbols("z w x")

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)
small_ints = st.integers(min_value=-5, max_value=5)


def to_sym(c):
    if isinstance(c, CycNum):
        zeta = sp.exp(2 * sp.pi * sp.I / c.order)
        return sum((sp.Rational(a.numerator, a.denominator) * zeta**i for i, a in enumerate(c.coeffs)), sp.Integer(0))
    c = Fraction(c)
    return sp.Rational(c.numerator, c.denominator)


def cyc_poly(c: CycNum):
    """Element of Q(zeta_R) as a polynomial in x reduced modulo sympy's cyclotomic polynomial."""
    p = sum((sp.Rational(a.numerator, a.denominator) * x**i for i, a in enumerate(c.coeffs)), sp.Integer(0))
    return sp.rem(sp.Poly(p, x, domain="QQ"), sp.Poly(sp.cyclotomic_poly(c.order, x), x, domain="QQ"))


def poly_coeffs(expr, var, n):
    """Coefficients of var^0..var^(n-1) of a polynomial or series expression."""
    ser = sp.series(expr, var, 0, n).removeO() if n else sp.Integer(0)
    ser = sp.expand(ser)
    return [Fraction(str(sp.nsimplify(ser.coeff(var, i)))) for i in range(n)]


def series_expr(s, var=None):
    v = sp.Symbol(var or s.var)
    return sum((to_sym(c) * v**e for e, c in s.terms()), sp.Integer(0))


def matrix_expr(mat, var=None):
    return sp.Matrix([[series_expr(mat[i, j], var) for j in range(mat.shape[1])] for i in range(mat.shape[0])])


def sym_matrix(rows):
    return sp.Matrix([[to_sym(c) for c in row] for row in rows])
