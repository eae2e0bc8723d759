import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from oracles import matrix_expr, rationals, to_sym
from ramicon.algebra.series import INF
from ramicon.connection import companion
from ramicon.errors import DegenerateLeading, DimensionMismatch, IllegalResidueTerm, RepeatedRoots
from ramicon.exponent import (
    DeformationDirection,
    RamifiedExponent,
    galois_twist,
    nu_numerator,
    unfold_exponent,
    unfolded_residue_spectrum,
    validate_exponent,
)
from ramicon.sampling import random_exponent

GRID = [(2, 2), (2, 3), (3, 2), (3, 3)]


def test_rank_and_order_bounds():
    with pytest.raises(DimensionMismatch):
        RamifiedExponent(1, 2, [[1, 0]])
    with pytest.raises(DimensionMismatch):
        RamifiedExponent(2, 1, [[1], [1]])


def test_degenerate_leading_term():
    with pytest.raises(DegenerateLeading):
        validate_exponent(RamifiedExponent.from_terms(2, 2, {(0, 0): 1}))


def test_only_nu0_may_have_a_residue():
    with pytest.raises(IllegalResidueTerm):
        validate_exponent(RamifiedExponent.from_terms(2, 2, {(1, 0): 1, (1, 1): 1}))
    validate_exponent(RamifiedExponent.from_terms(2, 2, {(1, 0): 1, (0, 1): 5}))


@pytest.mark.parametrize("r,m", GRID)
def test_nu_numerator_against_sympy(r, m):
    nu = random_exponent(r, m, random.Random(r * 7 + m))
    z = sp.Symbol("z")
    n = sp.zeros(r, r)
    for i in range(1, r):
        n[i, i - 1] = 1
    n[0, r - 1] = z
    expected = sp.zeros(r, r)
    for k in range(r):
        for l in range(m):
            expected += to_sym(nu.a[k][l]) * z**l * n**k
    got = matrix_expr(nu_numerator(nu, companion(r)))
    assert sp.simplify(got - expected) == sp.zeros(r, r)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_companion_power_is_z(r):
    n = companion(r)
    zid = companion(1)[0, 0]
    p = n.power(r)
    for i in range(r):
        for j in range(r):
            assert p[i, j] == (zid if i == j else 0 * zid)


@pytest.mark.parametrize("r,m", GRID)
def test_galois_twist_substitutes_zeta_w(r, m):
    nu = random_exponent(r, m, random.Random(m))
    j = 1
    tw = galois_twist(nu, j)
    zeta = sp.exp(2 * sp.pi * sp.I / r)
    for k in range(r):
        for l in range(m):
            diff = to_sym(tw.a[k][l]) - to_sym(nu.a[k][l]) * zeta ** (j * k)
            assert abs(complex(sp.N(diff, 50))) < 1e-40
    assert galois_twist(nu, r).a == nu.a


def test_direction_arithmetic():
    d = DeformationDirection.from_terms(2, 3, {(0, 0): 1, (1, 1): Fraction(1, 2)})
    e = DeformationDirection.from_terms(2, 3, {(1, 1): Fraction(-1, 2)})
    assert (d + e).b == DeformationDirection.from_terms(2, 3, {(0, 0): 1}).b
    assert (d * 0).is_zero()
    with pytest.raises(DimensionMismatch):
        d + DeformationDirection.zero(3, 3)


# ---- unfolding -----------------------------------------------------------------

@given(st.sampled_from(GRID), rationals.filter(lambda h: h != 0), st.data())
def test_unfolded_residues_against_sympy(rm, h, data):
    r, m = rm
    q = data.draw(st.lists(rationals.filter(lambda t: t != 1), min_size=m - 1, max_size=m - 1, unique=True))
    nu = random_exponent(r, m, random.Random(int(h.numerator) + 11))
    u = unfold_exponent(nu, h, q)
    z = sp.Symbol("z")
    roots = [to_sym(t) for t in u.roots()]
    if len(set(roots)) != len(roots):
        return
    den = sp.prod([z - t for t in roots])
    for k in range(r):
        num = sum((to_sym(c) * z**l for l, c in enumerate(nu.a[k])), sp.Integer(0))
        for j in range(1, m + 1):
            expected = sp.cancel(num / den * (z - roots[j - 1])).subs(z, roots[j - 1])
            assert to_sym(u.residue(k, j)) == expected


@pytest.mark.parametrize("r,m", GRID)
def test_specialization_at_zero_is_identity(r, m):
    nu = random_exponent(r, m, random.Random(3))
    u = unfold_exponent(nu, Fraction(1, 3), [Fraction(j + 2) for j in range(m - 1)])
    assert u.at(0).specialize() == nu
    for k in range(r):
        z = sp.Symbol("z")
        ser = u.at(0).expand(k, 2)
        num = sum((to_sym(c) * z**l for l, c in enumerate(nu.a[k])), sp.Integer(0))
        expected = sp.expand(num / z**m)
        for e in range(-m, 2):
            assert to_sym(ser.coeff(e)) == expected.coeff(z, e)


@given(st.sampled_from(GRID), rationals.filter(lambda h: h != 0))
def test_residue_spectrum_is_separable(rm, h):
    r, m = rm
    q = [Fraction(j + 2) for j in range(m - 1)]
    u = unfold_exponent(random_exponent(r, m, random.Random(1)), h, q)
    lam = sp.Symbol("lam")
    for j in range(1, m):
        spec = unfolded_residue_spectrum(u, j)
        expected = sp.Poly(lam**r - to_sym(h) ** r * (to_sym(q[j - 1]) - 1), lam)
        assert [to_sym(c) for c in spec.charpoly] == list(reversed(expected.all_coeffs()))
        assert spec.separable


def test_unfolding_input_errors():
    nu = random_exponent(2, 3, random.Random(0))
    with pytest.raises(RepeatedRoots):
        unfold_exponent(nu, 1, [2, 2])
    with pytest.raises(RepeatedRoots):
        unfold_exponent(nu, 1, [1, 2])
    with pytest.raises(DimensionMismatch):
        unfold_exponent(nu, 1, [2])
