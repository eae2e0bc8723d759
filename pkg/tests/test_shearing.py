import random
from fractions import Fraction

import pytest
import sympy as sp

from oracles import to_sym
from ramicon.algebra.cyclotomic import CycNum
from ramicon.algebra.forms import curvature_form
from ramicon.algebra.matrix import SeriesMatrix
from ramicon.connection import gauge_transform, normal_matrix
from ramicon.errors import NotDescendable, NotRamified
from ramicon.exponent import RamifiedExponent
from ramicon.isomonodromy import HorizontalLift, adapt, lift_ramified, uniqueness_transform
from ramicon.sampling import random_direction, random_exponent, random_gauge
from ramicon.shearing import (
    descend,
    galois_average,
    galois_conjugate,
    galois_substitute,
    lambda_form,
    lift_sheared,
    pullback,
    shear,
    vandermonde,
)

GRID = [(2, 2), (2, 3), (3, 2), (3, 3)]


def test_simplest_shear():
    nu = RamifiedExponent.from_terms(2, 2, {(1, 0): 1})
    sc = shear(normal_matrix(nu), nu)
    assert sc.base.m == 2 and sc.base.var == "w"
    assert sc.is_diagonal()
    assert sc.matrix[0, 0].coeffs == (2,) and sc.matrix[1, 1].coeffs == (-2,)


@pytest.mark.parametrize("r,m", GRID)
def test_shear_is_lambda(r, m):
    nu = random_exponent(r, m, random.Random(r * 3 + m))
    sc = shear(normal_matrix(nu), nu)
    assert sc.is_diagonal()
    assert sc.base.m == m * r - r
    assert sc.matrix == lambda_form(nu)
    leads = sc.leading_terms()
    assert len(set(leads)) == r


@pytest.mark.parametrize("r,m", GRID)
def test_lambda_against_numeric_oracle(r, m):
    nu = random_exponent(r, m, random.Random(m))
    lam = lambda_form(nu)
    w = sp.Symbol("w")
    zeta = sp.exp(2 * sp.pi * sp.I / r)
    for j in range(r):
        expected = sum((r * to_sym(nu.a[k][l]) * zeta ** (j * k) * w ** (l * r + k - 1)
                        for k in range(1, r) for l in range(m)), sp.Integer(0))
        got = sum((to_sym(c) * w**e for e, c in lam[j, j].terms()), sp.Integer(0))
        diff = sp.expand(got - expected)
        for e in range(m * r):
            assert abs(complex(sp.N(diff.coeff(w, e), 40))) < 1e-30


@pytest.mark.parametrize("r,m", GRID)
def test_galois_permutes_the_diagonal(r, m):
    nu = random_exponent(r, m, random.Random(1))
    lam = lambda_form(nu)
    p = m * r - r
    moved = galois_substitute(lam, 1, r, pole=p)
    for j in range(r):
        # the numerator alone picks up zeta^-1; the dw / w^p factor cancels it
        assert lam[j, j].subs_scale(CycNum.zeta(r)) * CycNum.zeta(r) == lam[(j + 1) % r, (j + 1) % r]
        assert moved[j, j] == lam[(j + 1) % r, (j + 1) % r]
    for j in range(r):
        assert galois_conjugate(lam, j, r, pole=p) == lam


@pytest.mark.parametrize("r,m", GRID)
def test_shear_of_scrambled_connection(r, m):
    rng = random.Random(r + m + 40)
    nu = random_exponent(r, m, rng)
    q = m + 2
    c = gauge_transform(normal_matrix(nu, q), random_gauge(r, q, rng))
    sc = shear(c, nu)
    assert sc.is_diagonal()
    assert sc.matrix.agrees(lambda_form(nu).truncate(sc.base.prec))


def test_shear_rejects_unramified_input():
    nu = RamifiedExponent.from_terms(2, 2, {(1, 0): 1})
    other = RamifiedExponent.from_terms(3, 2, {(1, 0): 1})
    with pytest.raises(NotRamified):
        shear(normal_matrix(other), nu)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_vandermonde_inverse(r):
    vg = vandermonde(r)
    from ramicon.algebra import linalg

    assert linalg.mat_mul(vg.z_matrix(), vg.z_inverse()) == linalg.identity(r)


def test_pullback_scales_by_r():
    nu = RamifiedExponent.from_terms(2, 2, {(1, 0): 1})
    pb = pullback(normal_matrix(nu))
    assert pb.m == 3 and pb.var == "w"
    # z = w^2 turns the constant N-coefficient w^0 into 2 N(w^2)
    assert pb.A[1, 0].coeff(0) == 2 and pb.A[0, 1].coeff(2) == 2


def test_galois_average_keeps_invariant_part():
    from ramicon.algebra.series import TruncSeries

    x = SeriesMatrix([[TruncSeries("w", 0, 6, [1, 2, 3, 4, 5, 6])]], "w")
    avg = galois_average(x, 2)
    assert [avg[0, 0].coeff(e) for e in range(6)] == [1, 0, 3, 0, 5, 0]


@pytest.mark.parametrize("r,m", GRID)
def test_descent_is_flat_and_matches_the_z_side_lift(r, m):
    rng = random.Random(r * 10 + m)
    nu = random_exponent(r, m, rng)
    d = random_direction(r, m, rng)
    w_side = lift_sheared(nu, d)
    assert curvature_form(w_side).is_zero()
    z_side = descend(w_side, nu, d)
    assert curvature_form(z_side).is_zero()
    _, ac = adapt(normal_matrix(nu, 2 * m - 1), nu, 2 * m - 1)
    ref = lift_ramified(ac, nu, d)
    b = z_side.q(1).coeff((0,))
    c = z_side.dz_part.coeff((1,)).shift(m)
    descended = HorizontalLift(ac.conn, "eps", {1: b}, {1: c.truncate(ac.conn.prec)})
    q = uniqueness_transform(ref, descended)
    assert q[1].is_zero()
    assert b == ref.B[1]


def test_descent_rejects_non_invariant_forms():
    from ramicon.algebra.forms import EpsMatrix, FormMatrix
    from ramicon.algebra.series import TruncSeries

    nu = RamifiedExponent.from_terms(2, 2, {(1, 0): 1})
    d = random_direction(2, 2, random.Random(0))
    good = lift_sheared(nu, d)
    lam = good.dz_part.coeff((0,))
    bump = SeriesMatrix([[TruncSeries("w", 0, 6, [0, 1]), 0], [0, 0]], "w")
    bad = FormMatrix("eps", EpsMatrix("eps", {(0,): lam + bump, (1,): good.dz_part.coeff((1,))}, 2, "w"),
                     {1: good.q(1)})
    with pytest.raises(NotDescendable):
        descend(bad, nu, d)
