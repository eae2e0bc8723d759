import random
from fractions import Fraction

import pytest
import sympy as sp

from oracles import matrix_expr, to_sym
from ramicon.algebra.matrix import SeriesMatrix
from ramicon.algebra.series import TruncSeries
from ramicon.connection import (
    Connection,
    Gauge,
    companion,
    gauge_transform,
    normal_matrix,
    nu_connection_operator_check,
    residue_shift,
)
from ramicon.errors import DimensionMismatch, PrecisionExhausted, SingularGauge
from ramicon.exponent import RamifiedExponent
from ramicon.sampling import random_exponent, random_gauge, scrambled_normal_form

GRID = [(2, 2), (2, 3), (3, 2), (3, 3)]


def test_normal_form_of_simplest_exponent():
    nu = RamifiedExponent.from_terms(2, 2, {(1, 0): 1})
    a = normal_matrix(nu).A
    assert a.coefficient(0) == [[0, 0], [1, 0]]
    assert a.coefficient(1) == [[0, 1], [0, Fraction(1, 2)]]


def test_residue_shift_entries():
    assert [residue_shift(3)[i, i].coeff(0) for i in range(3)] == [0, Fraction(1, 3), Fraction(2, 3)]


@pytest.mark.parametrize("r,m", GRID)
def test_gauge_transform_against_sympy(r, m):
    rng = random.Random(r + 10 * m)
    q = m + 2
    nu = random_exponent(r, m, rng)
    g = random_gauge(r, q, rng)
    c = normal_matrix(nu, q)
    out = gauge_transform(c, g)
    z = sp.Symbol("z")
    p = matrix_expr(g.P)
    a = matrix_expr(c.A)
    # P A' = z^m P' + A P modulo z^q, with no inverse needed
    resid = (p * matrix_expr(out.A) - z**m * p.diff(z) - a * p).applyfunc(sp.expand)
    for i in range(r):
        for j in range(r):
            for e in range(q):
                assert resid[i, j].coeff(z, e) == 0
    assert out.prec == q


def test_gauge_composition():
    rng = random.Random(4)
    nu = random_exponent(2, 2, rng)
    c = normal_matrix(nu, 5)
    g1, g2 = random_gauge(2, 5, rng), random_gauge(2, 5, rng)
    two_steps = gauge_transform(gauge_transform(c, g1), g2)
    one_step = gauge_transform(c, Gauge((g1.P * g2.P).truncate(5)))
    assert two_steps.A == one_step.A


def test_singular_gauges_rejected():
    with pytest.raises(SingularGauge):
        Gauge(SeriesMatrix([[TruncSeries("z", 0, 3, [0, 1]), 0], [0, 1]]))
    with pytest.raises(SingularGauge):
        Gauge(SeriesMatrix([[TruncSeries("z", -1, 3, [1]), 0], [0, 1]]))


def test_connection_validation():
    with pytest.raises(DimensionMismatch):
        Connection(3, 2, SeriesMatrix.identity(2))
    with pytest.raises(PrecisionExhausted):
        Connection(2, 3, SeriesMatrix.identity(2).truncate(2))


@pytest.mark.parametrize("r,m", GRID)
def test_genericity_check_accepts_scrambles(r, m):
    rng = random.Random(99 + r + m)
    nu = random_exponent(r, m, rng)
    c, _ = scrambled_normal_form(nu, m + 2, rng)
    rep = nu_connection_operator_check(c, nu, m + 2)
    assert rep.generic and rep.gauge is not None


def test_genericity_check_rejects_unramified():
    nu = RamifiedExponent.from_terms(2, 2, {(1, 0): 1})
    diag = SeriesMatrix([[TruncSeries("z", 0, 4, [1]), 0], [0, TruncSeries("z", 0, 4, [-1])]])
    rep = nu_connection_operator_check(Connection(2, 2, diag, 4), nu, 4)
    assert not rep.generic and rep.reason
