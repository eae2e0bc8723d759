import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramicon.algebra.series import INF
from ramicon.connection import Connection, gauge_transform, normal_matrix
from ramicon.errors import NotRamified, PrecisionExhausted, ResidualMismatch
from ramicon.normalform import (
    expected_step_count,
    formal_iso,
    normalize,
    normalize_with_trace,
    prepare,
    reduction_step,
    solve_step,
)
from ramicon.sampling import random_exponent, scrambled_normal_form

GRID = [(2, 2), (2, 3), (3, 2), (3, 3)]


def _well_order(rec):
    return (rec.qprime, rec.s)


@given(st.sampled_from(GRID), st.integers(0, 10_000), st.integers(0, 2))
def test_round_trip(rm, seed, extra):
    r, m = rm
    rng = random.Random(seed)
    nu = random_exponent(r, m, rng)
    q = m + 1 + extra
    c, _ = scrambled_normal_form(nu, q, rng)
    g, out = normalize(c, nu, q)
    assert out.A == normal_matrix(nu, q).A
    assert gauge_transform(c, g).A == out.A


@pytest.mark.parametrize("r,m", GRID)
def test_steps_advance_in_well_order(r, m):
    rng = random.Random(r * m)
    nu = random_exponent(r, m, rng)
    q = m + 2
    c, _ = scrambled_normal_form(nu, q, rng)
    state = prepare(c, nu, q)
    seen = [(state.qprime, state.s)]
    while not state.finished():
        before = state.d
        state = reduction_step(state, nu)
        rec = state.trace[-1]
        assert rec.level_after == INF or rec.level_after > before
        seen.append((state.qprime, state.s))
    assert seen == sorted(seen)
    assert len(state.trace) == expected_step_count(r, m, q)
    steps = [_well_order(x) for x in state.trace[1:]]
    assert steps == sorted(steps) and len(set(steps)) == len(steps)


def test_step_system_solution():
    nu = random_exponent(3, 2, random.Random(2))
    eta = [1, 2, 3]
    c, b = solve_step(eta, nu, 2, 1)
    coef = ((2 - 2) * 3 + 1) / 3
    a10 = nu.a[1][0]
    for k in range(3):
        assert eta[k] + coef * c + a10 * (b[k] - b[(k + 1) % 3]) == 0


def test_already_normal_input_needs_identity_steps():
    nu = random_exponent(2, 2, random.Random(0))
    res = normalize_with_trace(normal_matrix(nu, 4), nu, 4)
    assert res.gauge.is_identity()
    assert all(rec.c == 0 and not any(rec.b) for rec in res.trace)


def test_order_below_pole_rejected():
    nu = random_exponent(2, 3, random.Random(0))
    with pytest.raises(ValueError):
        normalize(normal_matrix(nu, 5), nu, 2)


def test_insufficient_precision():
    nu = random_exponent(2, 2, random.Random(0))
    with pytest.raises(PrecisionExhausted):
        normalize(normal_matrix(nu, 3), nu, 5)


def test_non_ramified_input_rejected():
    nu = random_exponent(2, 2, random.Random(0))
    from ramicon.algebra.matrix import SeriesMatrix
    from ramicon.algebra.series import TruncSeries

    diag = SeriesMatrix([[TruncSeries("z", 0, 4, [1]), 0], [0, TruncSeries("z", 0, 4, [-1])]])
    bad = Connection(2, 2, diag, 4)
    with pytest.raises(NotRamified):
        normalize(bad, nu, 4)


def test_wrong_residue_detected():
    nu = random_exponent(2, 2, random.Random(1))
    other = random_exponent(2, 2, random.Random(1))
    a = [list(row) for row in other.a]
    a[0][1] += 1
    from ramicon.exponent import RamifiedExponent

    shifted = RamifiedExponent(2, 2, a)
    with pytest.raises(ResidualMismatch):
        normalize(normal_matrix(shifted, 4), nu, 4)


@pytest.mark.parametrize("r,m", GRID)
def test_formal_isomorphism(r, m):
    rng = random.Random(5 * r + m)
    nu = random_exponent(r, m, rng)
    q = m + 2
    a, _ = scrambled_normal_form(nu, q, rng)
    b, _ = scrambled_normal_form(nu, q, rng)
    g = formal_iso(a, b, nu, q)
    assert gauge_transform(a, g).A == b.A
