import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ramicon.errors import DimensionMismatch, StructureError
from ramicon.pairing import (
    A0Element,
    LocalComplex,
    Sym2Element,
    Sym2Space,
    a_spaces,
    moduli_dimension,
    perfect_pairing_check,
    sym2_basis,
    sym2_formula,
    sym2_parametrization_rank,
    sym2_quotient_dimension_bruteforce,
)
from ramicon.ramstruct import random_factorized, standard_factorized
from ramicon.sampling import random_exponent

GRID = [(2, 2), (2, 3), (3, 2), (3, 3)]
HONEST = {(2, 2): 4, (3, 2): 8, (2, 3): 7, (3, 3): 14, (4, 2): 12}


def _zero(mat):
    return all(x == 0 for row in mat for x in row)


def _complex(r, m, seed):
    rng = random.Random(seed)
    nu = random_exponent(r, m, rng)
    fs, _ = random_factorized(nu, rng)
    return LocalComplex(fs, nu), rng


@pytest.mark.parametrize("r,m", GRID + [(4, 2)])
@pytest.mark.parametrize("side", ["V", "W"])
def test_parametrization_sizes(r, m, side):
    basis = sym2_basis(r, m, side)
    assert len(basis) == sym2_formula(r, m) == r + (m - 1) * r * (r + 1) // 2
    assert sym2_parametrization_rank(r, m) == sym2_formula(r, m)
    a0, a1 = a_spaces(r, m)
    assert len(a0) == len(a1) == m * r


@pytest.mark.parametrize("rm", sorted(HONEST))
def test_quotient_dimension_matches_bruteforce(rm):
    r, m = rm
    for side in ("V", "W"):
        assert Sym2Space(side, r, m).dim == HONEST[rm]
        assert sym2_quotient_dimension_bruteforce(side, r, m) == HONEST[rm]
    assert HONEST[rm] == sym2_formula(r, m) - r // 2


def test_sym2_element_validation():
    r, m = 2, 2
    good = [[[1], [2, 3]], [[2, 5], [4]]]
    Sym2Element("V", r, m, good)
    with pytest.raises(DimensionMismatch):
        Sym2Element("V", r, m, [[[1], [2, 3]], [[7, 5], [4]]])
    with pytest.raises(DimensionMismatch):
        Sym2Element("X", r, m, good)
    with pytest.raises(DimensionMismatch):
        sym2_basis(1, 2, "V")


def test_a0_elements_agree_below_the_top():
    with pytest.raises(DimensionMismatch):
        A0Element(2, 2, ((1, 0, 0), (0, 0, 0)))
    A0Element(2, 2, ((1, 2, 3), (1, 2, 0)))


@pytest.mark.parametrize("r,m", GRID)
def test_symmetric_a0_dimension(r, m):
    lc, _ = _complex(r, m, 11 * r + m)
    assert len(lc.a0) == m * r - r // 2


@pytest.mark.parametrize("r,m", GRID)
def test_d0_of_one_is_theta_minus_kappa(r, m):
    lc, _ = _complex(r, m, r * m)
    M = m * r - r + 1
    one = A0Element(r, m, ((Fraction(1),) + (Fraction(0),) * (M - 1),) * r)
    taus, xis = lc.d0(one)
    for k in range(r):
        assert taus[k] == lc.theta[k]
        assert xis[k] == [[-x for x in row] for row in lc.kappa[k]]


@pytest.mark.parametrize("r,m", GRID)
def test_complex_property(r, m):
    lc, _ = _complex(r, m, 5 * r + m)
    for a in lc.a0:
        taus, xis = lc.d0(a)
        assert lc.sym_w.contains(taus) and lc.sym_v.contains(xis)
        assert all(_zero(x) for x in lc.delta(taus, xis))


def test_top_split_elements_leave_the_symmetric_space():
    lc, _ = _complex(2, 2, 1)
    top = a_spaces(2, 2)[0][-1]
    taus, _ = lc.d0(top)
    assert not lc.sym_w.contains(taus)
    with pytest.raises(StructureError):
        lc.sym_w.coordinates(taus)


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(GRID), st.integers(0, 10**6))
def test_theta_is_lift_independent(rm, seed):
    r, m = rm
    lc, rng = _complex(r, m, seed)
    sw, sv = lc.sym_w, lc.sym_v
    taus = sw.element([Fraction(rng.randint(-3, 3)) for _ in range(sw.dim)])
    xis = sv.element([Fraction(rng.randint(-3, 3)) for _ in range(sv.dim)])
    base = lc.theta_functional(taus, xis)
    tau_amb = _plus(sw.lift(taus), sw.zero_lift(rng))
    xi_amb = _plus(sv.lift(xis), sv.zero_lift(rng))
    assert lc.theta_functional(None, None, tau_amb=tau_amb, xi_amb=xi_amb) == base


def _plus(a, b):
    return [[[x + y for x, y in zip(ea, eb)] for ea, eb in zip(ra, rb)] for ra, rb in zip(a, b)]


@settings(max_examples=10, deadline=None)
@given(st.sampled_from(GRID), st.integers(0, 10**6))
def test_xi_alternating(rm, seed):
    r, m = rm
    lc, rng = _complex(r, m, seed)
    sw, sv = lc.sym_w, lc.sym_v

    def eta():
        return (sw.element([Fraction(rng.randint(-2, 2)) for _ in range(sw.dim)]),
                sv.element([Fraction(rng.randint(-2, 2)) for _ in range(sv.dim)]))

    e1, e2 = eta(), eta()
    assert all(x == 0 for x in lc.xi(e1, e1))
    assert lc.xi(e1, e2) == [-x for x in lc.xi(e2, e1)]
    zero = (sw.element([0] * sw.dim), sv.element([0] * sv.dim))
    assert all(x == 0 for x in lc.xi(zero, e1))


@pytest.mark.parametrize("r,m,rank", [(2, 2, 1), (3, 2, 3), (2, 3, 2), (3, 3, 6), (4, 2, 6)])
def test_pairing_is_perfect_on_the_standard_structure(r, m, rank):
    nu = random_exponent(r, m, random.Random(r * 10 + m))
    rep = perfect_pairing_check(r, m, nu, standard_factorized(r, m))
    assert rep.perfect and rep.rank == rank == (m - 1) * r * (r - 1) // 2
    assert rep.summary() == f"PERFECT rank={rank} dims=({rank},{rank})"


@pytest.mark.parametrize("r,m", GRID)
def test_pairing_is_perfect_on_random_structures(r, m):
    lc, _ = _complex(r, m, 97 + r + m)
    rep = perfect_pairing_check(r, m, lc.nu, lc.fs, lc)
    assert rep.perfect, rep.summary()


def test_pairing_rejects_shape_mismatch():
    nu = random_exponent(2, 2, random.Random(0))
    with pytest.raises(DimensionMismatch):
        perfect_pairing_check(2, 2, nu, standard_factorized(3, 2))


@pytest.mark.parametrize(
    "g,r,points,expected",
    [
        (0, 2, [("ram", 4)], 2),
        (1, 3, [], 2),
        (0, 2, [("ram", 2)], -2),
        (0, 3, [("ram", 2), ("un", 2), ("log", 1)], -18 + 2 + 30),
        (2, 2, [("log", 1)] * 3, 8 + 2 + 6),
    ],
)
def test_moduli_dimension(g, r, points, expected):
    assert moduli_dimension(g, r, points) == expected


@given(st.integers(0, 3), st.integers(2, 4), st.lists(st.tuples(st.sampled_from(["un", "ram"]), st.integers(2, 4)), max_size=3))
def test_moduli_dimension_closed_form(g, r, points):
    g_, r_, deg = sp.symbols("g r deg")
    closed = 2 * r_**2 * (g_ - 1) + 2 + r_ * (r_ - 1) * deg
    want = closed.subs({g_: g, r_: r, deg: sum(mx for _, mx in points)})
    assert moduli_dimension(g, r, points) == want


def test_moduli_dimension_rejects_bad_points():
    with pytest.raises(DimensionMismatch):
        moduli_dimension(0, 1, [("ram", 3)])
    with pytest.raises(DimensionMismatch):
        moduli_dimension(0, 2, [("log", 2)])
    with pytest.raises(DimensionMismatch):
        moduli_dimension(0, 2, [("weird", 2)])
