"""The fourteen acceptance criteria, exact (tolerance 0).

Each criterion is one test.  A pass/fail line per criterion is printed in the
pytest terminal summary (see conftest.py), and ``python tests/test_acceptance.py``
prints the same lines without pytest.
"""
import os
import random
import subprocess
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

import sympy as sp

sys.path.insert(0, str(Path(__file__).parent))

from oracles import matrix_expr, to_sym  # noqa: E402
from ramicon.algebra.forms import curvature_form  # noqa: E402
from ramicon.algebra.series import INF  # noqa: E402
from ramicon.connection import gauge_transform, normal_matrix  # noqa: E402
from ramicon.exponent import (  # noqa: E402
    DeformationDirection,
    RamifiedExponent,
    unfold_exponent,
    unfolded_residue_spectrum,
)
from ramicon.isomonodromy import (  # noqa: E402
    HorizontalLift,
    adapt,
    commutator_bracket_check,
    direction_matrix,
    gauge_lift,
    is_flat,
    lift_ramified,
    lift_two_param,
    uniqueness_transform,
)
from ramicon.algebra.matrix import SeriesMatrix, commutator  # noqa: E402
from ramicon.normalform import expected_step_count, normalize, prepare, reduction_step  # noqa: E402
from ramicon.pairing import (  # noqa: E402
    LocalComplex,
    a_spaces,
    moduli_dimension,
    perfect_pairing_check,
    sym2_basis,
    sym2_parametrization_rank,
)
from ramicon.ramstruct import (  # noqa: E402
    build_factorized,
    equivalence,
    from_generic,
    random_factorized,
    to_generic,
    verify_factorized,
)
from ramicon.sampling import random_direction, random_exponent, scrambled_normal_form  # noqa: E402
from ramicon.shearing import descend, lift_sheared, shear  # noqa: E402

GRID = [(2, 2), (2, 3), (3, 2), (3, 3)]
FIX = Path(__file__).parent / "fixtures"

CRITERIA = {
    1: "normal-form round trip",
    2: "step solver well-order and step count",
    3: "factorized axioms",
    4: "generic/factorized bijection round trip",
    5: "shear normal form",
    6: "Galois descent",
    7: "horizontal lift",
    8: "two-parameter lift",
    9: "bracket mechanism",
    10: "dimension formulas",
    11: "perfect pairing",
    12: "complex identities",
    13: "unfolding",
    14: "CLI determinism",
}


def _adapted(nu, depth, rng=None):
    conn = normal_matrix(nu, depth)
    if rng is not None:
        conn, _ = scrambled_normal_form(nu, depth, rng)
    return adapt(conn, nu, depth)[1]


def _zero(mat):
    return all(x == 0 for row in mat for x in row)


def test_criterion_01_normal_form_round_trip():
    rng = random.Random(1)
    for i in range(50):
        r, m = GRID[i % len(GRID)]
        nu = random_exponent(r, m, rng)
        q = m + 1 + i % 3
        c, _ = scrambled_normal_form(nu, q, rng)
        g, out = normalize(c, nu, q)
        assert out.A == normal_matrix(nu, q).A
        assert gauge_transform(c, g).A == out.A


def test_criterion_02_step_solver():
    rng = random.Random(2)
    for r, m in GRID:
        nu = random_exponent(r, m, rng)
        q = m + 3
        c, _ = scrambled_normal_form(nu, q, rng)
        state = prepare(c, nu, q)
        order = [(state.qprime, state.s)]
        while not state.finished():
            before = state.d
            state = reduction_step(state, nu)
            after = state.trace[-1].level_after
            assert after == INF or after > before
            order.append((state.qprime, state.s))
        assert all(a < b for a, b in zip(order, order[1:]))
        assert len(state.trace) == expected_step_count(r, m, q)
        assert state.conn.A == normal_matrix(nu, q).A


def test_criterion_03_factorized_axioms():
    rng = random.Random(3)
    for r, m in GRID:
        nu = random_exponent(r, m, rng)
        ac = _adapted(nu, 2 * m - 1, rng)
        fs = build_factorized(ac.conn, nu)
        rep = verify_factorized(fs, ac.conn, nu)
        assert rep.passed, rep.failures
        for name in ("theta_symmetric", "kappa_symmetric", "theta_kappa_is_N", "N_power_r_is_z", "N_k_relations"):
            assert rep.checks[name], name


def test_criterion_04_bijection_round_trip():
    rng = random.Random(4)
    for i in range(20):
        r, m = GRID[i % len(GRID)]
        fs, _ = random_factorized(random_exponent(r, m, rng), rng)
        assert equivalence(fs, from_generic(to_generic(fs))).equivalent


def test_criterion_05_shear():
    rng = random.Random(5)
    for r, m in GRID:
        nu = random_exponent(r, m, rng)
        sc = shear(normal_matrix(nu), nu)
        assert sc.is_diagonal()
        assert sc.base.m == m * r - r
        leads = sc.leading_terms()
        assert len(set(leads)) == r
    simplest = shear(normal_matrix(RamifiedExponent.from_terms(2, 2, {(1, 0): 1})),
                     RamifiedExponent.from_terms(2, 2, {(1, 0): 1}))
    assert simplest.base.m == 2 and simplest.is_diagonal()
    for i, lead in enumerate((2, -2)):
        entry = simplest.matrix[i, i]
        known = 6 if entry.prec == INF else entry.prec
        assert [entry.coeff(e) for e in range(known)] == [lead] + [0] * (known - 1)


def test_criterion_06_galois_descent():
    rng = random.Random(6)
    for r, m in GRID:
        nu = random_exponent(r, m, rng)
        d = random_direction(r, m, rng)
        z_side = descend(lift_sheared(nu, d), nu, d)
        assert curvature_form(z_side).is_zero()
        ac = _adapted(nu, 2 * m - 1)
        ref = lift_ramified(ac, nu, d)
        c = z_side.dz_part.coeff((1,)).shift(m).truncate(ac.conn.prec)
        got = HorizontalLift(ac.conn, "eps", {1: z_side.q(1).coeff((0,))}, {1: c})
        q = uniqueness_transform(ref, got)
        assert q[1].valuation() >= 0


def test_criterion_07_horizontal_lift():
    rng = random.Random(7)
    for r, m in GRID:
        for _ in range(3):
            nu = random_exponent(r, m, rng)
            d = random_direction(r, m, rng)
            lift = lift_ramified(_adapted(nu, 2 * m - 1, rng), nu, d)
            c, b = lift.C[1], lift.B[1]
            assert c.valuation() >= 0
            assert c.agrees(direction_matrix(d).truncate(c.prec), m)
            assert b.valuation() >= -(m - 1)
            assert is_flat(lift)
    z = sp.Symbol("z")
    n = sp.Matrix([[0, z], [1, 0]])
    for _ in range(5):
        a00, b00, b10 = (Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(3))
        nu = RamifiedExponent.from_terms(2, 2, {(1, 0): 1, (0, 0): a00})
        d = DeformationDirection.from_terms(2, 2, {(0, 0): b00, (1, 0): b10})
        b_closed = -(to_sym(b00) / z) * sp.eye(2) - (2 * to_sym(b10) / z) * n
        c_closed = to_sym(b00) * sp.eye(2) + to_sym(b10) * n
        # independent symbolic expansion: C = z^2 B' + [A, B] for the normal form A
        a = to_sym(a00) * sp.eye(2) + n + z * sp.diag(0, sp.Rational(1, 2))
        assert sp.simplify(z**2 * b_closed.diff(z) + a * b_closed - b_closed * a - c_closed) == sp.zeros(2, 2)
        lift = lift_ramified(_adapted(nu, 3), nu, d)
        assert sp.simplify(matrix_expr(lift.B[1]) - b_closed) == sp.zeros(2, 2)
        assert sp.simplify(matrix_expr(lift.C[1]) - c_closed) == sp.zeros(2, 2)


def test_criterion_08_two_parameter_lift():
    rng = random.Random(8)
    for r, m in GRID:
        nu = random_exponent(r, m, rng)
        ac = _adapted(nu, 3 * m - 1, rng)
        lift = lift_two_param(ac, nu, random_direction(r, m, rng), random_direction(r, m, rng))
        k12, k21 = commutator(lift.C[1], lift.B[2]), commutator(lift.C[2], lift.B[1])
        assert k12.agrees(k21)
        assert k12.valuation() >= m + 1 and k21.valuation() >= m + 1
        assert curvature_form(lift.total_form()).is_zero()
        q = {key: SeriesMatrix.constant([[Fraction(rng.randint(-2, 2)) for _ in range(r)] for _ in range(r)])
             for key in (1, 2, 12)}
        other = gauge_lift(lift, q)
        assert is_flat(other)
        found = uniqueness_transform(other, lift)
        assert all(found[key].valuation() >= 0 for key in (1, 2, 12))


def test_criterion_09_bracket_mechanism():
    rng = random.Random(9)
    for r, m in GRID:
        nu = random_exponent(r, m, rng)
        ac = _adapted(nu, 3 * m - 1, rng)
        rep = commutator_bracket_check(nu, random_direction(r, m, rng), random_direction(r, m, rng), ac)
        assert rep.passed, rep.checks


def test_criterion_10_dimension_formulas():
    for r, m in GRID:
        want = r + (m - 1) * r * (r + 1) // 2
        assert len(sym2_basis(r, m, "V")) == len(sym2_basis(r, m, "W")) == want
        assert sym2_parametrization_rank(r, m) == want
        a0, a1 = a_spaces(r, m)
        assert len(a0) == len(a1) == m * r
    # moduli_dimension raises unless the closed form agrees with the Euler characteristic count
    for g in range(3):
        for r in (2, 3):
            for pts in ([], [("ram", 2)], [("ram", 3), ("un", 2), ("log", 1)]):
                moduli_dimension(g, r, pts)
    assert moduli_dimension(0, 2, [("ram", 4)]) == 2


def test_criterion_11_perfect_pairing():
    rng = random.Random(11)
    for r, m in GRID:
        nu = random_exponent(r, m, rng)
        fs, _ = random_factorized(nu, rng)
        rep = perfect_pairing_check(r, m, nu, fs)
        assert rep.perfect and rep.ker_dim == rep.coker_dim == rep.rank, rep.summary()


def test_criterion_12_complex_identities():
    rng = random.Random(12)
    for r, m in GRID:
        nu = random_exponent(r, m, rng)
        fs, _ = random_factorized(nu, rng)
        lc = LocalComplex(fs, nu)
        for a in lc.a0:
            assert all(_zero(x) for x in lc.delta(*lc.d0(a)))
        sw, sv = lc.sym_w, lc.sym_v

        def coords(space):
            return [Fraction(rng.randint(-3, 3)) for _ in range(space.dim)]

        taus, xis = sw.element(coords(sw)), sv.element(coords(sv))
        base = lc.theta_functional(taus, xis)
        for _ in range(3):
            t_amb = [[[x + y for x, y in zip(p, q)] for p, q in zip(ra, rb)]
                     for ra, rb in zip(sw.lift(taus), sw.zero_lift(rng))]
            x_amb = [[[x + y for x, y in zip(p, q)] for p, q in zip(ra, rb)]
                     for ra, rb in zip(sv.lift(xis), sv.zero_lift(rng))]
            assert lc.theta_functional(None, None, tau_amb=t_amb, xi_amb=x_amb) == base
        e1 = (sw.element(coords(sw)), sv.element(coords(sv)))
        e2 = (sw.element(coords(sw)), sv.element(coords(sv)))
        assert all(x == 0 for x in lc.xi(e1, e1))
        assert lc.xi(e1, e2) == [-x for x in lc.xi(e2, e1)]


def test_criterion_13_unfolding():
    rng = random.Random(13)
    lam, hs = sp.Symbol("lambda"), sp.Symbol("h")
    for r, m in GRID:
        nu = random_exponent(r, m, rng)
        qs = [Fraction(i + 2, 1 + i % 2) for i in range(m - 1)]
        assert unfold_exponent(nu, 0, qs).specialize() == nu
        for _ in range(10):
            h = Fraction(rng.choice([-1, 1]) * rng.randint(1, 7), rng.randint(1, 5))
            u = unfold_exponent(nu, h, qs)
            for j, qj in enumerate(qs, start=1):
                spec = unfolded_residue_spectrum(u, j)
                want = sp.Poly(lam**r - hs**r * (to_sym(qj) - 1), lam).subs(hs, to_sym(h))
                got = sum(to_sym(c) * lam**i for i, c in enumerate(spec.charpoly))
                assert sp.expand(got - want) == 0
                assert spec.separable
                assert sp.discriminant(sp.Poly(got, lam)) != 0


def _cli_runs(workdir):
    f = {name: str(FIX / name) for name in os.listdir(FIX) if name.endswith(".json")}
    out = Path(workdir)
    return [
        ["validate", f["nu_r2m2.json"]],
        ["validate", f["nu_degenerate.json"]],
        ["normalize", "--nu", f["nu_r2m2.json"], "--conn", f["conn_r2m2.json"], "--order", "4", "-o", str(out / "norm")],
        ["normalize", "--nu", f["nu_r2m2.json"], "--conn", f["conn_r2m2.json"], "--order", "4"],
        ["shear", "--nu", f["nu_r3m2.json"]],
        ["lift", "--nu", f["nu_r2m2.json"], "--dir", f["dir_r2m2.json"], "-o", str(out / "lift.json")],
        ["lift", "--nu", f["nu_r2m2.json"], "--dir", f["dir_r2m2.json"], "--dir2", f["dir2_r2m2.json"]],
        ["curvature", str(FIX / "golden" / "lift_r2m2.json")],
        ["pair", "--nu", f["nu_r3m2.json"], "--seed", "4"],
        ["pair", "--check-perfect", "--nu", f["nu_r2m2.json"]],
        ["dims", "--g", "0", "--r", "2", "--ram", "4"],
        ["unfold", "--nu", f["nu_r3m2.json"], "--h", "2/3", "--q", "5"],
        ["ramstruct-verify", "--nu", f["nu_r2m2.json"], "--seed", "1"],
        ["selftest", "--seed", "3"],
    ]


def _snapshot(workdir, argv):
    proc = subprocess.run([sys.executable, "-m", "ramicon", *argv], capture_output=True, cwd=workdir)
    files = {}
    for root, _, names in os.walk(workdir):
        for name in sorted(names):
            path = Path(root) / name
            files[str(path.relative_to(workdir))] = path.read_bytes()
    return proc.returncode, proc.stdout, proc.stderr, files


def test_criterion_14_cli_determinism():
    commands = set()
    with tempfile.TemporaryDirectory() as a, tempfile.TemporaryDirectory() as b:
        for argv_a, argv_b in zip(_cli_runs(a), _cli_runs(b)):
            commands.add(argv_a[0])
            first = _snapshot(a, argv_a)
            second = _snapshot(b, argv_b)
            assert first == second, argv_a
    assert len(commands) == 10


def _standalone():
    failed = 0
    tests = sorted((name, fn) for name, fn in globals().items() if name.startswith("test_criterion_"))
    for name, fn in tests:
        number = int(name.split("_")[2])
        try:
            fn()
            status = "PASS"
        except Exception as exc:  # report and keep going
            status = f"FAIL ({type(exc).__name__})"
            failed += 1
        print(f"criterion {number:2d} {CRITERIA[number]}: {status}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(_standalone())
