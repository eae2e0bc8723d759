"""Formal normalization of generic ramified connections.

Entries of a connection matrix are graded by their w-shift: the entry (i, k)
at z^v maps w^k to w^(v r + i), so its shift is v r + i - k.  A connection that
agrees with the normal form A0 = nu(N) + z^(m-1) R_r in every shift below d
is pushed to agree in shift d by one gauge

    P = I + c z^(q'-m) N^s + z^(q'-1) N^(s-1) diag(b),     d = (q'-1) r + s.

A preparation gauge first matches everything in shift <= (m-1) r.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import linalg
from .algebra.cyclotomic import simplify
from .algebra.matrix import SeriesMatrix, diag
from .algebra.series import INF, TruncSeries
from .connection import Connection, Gauge, apply_gauge, companion, normal_matrix
from .errors import NotRamified, PrecisionExhausted, ResidualMismatch, SingularSystem
from .exponent import RamifiedExponent, validate_exponent


@dataclass(frozen=True)
class StepRecord:
    qprime: int
    s: int
    c: object
    b: tuple
    level_before: object
    level_after: object

    @property
    def d(self) -> int:
        return self.d_of(self.qprime, self.s, len(self.b))

    @staticmethod
    def d_of(qprime: int, s: int, r: int) -> int:
        return (qprime - 1) * r + s


@dataclass(frozen=True)
class ReductionState:
    conn: Connection
    gauge_so_far: Gauge
    qprime: int
    s: int
    q: int
    trace: tuple = field(default=())

    @property
    def d(self) -> int:
        return (self.qprime - 1) * self.conn.r + self.s

    def finished(self) -> bool:
        return self.d >= self.q * self.conn.r


def _exact(m: SeriesMatrix) -> SeriesMatrix:
    """Forget the precision of a polynomial matrix (its stored coefficients are taken as exact)."""
    return m.map(lambda x: TruncSeries(x.var, x.ord, INF, x.coeffs))


def defect_entries(a: SeriesMatrix, a0: SeriesMatrix, r: int, window: int):
    """(shift, i, k, v, value) for every nonzero entry of a - a0 at z^v with v < window."""
    out = []
    for i in range(r):
        for k in range(r):
            x, y = a[i, k], a0[i, k]
            for v in range(window):
                diff = x.coeff(v) - y.coeff(v)
                if diff != 0:
                    out.append((v * r + i - k, i, k, v, diff))
    return out


def defect_level(a: SeriesMatrix, a0: SeriesMatrix, r: int, window: int):
    """Smallest w-shift of a nonzero entry of a - a0 below z^window (inf when they agree)."""
    entries = defect_entries(a, a0, r, window)
    return min((e[0] for e in entries), default=INF)


def residuals(a: SeriesMatrix, a0: SeriesMatrix, r: int, d: int, window: int) -> list:
    """eta_k: the shift-d entry of column k of a - a0 (zero beyond the window)."""
    eta = []
    for k in range(r):
        i, v = (k + d) % r, (k + d) // r
        if v >= window:
            eta.append(Fraction(0))
        else:
            eta.append(simplify(a[i, k].coeff(v) - a0[i, k].coeff(v)))
    return eta


def solve_step(eta: list, nu: RamifiedExponent, qprime: int, s: int) -> tuple:
    """Solve eta_k + coef c + a10 (b_k - b_{k+1}) = 0 (indices mod r) with b_0 = 0."""
    r, m = nu.r, nu.m
    a10 = nu.a[1][0]
    if a10 == 0:
        raise SingularSystem("a_{1,0} = 0 makes the step system singular")
    coef = Fraction((qprime - m) * r + s, r)
    c = -sum(eta, Fraction(0)) / (r * coef)
    b = [Fraction(0)]
    for k in range(r - 1):
        b.append(b[-1] + (eta[k] + coef * c) / a10)
    return simplify(c), tuple(simplify(x) for x in b)


def step_gauge(r: int, m: int, qprime: int, s: int, c, b) -> SeriesMatrix:
    n_mat = companion(r)
    p = SeriesMatrix.identity(r)
    if c != 0:
        p = p + n_mat.power(s).shift(qprime - m) * c
    if any(x != 0 for x in b):
        p = p + (n_mat.power(s - 1) * diag([TruncSeries.const(x) for x in b])).shift(qprime - 1)
    return p


def _advance(qprime: int, s: int, r: int) -> tuple:
    return (qprime + 1, 1) if s == r else (qprime, s + 1)


def reduction_step(state: ReductionState, nu: RamifiedExponent) -> ReductionState:
    """Match the shift-d part of the connection with the normal form."""
    r, m, q = nu.r, nu.m, state.q
    a = state.conn.A
    a0 = normal_matrix(nu, q).A
    d = state.d
    entries = defect_entries(a, a0, r, q)
    before = min((e[0] for e in entries), default=INF)
    low = [e for e in entries if e[0] < d]
    if low:
        _, i, k, v, value = min(low)
        raise ResidualMismatch(state.qprime, state.s, k, value,
                               f"defect below step (q'={state.qprime}, s={state.s}) at entry ({i},{k}) z^{v}: {value}")
    eta = residuals(a, a0, r, d, q)
    c, b = solve_step(eta, nu, state.qprime, state.s)
    p = step_gauge(r, m, state.qprime, state.s, c, b)
    new_a = apply_gauge(a, p, m, q)
    after = defect_level(new_a, a0, r, q)
    record = StepRecord(state.qprime, state.s, c, b, before, after)
    qn, sn = _advance(state.qprime, state.s, r)
    gauge = Gauge((state.gauge_so_far.P * p).truncate(q))
    return ReductionState(Connection(r, m, new_a, q), gauge, qn, sn, q, state.trace + (record,))


def _reversion(f: list, length: int) -> list:
    """Coefficients g_1.. of the compositional inverse of f = f_1 x + f_2 x^2 + ... modulo x^length."""
    f = f + [Fraction(0)] * max(0, length - len(f))
    powers = {1: f[:length]}
    for j in range(2, length):
        prev = powers[j - 1]
        cur = [Fraction(0)] * length
        for i, x in enumerate(prev):
            if x == 0:
                continue
            for t in range(1, length - i):
                if f[t] != 0:
                    cur[i + t] += x * f[t]
        powers[j] = cur
    g = [Fraction(0)] * length
    if length > 1:
        g[1] = 1 / f[1]
    for n in range(2, length):
        acc = sum((g[j] * powers[j][n] for j in range(1, n)), Fraction(0))
        g[n] = -acc / f[1] ** n
    return g


def _matrix_poly(coeffs: list, t: SeriesMatrix, prec: int) -> SeriesMatrix:
    r = t.n
    total = SeriesMatrix.zero(r, prec=prec)
    power = SeriesMatrix.identity(r).truncate(prec)
    for j, g in enumerate(coeffs):
        if j:
            power = (power * t).truncate(prec)
        if g != 0:
            total = total + power * g
    return total.truncate(prec)


def prepare(conn: Connection, nu: RamifiedExponent, q: int) -> ReductionState:
    """Gauge the connection so that it agrees with the normal form in every shift <= (m-1) r."""
    r, m = nu.r, nu.m
    a = conn.A.truncate(q)
    a0 = normal_matrix(nu, q).A
    low = m - 1
    # T = A - nu_0 I = F(N') mod z^(m-1) with F(w) = sum_{k>=1} a_kl w^(lr+k)
    nu0 = TruncSeries("z", 0, INF, nu.a[0])
    t = (a - SeriesMatrix.identity(r) * nu0).truncate(low)
    length = low * r + 1
    f = [Fraction(0)] * length
    for k in range(1, r):
        for l in range(m):
            e = l * r + k
            if e < length:
                f[e] = nu.a[k][l]
    g = _reversion(f, length)
    n_prime = _matrix_poly(g, t, low)
    n0 = n_prime.coefficient(0)
    if linalg.rank(n0) != r - 1 or not linalg.is_zero_matrix(_const_power(n0, r)):
        raise NotRamified("the leading term is not a single nilpotent Jordan block")
    cols = linalg.transpose(n0)
    e0 = next(
        i for i in range(r)
        if linalg.rank(cols + [[Fraction(int(j == i)) for j in range(r)]]) > linalg.rank(cols)
    )
    vec = [TruncSeries.const(int(j == e0)).truncate(low) for j in range(r)]
    columns = []
    for _ in range(r):
        columns.append(vec)
        vec = [sum((n_prime[i, j] * vec[j] for j in range(r)), TruncSeries.zero("z", low)) for i in range(r)]
    qmat = _exact(SeriesMatrix([[columns[j][i] for j in range(r)] for i in range(r)]))
    a1 = apply_gauge(a, qmat, m, q)
    bad = [e for e in defect_entries(a1, a0, r, low)]
    if bad:
        _, i, k, v, value = min(bad)
        raise ResidualMismatch(m - 1, 0, k, value,
                               f"not nu-ramified below z^{m - 1}: entry ({i},{k}) z^{v} differs by {value}")
    # residue-level entries with i <= k: solve [A0(0), Y] = D0 - D
    a00 = a0.coefficient(0)
    dd = a1.coefficient(m - 1)
    d0 = a0.coefficient(m - 1)
    rows, rhs = [], []
    for i in range(r):
        for k in range(i, r):
            row = [Fraction(0)] * (r * r)
            for j in range(r):
                row[j * r + k] += a00[i][j]
                row[i * r + j] -= a00[j][k]
            rows.append(row)
            rhs.append(d0[i][k] - dd[i][k])
    try:
        y = linalg.solve(rows, rhs, r * r)
    except SingularSystem:
        value = sum((dd[i][i] - d0[i][i] for i in range(r)), Fraction(0))
        raise ResidualMismatch(m - 1, 0, 0, value, f"residue trace differs from the normal form by {value}") from None
    ymat = SeriesMatrix([[y[i * r + k] for k in range(r)] for i in range(r)])
    p2 = SeriesMatrix.identity(r) + ymat.shift(m - 1)
    a2 = apply_gauge(a1, p2, m, q)
    gauge = Gauge((qmat * p2).truncate(q))
    level = defect_level(a2, a0, r, q)
    record = StepRecord(m - 1, 0, Fraction(0), (Fraction(0),) * r, defect_level(a, a0, r, q), level)
    return ReductionState(Connection(r, m, a2, q), gauge, m, 1, q, (record,))


def _const_power(a: list, k: int) -> list:
    out = linalg.identity(len(a))
    for _ in range(k):
        out = linalg.mat_mul(out, a)
    return out


@dataclass(frozen=True)
class NormalizationResult:
    gauge: Gauge
    conn: Connection
    trace: tuple
    precision: int


def normalize_with_trace(conn: Connection, nu: RamifiedExponent, q: int, certify: bool = True) -> NormalizationResult:
    validate_exponent(nu)
    if (conn.r, conn.m) != (nu.r, nu.m):
        raise NotRamified(f"connection has (r, m) = ({conn.r}, {conn.m}), exponent ({nu.r}, {nu.m})")
    if q < nu.m:
        raise ValueError(f"order {q} is below the pole order {nu.m}")
    if conn.prec < q:
        raise PrecisionExhausted(f"connection known modulo z^{conn.prec}, need z^{q}")
    state = prepare(conn, nu, q)
    while not state.finished():
        state = reduction_step(state, nu)
    out = state.conn
    target = normal_matrix(nu, q)
    if out.A != target.A:
        bad = min(defect_entries(out.A, target.A, nu.r, q))
        raise ResidualMismatch(q, nu.r, bad[2], bad[4], "normalization did not reach the normal form")
    gauge = state.gauge_so_far
    if certify:
        from .connection import gauge_transform

        check = gauge_transform(conn.truncate(q), gauge)
        if check.A != out.A:
            raise AssertionError("normalizing gauge does not reproduce the output")
    return NormalizationResult(gauge, out, state.trace, q)


def normalize(conn: Connection, nu: RamifiedExponent, q: int) -> tuple:
    """(G, normal form) with gauge_transform(conn, G) = normal_matrix(nu) modulo z^q."""
    res = normalize_with_trace(conn, nu, q)
    return res.gauge, res.conn


def expected_step_count(r: int, m: int, q: int) -> int:
    """Preparation plus one step for each (q', s) from (m, 1) to (q, r - 1)."""
    return (q - m) * r + (r - 1) + 1


def formal_iso(conn_a: Connection, conn_b: Connection, nu: RamifiedExponent, q: int) -> Gauge:
    """G with gauge_transform(conn_a, G) = conn_b modulo z^q."""
    ga, _ = normalize(conn_a, nu, q)
    gb, _ = normalize(conn_b, nu, q)
    return Gauge((ga.P * gb.P.inverse(q)).truncate(q))
