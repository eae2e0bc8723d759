"""Factorized and generic ramified structures on E|_{m x} = (C[z]/z^m)^r.

Everything lives in the adapted basis e_0, ..., e_{r-1} in which N is the
companion matrix.  The quotients

    Vbar_k = V_k / z^(m-1) V_(k+1)        Wbar_k = W_k / z^(m-1) W_(k+1)

are modelled as coordinate windows: coordinate i of a vector keeps the
z-powers lo_i <= p < hi_i.  A matrix over C[z]/z^m preserving the lattices
then induces an explicit matrix over the ground field on each quotient.
Quotient vectors with a C[w]-structure are written in the Krylov basis of a
generator, which turns them into truncated polynomials in w.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .algebra import linalg
from .algebra.matrix import SeriesMatrix
from .algebra.series import TruncSeries
from .connection import Connection, companion
from .errors import AxiomViolation, DimensionMismatch, NotAdapted, SingularSystem
from .exponent import RamifiedExponent, nu_numerator

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# matrices over C[z]/z^m as nested coefficient lists

def _pm(mat: SeriesMatrix, m: int) -> list:
    """r x r table of length-m coefficient lists."""
    if mat.ord < 0:
        raise DimensionMismatch("ambient matrices must be regular")
    return [[[x.coeff(p) for p in range(m)] for x in row] for row in mat.rows]


def _to_series(pm: list, m: int) -> SeriesMatrix:
    return SeriesMatrix([[TruncSeries("z", 0, m, e) for e in row] for row in pm])


def _pm_mul(a: list, b: list, m: int) -> list:
    n, inner, cols = len(a), len(b), len(b[0])
    out = [[[ZERO] * m for _ in range(cols)] for _ in range(n)]
    for i in range(n):
        for k in range(inner):
            x = a[i][k]
            if not any(x):
                continue
            for j in range(cols):
                y = b[k][j]
                acc = out[i][j]
                for p, xp in enumerate(x):
                    if xp == 0:
                        continue
                    for q in range(m - p):
                        if y[q] != 0:
                            acc[p + q] += xp * y[q]
    return out


def _pm_apply(a: list, v: list, m: int) -> list:
    return [col[0] for col in _pm_mul(a, [[x] for x in v], m)]


def _pm_eq(a: list, b: list) -> bool:
    return all(x == y for ra, rb in zip(a, b) for ea, eb in zip(ra, rb) for x, y in zip(ea, eb))


def _pm_transpose(a: list) -> list:
    return [list(col) for col in zip(*a)]


def _pm_identity(r: int, m: int, c=ONE, power: int = 0) -> list:
    out = [[[ZERO] * m for _ in range(r)] for _ in range(r)]
    if power < m:
        for i in range(r):
            out[i][i][power] = c
    return out


def _shift(v: list, p: int, m: int) -> list:
    return [ZERO] * p + list(v[: m - p]) if p < m else [ZERO] * m


def _poly_mul(a: list, b: list, n: int) -> list:
    out = [ZERO] * n
    for i, x in enumerate(a[:n]):
        if x == 0:
            continue
        for j in range(min(len(b), n - i)):
            if b[j] != 0:
                out[i + j] += x * b[j]
    return out


def _poly_inv(a: list, n: int) -> list:
    if not a or a[0] == 0:
        raise AxiomViolation("series is not a unit")
    out = [ZERO] * n
    inv0 = 1 / a[0]
    out[0] = inv0
    for k in range(1, n):
        s = sum((a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1)), ZERO)
        out[k] = -s * inv0
    return out


# ---------------------------------------------------------------------------
# coordinate windows

@dataclass(frozen=True)
class Lattice:
    """Vectors whose i-th coordinate has z-powers in [lo_i, hi_i)."""

    m: int
    windows: tuple

    @property
    def basis(self) -> list:
        return [(i, p) for i, (lo, hi) in enumerate(self.windows) for p in range(lo, hi)]

    @property
    def dim(self) -> int:
        return sum(hi - lo for lo, hi in self.windows)

    def contains(self, vec: list) -> bool:
        return all(vec[i][p] == 0 for i, (lo, _) in enumerate(self.windows) for p in range(lo))

    def killed(self, vec: list) -> bool:
        return all(vec[i][p] == 0 for i, (_, hi) in enumerate(self.windows) for p in range(hi))

    def coords(self, vec: list) -> list:
        if not self.contains(vec):
            raise AxiomViolation("vector leaves the lattice")
        return [vec[i][p] for i, p in self.basis]

    def rep(self, cvec: Sequence) -> list:
        out = [[ZERO] * self.m for _ in self.windows]
        for (i, p), x in zip(self.basis, cvec):
            out[i][p] = x
        return out

    def unit(self, i: int, p: int = 0) -> list:
        out = [[ZERO] * self.m for _ in self.windows]
        out[i][p] = ONE
        return out

    def kill_generators(self) -> list:
        return [self.unit(i, hi) for i, (_, hi) in enumerate(self.windows) if hi < self.m]


def v_sub(r: int, m: int, k: int) -> Lattice:
    """V_k = <e_k, ..., e_(r-1), z e_0, ..., z e_(k-1)>, with nothing divided out."""
    return Lattice(m, tuple((1 if i < k else 0, m) for i in range(r)))


def w_sub(r: int, m: int, k: int) -> Lattice:
    """W_k = {v* : v*(z^(m-1) V_(r-k)) = 0} in dual coordinates."""
    return Lattice(m, tuple((1 if i >= r - k else 0, m) for i in range(r)))


def v_bar(r: int, m: int, k: int) -> Lattice:
    return Lattice(m, tuple((1, m) if i < k else (0, m) if i == k else (0, m - 1) for i in range(r)))


def w_bar(r: int, m: int, k: int) -> Lattice:
    j = r - k - 1
    return Lattice(m, tuple((0, m - 1) if i < j else (0, m) if i == j else (1, m) for i in range(r)))


def induced(x: list, src: Lattice, tgt: Lattice) -> list:
    """Field matrix of the map src -> tgt induced by the ambient matrix x."""
    m = src.m
    cols = []
    for i, p in src.basis:
        img = [_shift(x[row][i], p, m) for row in range(len(x))]
        cols.append(tgt.coords(img))
    for gen in src.kill_generators():
        if not tgt.killed(_pm_apply(x, gen, m)):
            raise AxiomViolation("map does not descend to the quotients")
    return linalg.transpose(cols) if cols else []


def quotient_pairing(left: Lattice, right: Lattice, form: list, m: int) -> list:
    """Table of ^t u form v over the field bases: entries are coefficient lists mod z^m."""
    table = []
    for i, p in left.basis:
        u = left.unit(i, p)
        row = []
        for j, q in right.basis:
            v = right.unit(j, q)
            fv = _pm_apply(form, v, m)
            acc = [ZERO] * m
            for a, b in zip(u, fv):
                for s, c in enumerate(_poly_mul(a, b, m)):
                    acc[s] += c
            row.append(acc)
        table.append(row)
    return table


def _matpow(a: list, e: int) -> list:
    n = len(a)
    out = linalg.identity(n)
    for _ in range(e):
        out = linalg.mat_mul(out, a)
    return out


def krylov(op: list, g: Sequence, length: int) -> list:
    """Columns g, op g, ..., op^(length-1) g as a matrix."""
    cols, v = [], list(g)
    for _ in range(length):
        cols.append(v)
        v = linalg.mat_vec(op, v)
    return linalg.transpose(cols)


def w_coordinates(op: list, g: Sequence, v: Sequence) -> list:
    """Coefficients c_j with v = sum c_j op^j g."""
    kry = krylov(op, g, len(g))
    try:
        return linalg.solve(kry, list(v))
    except SingularSystem as exc:
        raise AxiomViolation("vector outside the cyclic module") from exc


# ---------------------------------------------------------------------------
# the standard factorization

def antidiagonal(r: int, m: int) -> SeriesMatrix:
    return SeriesMatrix([[TruncSeries.const(int(i + j == r - 1)) for j in range(r)] for i in range(r)]).truncate(m)


def kappa_matrix(r: int, m: int) -> SeriesMatrix:
    """Antidiagonal of ones on the first r-1 indices and z in the bottom-right slot."""
    rows = [[TruncSeries.const(int(i + j == r - 2 and i < r - 1)) for j in range(r)] for i in range(r)]
    rows[r - 1][r - 1] = TruncSeries.monomial(1, 1)
    return SeriesMatrix(rows).truncate(m)


@dataclass(frozen=True)
class FactorizedStructure:
    """N = theta kappa with theta: E^v -> E and kappa: E -> E^v, all known mod z^m."""

    r: int
    m: int
    N: SeriesMatrix
    theta: SeriesMatrix
    kappa: SeriesMatrix

    def __post_init__(self):
        if self.r < 2:
            raise DimensionMismatch("ramified structures need r >= 2")
        for name in ("N", "theta", "kappa"):
            mat = getattr(self, name)
            if mat.shape != (self.r, self.r):
                raise DimensionMismatch(f"{name} has shape {mat.shape}")
            object.__setattr__(self, name, mat.truncate(self.m))

    @property
    def length(self) -> int:
        """Length mr - r + 1 of each Vbar_k as a C[w]-module."""
        return self.m * self.r - self.r + 1

    def vgens(self, k: int) -> list:
        """Generators of V_k as (z-power, index): e_k, ..., e_(r-1), z e_0, ..., z e_(k-1)."""
        return [(0, i) for i in range(k, self.r)] + [(1, i) for i in range(k)]

    def ambient(self, name: str) -> list:
        return _pm(getattr(self, name), self.m)

    def theta_k(self, k: int) -> list:
        return induced(self.ambient("theta"), w_bar(self.r, self.m, k), v_bar(self.r, self.m, k))

    def kappa_k(self, k: int) -> list:
        return induced(self.ambient("kappa"), v_bar(self.r, self.m, k), w_bar(self.r, self.m, k))

    def N_k(self, k: int) -> list:
        return linalg.mat_mul(self.theta_k(k), self.kappa_k(k))

    def generator(self, k: int) -> list:
        """Class of e_k in Vbar_k."""
        lat = v_bar(self.r, self.m, k)
        return lat.coords(lat.unit(k))


def build_factorized(c: Connection, nu: RamifiedExponent) -> FactorizedStructure:
    """The antidiagonal factorization of the companion matrix for an adapted connection."""
    from .isomonodromy import decompose

    if (c.r, c.m) != (nu.r, nu.m):
        raise DimensionMismatch("connection and exponent disagree on (r, m)")
    decompose(c, nu, 2 * nu.m - 1)
    return standard_factorized(nu.r, nu.m)


def standard_factorized(r: int, m: int) -> FactorizedStructure:
    return FactorizedStructure(r, m, companion(r).truncate(m), antidiagonal(r, m), kappa_matrix(r, m))


# ---------------------------------------------------------------------------
# axioms

@dataclass
class AxiomReport:
    checks: dict = field(default_factory=dict)

    def record(self, name: str, ok: bool):
        self.checks[name] = self.checks.get(name, True) and bool(ok)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list:
        return [k for k, v in self.checks.items() if not v]


def _attempt(report: AxiomReport, name: str, fn):
    try:
        ok = fn()
    except (AxiomViolation, SingularSystem):
        ok = False
    report.record(name, ok)
    return ok


def _same(a: list, b: list) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def _is_unit_times_w(series: Sequence) -> bool:
    return len(series) > 1 and series[0] == 0 and series[1] != 0


def _psi_checks(fs: FactorizedStructure, report: AxiomReport):
    """Condition (v): the inclusions are w times units and the chain closes up to z -> w^r."""
    r, m, M = fs.r, fs.m, fs.length
    amb_id = _pm_identity(r, m)
    amb_z = _pm_identity(r, m, power=1)
    nks: list = []
    gens = [fs.generator(k) for k in range(r)]

    def cyclic():
        nks.extend(fs.N_k(k) for k in range(r))
        return all(linalg.rank(krylov(nks[k], gens[k], M)) == M for k in range(r))

    if not _attempt(report, "psi_cyclic", cyclic):
        return
    units = []

    def inclusions():
        for k in range(1, r):
            inc = induced(amb_id, v_bar(r, m, k), v_bar(r, m, k - 1))
            if not _same(linalg.mat_mul(nks[k - 1], inc), linalg.mat_mul(inc, nks[k])):
                return False
            img = w_coordinates(nks[k - 1], gens[k - 1], linalg.mat_vec(inc, gens[k]))
            if not _is_unit_times_w(img):
                return False
            units.append(img[1:])
        return True

    if not _attempt(report, "psi_lifts_inclusion", inclusions):
        return

    def chain():
        zmap = induced(amb_z, v_bar(r, m, 0), v_bar(r, m, r - 1))
        h = w_coordinates(nks[r - 1], gens[r - 1], linalg.mat_vec(zmap, gens[0]))
        if not _is_unit_times_w(h):
            return False
        prod = h[1:]
        for u in units:
            prod = _poly_mul(prod, u, M - 1)
        return prod[0] == 1 and all(x == 0 for x in prod[1 : M - 1])

    _attempt(report, "psi_chain_is_canonical", chain)


def verify_factorized(fs: FactorizedStructure, c: Connection | None = None,
                      nu: RamifiedExponent | None = None) -> AxiomReport:
    """Check every axiom; the connection-dependent ones only when c and nu are given."""
    r, m, M = fs.r, fs.m, fs.length
    rep = AxiomReport()
    th, ka, n_amb = fs.ambient("theta"), fs.ambient("kappa"), fs.ambient("N")
    rep.record("theta_symmetric", _pm_eq(th, _pm_transpose(th)))
    rep.record("kappa_symmetric", _pm_eq(ka, _pm_transpose(ka)))
    rep.record("theta_kappa_is_N", _pm_eq(_pm_mul(th, ka, m), n_amb))
    npow = _pm_identity(r, m)
    for _ in range(r):
        npow = _pm_mul(npow, n_amb, m)
    rep.record("N_power_r_is_z", _pm_eq(npow, _pm_identity(r, m, power=1)))

    def filtration():
        lens = [v_sub(r, m, k).dim for k in range(r)] + [r * m - r]
        if any(lens[k] - lens[k + 1] != 1 for k in range(r)):
            return False
        for k in range(r - 1):
            induced(n_amb, v_sub(r, m, k), v_sub(r, m, k + 1))
        induced(n_amb, v_sub(r, m, r - 1), Lattice(m, tuple((1, m) for _ in range(r))))
        return True

    _attempt(rep, "filtration", filtration)
    amb_id = _pm_identity(r, m)
    amb_z = _pm_identity(r, m, power=1)
    vb = [v_bar(r, m, k) for k in range(r)]
    wb = [w_bar(r, m, k) for k in range(r)]

    def theta_iso():
        return all(linalg.rank(fs.theta_k(k)) == M == wb[k].dim for k in range(r))

    def squares(mats_name):
        for k in range(1, r):
            if mats_name == "theta":
                left = linalg.mat_mul(fs.theta_k(k - 1), induced(amb_id, wb[k], wb[k - 1]))
                right = linalg.mat_mul(induced(amb_id, vb[k], vb[k - 1]), fs.theta_k(k))
            else:
                left = linalg.mat_mul(fs.kappa_k(k - 1), induced(amb_id, vb[k], vb[k - 1]))
                right = linalg.mat_mul(induced(amb_id, wb[k], wb[k - 1]), fs.kappa_k(k))
            if not _same(left, right):
                return False
        if mats_name == "theta":
            left = linalg.mat_mul(fs.theta_k(r - 1), induced(amb_z, wb[0], wb[r - 1]))
            right = linalg.mat_mul(induced(amb_z, vb[0], vb[r - 1]), fs.theta_k(0))
        else:
            left = linalg.mat_mul(fs.kappa_k(r - 1), induced(amb_z, vb[0], vb[r - 1]))
            right = linalg.mat_mul(induced(amb_z, wb[0], wb[r - 1]), fs.kappa_k(0))
        return _same(left, right)

    def pairing_symmetric(form, lats):
        for k in range(r):
            a = quotient_pairing(lats[r - k - 1], lats[k], form, m)
            b = quotient_pairing(lats[k], lats[r - k - 1], form, m)
            if any(a[i][j] != b[j][i] for i in range(len(a)) for j in range(len(a[0]))):
                return False
        return True

    _attempt(rep, "theta_isomorphism", theta_iso)
    _attempt(rep, "theta_squares", lambda: squares("theta"))
    _attempt(rep, "theta_pairing_symmetric", lambda: pairing_symmetric(th, wb))
    _attempt(rep, "kappa_squares", lambda: squares("kappa"))
    _attempt(rep, "kappa_pairing_symmetric", lambda: pairing_symmetric(ka, vb))

    def n_k_relations():
        for k in range(r):
            nk = fs.N_k(k)
            if not _same(nk, induced(n_amb, vb[k], vb[k])):
                return False
            if not _same(_matpow(nk, r), induced(amb_z, vb[k], vb[k])):
                return False
            if not linalg.is_zero_matrix(_matpow(nk, M)) or linalg.is_zero_matrix(_matpow(nk, M - 1)):
                return False
        return True

    _attempt(rep, "N_k_relations", n_k_relations)
    _psi_checks(fs, rep)
    if c is not None:
        if nu is None:
            raise DimensionMismatch("the connection checks need the exponent")
        if (c.r, c.m, nu.r, nu.m) != (r, m, r, m):
            raise DimensionMismatch("connection, exponent and structure disagree on (r, m)")
        a_amb = _pm(c.A.truncate(m), m)

        def stable():
            for k in range(r):
                induced(a_amb, v_sub(r, m, k), v_sub(r, m, k))
            return True

        def residue_square():
            base = _pm(nu_numerator(nu, fs.N, m), m)
            for k in range(r):
                shift = _pm_identity(r, m, Fraction(k, r), m - 1)
                target = [[[x + y for x, y in zip(p, q)] for p, q in zip(ra, rb)] for ra, rb in zip(base, shift)]
                if not _same(induced(a_amb, vb[k], vb[k]), induced(target, vb[k], vb[k])):
                    return False
            return True

        _attempt(rep, "connection_preserves_filtration", stable)
        _attempt(rep, "residue_square", residue_square)
    return rep


# ---------------------------------------------------------------------------
# generic structures

@dataclass(frozen=True)
class GenericRamifiedStructure:
    """L_k = C[w]/(w^(mr-r+1)); pi[k] lists the images of the V_k generators
    (order of FactorizedStructure.vgens); phi[k-1] is phi_k(1) for k < r and
    phi[r-1] the image of z (x) 1 under phi_r; psi[k-1] lifts phi_k modulo w^(mr-r+2)."""

    r: int
    m: int
    pi: tuple
    phi: tuple
    psi: tuple

    @property
    def length(self) -> int:
        return self.m * self.r - self.r + 1

    def vgens(self, k: int) -> list:
        return [(0, i) for i in range(k, self.r)] + [(1, i) for i in range(k)]

    def project(self, k: int, vec: list) -> list:
        """pi_k of an ambient vector lying in V_k, as a w-series mod w^(mr-r+1)."""
        r, M = self.r, self.length
        if not v_sub(r, self.m, k).contains(vec):
            raise AxiomViolation(f"vector is not in V_{k}")
        out = [ZERO] * M
        for g, (zp, i) in enumerate(self.vgens(k)):
            coeffs = vec[i][zp:]
            for p, x in enumerate(coeffs):
                if x != 0 and r * p < M:
                    for s, y in enumerate(self.pi[k][g][: M - r * p]):
                        out[r * p + s] += x * y
        return out

    def pi_matrix(self, k: int) -> list:
        lat = v_bar(self.r, self.m, k)
        cols = [self.project(k, lat.unit(i, p)) for i, p in lat.basis]
        return linalg.transpose(cols)


def to_generic(fs: FactorizedStructure) -> GenericRamifiedStructure:
    """L_k = Vbar_k written in the Krylov basis of the class of e_k."""
    rep = verify_factorized(fs)
    if not rep.passed:
        raise AxiomViolation(f"factorized axioms fail: {', '.join(rep.failures)}")
    r, m, M = fs.r, fs.m, fs.length
    nks = [fs.N_k(k) for k in range(r)]
    gens = [fs.generator(k) for k in range(r)]
    pis = []
    for k in range(r):
        lat = v_bar(r, m, k)
        row = []
        for zp, i in fs.vgens(k):
            row.append(tuple(w_coordinates(nks[k], gens[k], lat.coords(lat.unit(i, zp)))))
        pis.append(tuple(row))
    amb_id, amb_z = _pm_identity(r, m), _pm_identity(r, m, power=1)
    phis = []
    for k in range(1, r):
        inc = induced(amb_id, v_bar(r, m, k), v_bar(r, m, k - 1))
        phis.append(tuple(w_coordinates(nks[k - 1], gens[k - 1], linalg.mat_vec(inc, gens[k]))))
    zmap = induced(amb_z, v_bar(r, m, 0), v_bar(r, m, r - 1))
    phis.append(tuple(w_coordinates(nks[r - 1], gens[r - 1], linalg.mat_vec(zmap, gens[0]))))
    psis = tuple(tuple(p) + (ZERO,) for p in phis[: r - 1])
    return GenericRamifiedStructure(r, m, tuple(pis), tuple(phis), psis)


def _nu_series(nu: RamifiedExponent, k: int, M: int) -> list:
    """nu(w) + (k/r) dz/z as a w-series, in units of dz/z^m."""
    out = [ZERO] * M
    for p, row in enumerate(nu.a):
        for l, x in enumerate(row):
            e = nu.r * l + p
            if x != 0 and e < M:
                out[e] += x
    e = nu.r * (nu.m - 1)
    if e < M:
        out[e] += Fraction(k, nu.r)
    return out


def verify_generic(gs: GenericRamifiedStructure, c: Connection | None = None,
                   nu: RamifiedExponent | None = None) -> AxiomReport:
    r, m, M = gs.r, gs.m, gs.length
    rep = AxiomReport()

    def surjective():
        return all(linalg.rank(gs.pi_matrix(k)) == M for k in range(r))

    def kills():
        lat = v_bar(r, m, 0)
        for k in range(r):
            for gen in v_bar(r, m, k).kill_generators():
                if any(gs.project(k, gen)):
                    return False
        return lat.dim == M

    _attempt(rep, "pi_surjective", surjective)
    _attempt(rep, "pi_descends", kills)

    def phi_squares():
        for k in range(1, r):
            if not _is_unit_times_w(gs.phi[k - 1]):
                return False
            for zp, i in gs.vgens(k):
                vec = v_sub(r, m, k).unit(i, zp)
                lhs = _poly_mul(list(gs.phi[k - 1]), gs.project(k, vec), M)
                if lhs != gs.project(k - 1, vec):
                    return False
        if not _is_unit_times_w(gs.phi[r - 1]):
            return False
        for zp, i in gs.vgens(0):
            vec = v_sub(r, m, 0).unit(i, zp)
            lhs = _poly_mul(list(gs.phi[r - 1]), gs.project(0, vec), M)
            if lhs != gs.project(r - 1, _shift_vec(vec, 1, m)):
                return False
        return True

    _attempt(rep, "phi_squares", phi_squares)

    def psi_condition():
        for k in range(1, r):
            psi = list(gs.psi[k - 1])
            if len(psi) != M + 1 or list(psi[:M]) != list(gs.phi[k - 1]) or not _is_unit_times_w(psi):
                return False
        prod = list(gs.phi[r - 1])[1:]
        for k in range(1, r):
            prod = _poly_mul(prod, list(gs.psi[k - 1])[1:], M - 1)
        return prod[0] == 1 and all(x == 0 for x in prod[1:])

    _attempt(rep, "psi_chain_is_canonical", psi_condition)
    if c is not None:
        if nu is None:
            raise DimensionMismatch("the connection checks need the exponent")
        a_amb = _pm(c.A.truncate(m), m)

        def nabla_square():
            for k in range(r):
                nu_k = _nu_series(nu, k, M)
                for zp, i in gs.vgens(k):
                    vec = v_sub(r, m, k).unit(i, zp)
                    img = _pm_apply(a_amb, vec, m)
                    if gs.project(k, img) != _poly_mul(nu_k, gs.project(k, vec), M):
                        return False
            return True

        _attempt(rep, "nabla_square", nabla_square)
    return rep


def _shift_vec(vec: list, p: int, m: int) -> list:
    return [_shift(x, p, m) for x in vec]


def from_generic(gs: GenericRamifiedStructure) -> FactorizedStructure:
    """Rebuild (N, theta, kappa) from lifts e'_k of the elements w^k / (psi_1 ... psi_k)."""
    rep = verify_generic(gs)
    if not rep.passed:
        raise AxiomViolation(f"generic axioms fail: {', '.join(rep.failures)}")
    r, m, M = gs.r, gs.m, gs.length
    cols = []
    chain = [ONE] + [ZERO] * M
    for k in range(r):
        if k > 0:
            chain = _poly_mul(chain, list(gs.psi[k - 1]), M + k + 1)
        unit = chain[k : k + M]
        target = _poly_inv(unit, M)
        lat = v_bar(r, m, k)
        try:
            x = linalg.solve(gs.pi_matrix(k), target)
        except SingularSystem as exc:
            raise AxiomViolation(f"no lift of the generator of L_{k}") from exc
        cols.append(lat.rep(x))
    s_pm = [[cols[j][i] for j in range(r)] for i in range(r)]
    s = _to_series(s_pm, m)
    if linalg.det(s.coefficient(0)) == 0:
        raise AxiomViolation("lifted generators are not a basis")
    s_inv = s.inverse(m)
    n_std = companion(r).truncate(m)
    n_mat = (s * n_std * s_inv).truncate(m)
    theta = (s * antidiagonal(r, m) * s.transpose()).truncate(m)
    kappa = (s_inv.transpose() * kappa_matrix(r, m) * s_inv).truncate(m)
    return FactorizedStructure(r, m, n_mat, theta, kappa)


# ---------------------------------------------------------------------------
# equivalence

@dataclass
class EquivalenceReport:
    equivalent: bool
    sigma: tuple | None
    checks: dict


def equivalence(fs: FactorizedStructure, other: FactorizedStructure) -> EquivalenceReport:
    """Solve theta'_k = theta_k sigma_k and test the remaining conditions on sigma."""
    checks: dict = {}
    if (fs.r, fs.m) != (other.r, other.m):
        return EquivalenceReport(False, None, {"shape": False})
    r, m = fs.r, fs.m
    sig = []
    try:
        checks["same_N_k"] = all(_same(fs.N_k(k), other.N_k(k)) for k in range(r))
        for k in range(r):
            sig.append(linalg.mat_mul(linalg.inverse(fs.theta_k(k)), other.theta_k(k)))
        checks["sigma_commutes"] = all(
            _same(linalg.mat_mul(sig[k], linalg.mat_mul(fs.kappa_k(k), fs.theta_k(k))),
                  linalg.mat_mul(linalg.mat_mul(fs.kappa_k(k), fs.theta_k(k)), sig[k]))
            for k in range(r)
        )
        checks["kappa_relation"] = all(
            _same(other.kappa_k(k), linalg.mat_mul(linalg.inverse(sig[k]), fs.kappa_k(k))) for k in range(r)
        )
        amb_id, amb_z = _pm_identity(r, m), _pm_identity(r, m, power=1)
        ok = True
        for k in range(1, r):
            inc = induced(amb_id, w_bar(r, m, k), w_bar(r, m, k - 1))
            ok = ok and _same(linalg.mat_mul(sig[k - 1], inc), linalg.mat_mul(inc, sig[k]))
        zw = induced(amb_z, w_bar(r, m, 0), w_bar(r, m, r - 1))
        ok = ok and _same(linalg.mat_mul(sig[r - 1], zw), linalg.mat_mul(zw, sig[0]))
        checks["sigma_squares"] = ok
    except (AxiomViolation, SingularSystem):
        checks["solvable"] = False
        return EquivalenceReport(False, None, checks)
    return EquivalenceReport(all(checks.values()), tuple(sig), checks)


# ---------------------------------------------------------------------------
# trace pairing model on C[[w]]/(z^m) with basis 1, w, ..., w^(r-1)

def trace_w(a: int, r: int, m: int) -> list:
    """Tr(w^a) as a z-polynomial mod z^m: r z^(a/r) when r | a, else 0 (a >= 0)."""
    out = [ZERO] * m
    if a % r == 0:
        if a < 0:
            raise DimensionMismatch("trace of a pole")
        if a // r < m:
            out[a // r] = Fraction(r)
    return out


def trace_theta(i: int, j: int, r: int, m: int) -> list:
    """Theta(w^i, w^j) with Theta(f, g) dz = Tr(f g dw), dw = w dz / (r z)."""
    a = i + j + 1 - r
    if a < 0:
        return [ZERO] * m
    return [x / r for x in trace_w(a, r, m)]


def trace_pairing_structure(r: int, m: int) -> FactorizedStructure:
    """theta is the inverse of the trace form, kappa(f, g) = Theta(w f, g)."""
    t = SeriesMatrix([[TruncSeries("z", 0, m, trace_theta(i, j, r, m)) for j in range(r)] for i in range(r)])
    k = SeriesMatrix([[TruncSeries("z", 0, m, trace_theta(i + 1, j, r, m)) for j in range(r)] for i in range(r)])
    return FactorizedStructure(r, m, companion(r).truncate(m), t.inverse(m), k)


# ---------------------------------------------------------------------------
# lifts from quotient data (endomorphisms and symmetric tensors)

def parahoric_generators(r: int, m: int) -> list:
    """Monomial matrices z^p E_ij preserving every V_k."""
    out = []
    for i in range(r):
        for j in range(r):
            for p in range(1 if i < j else 0, m):
                mat = [[[ZERO] * m for _ in range(r)] for _ in range(r)]
                mat[i][j][p] = ONE
                out.append(mat)
    return out


def endomorphism_tuple(h: list, r: int, m: int) -> list:
    return [induced(h, v_bar(r, m, k), v_bar(r, m, k)) for k in range(r)]


def _flatten(mats: list) -> list:
    return [x for mat in mats for row in mat for x in row]


def lift_endomorphism(hs: Sequence, r: int, m: int) -> list:
    """An ambient h inducing the given tuple of quotient endomorphisms."""
    gens = parahoric_generators(r, m)
    cols = [_flatten(endomorphism_tuple(g, r, m)) for g in gens]
    try:
        x = linalg.solve(linalg.transpose(cols), _flatten(hs))
    except SingularSystem as exc:
        raise AxiomViolation("tuple does not come from an endomorphism preserving the filtration") from exc
    out = [[[ZERO] * m for _ in range(r)] for _ in range(r)]
    for coef, g in zip(x, gens):
        if coef == 0:
            continue
        for i in range(r):
            for j in range(r):
                for p in range(m):
                    if g[i][j][p] != 0:
                        out[i][j][p] += coef * g[i][j][p]
    return out


def trace(h: list, m: int) -> list:
    acc = [ZERO] * m
    for i in range(len(h)):
        for p in range(m):
            acc[p] += h[i][i][p]
    return acc


def lift_ambiguity(r: int, m: int, rng: random.Random) -> list:
    """A random z^(m-1) times strictly lower triangular matrix: it induces zero on every Vbar_k."""
    out = [[[ZERO] * m for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(i):
            out[i][j][m - 1] = Fraction(rng.randint(-5, 5))
    return out


# ---------------------------------------------------------------------------
# random instances

def _rand(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-4, 4), rng.randint(1, 3))


def random_parahoric_unit(r: int, m: int, rng: random.Random) -> SeriesMatrix:
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            coeffs = [_rand(rng) for _ in range(m)]
            if i < j:
                coeffs[0] = ZERO
            if i == j and coeffs[0] == 0:
                coeffs[0] = ONE
            row.append(TruncSeries("z", 0, m, coeffs))
        rows.append(row)
    return SeriesMatrix(rows)


def random_factorized(nu: RamifiedExponent, rng: random.Random,
                      conn: Connection | None = None) -> tuple:
    """(fs, connection): the standard structure moved by a random filtered gauge P and rescaled
    by a random unit beta(^tN)."""
    from .connection import gauge_transform, normal_matrix

    r, m = nu.r, nu.m
    base = conn if conn is not None else normal_matrix(nu)
    p = random_parahoric_unit(r, m, rng)
    p_inv = p.inverse(m)
    n_new = (p_inv * companion(r).truncate(m) * p).truncate(m)
    theta0 = (p_inv * antidiagonal(r, m) * p_inv.transpose()).truncate(m)
    kappa0 = (p.transpose() * kappa_matrix(r, m) * p).truncate(m)
    length = m * r
    beta = [_rand(rng) for _ in range(length)]
    if beta[0] == 0:
        beta[0] = ONE
    beta_inv = _poly_inv(beta, length)
    nt = n_new.transpose()

    def poly_of(coeffs):
        acc = SeriesMatrix.zero(r, prec=m)
        power = SeriesMatrix.identity(r).truncate(m)
        for x in coeffs:
            if x != 0:
                acc = acc + power * TruncSeries.const(x)
            power = (power * nt).truncate(m)
        return acc.truncate(m)

    theta = (theta0 * poly_of(beta)).truncate(m)
    kappa = (poly_of(beta_inv) * kappa0).truncate(m)
    fs = FactorizedStructure(r, m, n_new, theta, kappa)
    c = gauge_transform(base.truncate(m), p)
    return fs, c


__all__ = [
    "AxiomReport",
    "EquivalenceReport",
    "FactorizedStructure",
    "GenericRamifiedStructure",
    "Lattice",
    "NotAdapted",
    "build_factorized",
    "equivalence",
    "from_generic",
    "induced",
    "lift_endomorphism",
    "random_factorized",
    "standard_factorized",
    "to_generic",
    "trace_pairing_structure",
    "verify_factorized",
    "verify_generic",
]
