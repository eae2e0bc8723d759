"""Local deformation spaces at a ramified point and the pairing Xi.

Symmetric tensors are handled in two ways:

* ``sym2_basis`` follows the entry parametrization (antidiagonal entries mod
  z^m with z a_(r-k-1,k) = z a_(k,r-k-1), the other entries symmetric mod
  z^(m-1)); its length is r + (m-1) r (r+1) / 2.
* ``Sym2Space`` is the space of tuples (xi_k) induced on the quotients by
  symmetric ambient matrices.  This is what the maps d0, delta, Theta and Xi
  act on.  Its dimension is smaller by floor(r/2): the top coefficients of
  paired antidiagonal entries are forced to agree on the quotients.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import linalg
from .errors import DimensionMismatch, StructureError
from .exponent import RamifiedExponent, validate_exponent
from .ramstruct import (
    FactorizedStructure,
    _flatten,
    _matpow,
    _pm_identity,
    _pm_mul,
    _pm_transpose,
    induced,
    lift_endomorphism,
    trace,
    v_bar,
    w_bar,
)

ZERO = Fraction(0)
ONE = Fraction(1)
SIDES = ("V", "W")


def _check_rm(r: int, m: int):
    if r < 2 or m < 2:
        raise DimensionMismatch("ramified points need r >= 2 and m >= 2")


def _check_side(side: str):
    if side not in SIDES:
        raise DimensionMismatch(f"side must be 'V' or 'W', got {side!r}")


def _z_shifted(side: str, i: int, j: int, r: int) -> bool:
    """Entries that carry an explicit factor z in the lifted matrix."""
    return i + j >= r if side == "V" else i + j <= r - 2


# ---------------------------------------------------------------------------
# entry parametrization

@dataclass(frozen=True)
class Sym2Element:
    """entries[i][j]: coefficients mod z^m on the antidiagonal, mod z^(m-1) elsewhere."""

    side: str
    r: int
    m: int
    entries: tuple

    def __post_init__(self):
        _check_side(self.side)
        r, m = self.r, self.m
        ent = tuple(tuple(tuple(Fraction(x) if isinstance(x, int) else x for x in e) for e in row)
                    for row in self.entries)
        object.__setattr__(self, "entries", ent)
        for i in range(r):
            for j in range(r):
                want = m if i + j == r - 1 else m - 1
                if len(ent[i][j]) != want:
                    raise DimensionMismatch(f"entry ({i},{j}) needs {want} coefficients")
                if i + j != r - 1 and ent[i][j] != ent[j][i]:
                    raise DimensionMismatch(f"entries ({i},{j}) and ({j},{i}) differ")
                if i + j == r - 1 and ent[i][j][: m - 1] != ent[j][i][: m - 1]:
                    raise DimensionMismatch(f"z a_({i},{j}) != z a_({j},{i})")

    def lift(self) -> list:
        """Ambient matrix; the z factors sit below the antidiagonal for V, above it for W."""
        r, m = self.r, self.m
        out = []
        for i in range(r):
            row = []
            for j in range(r):
                e = list(self.entries[i][j]) + [ZERO] * (m - len(self.entries[i][j]))
                if i + j != r - 1 and _z_shifted(self.side, i, j, r):
                    e = [ZERO] + e[: m - 1]
                row.append(e)
            out.append(row)
        return out

    def induced_tuple(self) -> list:
        return induce_tuple(self.lift(), self.side, self.r, self.m)


def sym2_basis(r: int, m: int, side: str) -> list:
    """Basis of the entry parametrization; length r + (m-1) r (r+1) / 2."""
    _check_rm(r, m)
    _check_side(side)

    def blank():
        return [[[ZERO] * (m if i + j == r - 1 else m - 1) for j in range(r)] for i in range(r)]

    out = []
    for i in range(r):
        for j in range(i, r):
            for p in range(m - 1):
                ent = blank()
                ent[i][j][p] = ONE
                ent[j][i][p] = ONE
                out.append(Sym2Element(side, r, m, ent))
    for i in range(r):
        ent = blank()
        ent[i][r - 1 - i][m - 1] = ONE
        out.append(Sym2Element(side, r, m, ent))
    return out


def sym2_formula(r: int, m: int) -> int:
    return r + (m - 1) * r * (r + 1) // 2


def sym2_parametrization_rank(r: int, m: int) -> int:
    """Dimension of the parametrization by brute force: nullspace of its linear constraints
    on all r^2 entries (m coefficients each)."""
    _check_rm(r, m)
    idx = {(i, j, p): n for n, (i, j, p) in enumerate((i, j, p) for i in range(r) for j in range(r) for p in range(m))}
    rows = []

    def eq(a, b):
        row = [ZERO] * len(idx)
        row[idx[a]] += 1
        if b is not None:
            row[idx[b]] -= 1
        rows.append(row)

    for i in range(r):
        for j in range(r):
            if i + j != r - 1:
                eq((i, j, m - 1), None)
                if i < j:
                    for p in range(m - 1):
                        eq((i, j, p), (j, i, p))
            elif i < j:
                for p in range(m - 1):
                    eq((i, j, p), (j, i, p))
    return len(idx) - linalg.rank(rows)


# ---------------------------------------------------------------------------
# quotient tuples

def induce_tuple(x: list, side: str, r: int, m: int) -> list:
    if side == "V":
        return [induced(x, v_bar(r, m, k), w_bar(r, m, k)) for k in range(r)]
    return [induced(x, w_bar(r, m, k), v_bar(r, m, k)) for k in range(r)]


def symmetric_generators(side: str, r: int, m: int) -> list:
    """Monomial symmetric matrices z^p (E_ij + E_ji) mapping V_k into W_k (or W_k into V_k)."""
    out = []
    for i in range(r):
        for j in range(i, r):
            for p in range(1 if _z_shifted(side, i, j, r) else 0, m):
                mat = [[[ZERO] * m for _ in range(r)] for _ in range(r)]
                mat[i][j][p] = ONE
                mat[j][i][p] = ONE
                out.append(mat)
    return out


def _combine(coeffs: Sequence, mats: Sequence, r: int, m: int) -> list:
    out = [[[ZERO] * m for _ in range(r)] for _ in range(r)]
    for c, mat in zip(coeffs, mats):
        if c == 0:
            continue
        for i in range(r):
            for j in range(r):
                for p in range(m):
                    if mat[i][j][p] != 0:
                        out[i][j][p] += c * mat[i][j][p]
    return out


class Sym2Space:
    """Symmetric tensors on the quotients, with canonical symmetric ambient lifts."""

    def __init__(self, side: str, r: int, m: int):
        _check_rm(r, m)
        _check_side(side)
        self.side, self.r, self.m = side, r, m
        gens = symmetric_generators(side, r, m)
        flats = [_flatten(induce_tuple(g, side, r, m)) for g in gens]
        chosen = linalg.column_space_basis(flats)
        self.lifts = [gens[i] for i in chosen]
        self.vectors = [flats[i] for i in chosen]
        self._matrix = linalg.transpose(self.vectors)
        self._all_gens, self._all_flats = gens, flats
        self._shapes = [(len(t), len(t[0]) if t else 0) for t in induce_tuple(gens[0], side, r, m)]

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def unflatten(self, flat: Sequence) -> list:
        out, pos = [], 0
        for rows, cols in self._shapes:
            out.append([list(flat[pos + i * cols : pos + (i + 1) * cols]) for i in range(rows)])
            pos += rows * cols
        return out

    def coordinates(self, tup: Sequence) -> list:
        """Coordinates of a quotient tuple; raises when it is not symmetric."""
        try:
            return linalg.solve(self._matrix, _flatten(tup))
        except Exception as exc:
            raise StructureError("tuple is not a symmetric tensor") from exc

    def contains(self, tup: Sequence) -> bool:
        try:
            self.coordinates(tup)
        except StructureError:
            return False
        return True

    def element(self, coords: Sequence) -> list:
        flat = [sum((c * v[n] for c, v in zip(coords, self.vectors) if c != 0), ZERO)
                for n in range(len(self.vectors[0]))]
        return self.unflatten(flat)

    def basis_tuples(self) -> list:
        return [self.unflatten(v) for v in self.vectors]

    def lift(self, tup: Sequence) -> list:
        return _combine(self.coordinates(tup), self.lifts, self.r, self.m)

    def zero_lift(self, rng: random.Random) -> list:
        """A random symmetric ambient matrix inducing the zero tuple."""
        null = linalg.nullspace(linalg.transpose(self._all_flats), len(self._all_gens))
        coeffs = [ZERO] * len(self._all_gens)
        for vec in null:
            c = Fraction(rng.randint(-3, 3))
            coeffs = [a + c * b for a, b in zip(coeffs, vec)]
        return _combine(coeffs, self._all_gens, self.r, self.m)


def sym2_quotient_dimension_bruteforce(side: str, r: int, m: int) -> int:
    """Dimension of all tuples (xi_k) of module maps satisfying the compatibility squares and
    the symmetry, found as a nullspace over the field (no ambient lifts involved)."""
    _check_rm(r, m)
    src = [v_bar(r, m, k) if side == "V" else w_bar(r, m, k) for k in range(r)]
    tgt = [w_bar(r, m, k) if side == "V" else v_bar(r, m, k) for k in range(r)]
    offsets, total = [], 0
    for k in range(r):
        offsets.append(total)
        total += tgt[k].dim * src[k].dim

    def var(k, i, j):
        return offsets[k] + i * src[k].dim + j

    rows = []

    def add_matrix_eq(terms):
        """terms: list of (sign, left, k, right) meaning sign * left @ X_k @ right; all summed = 0."""
        shape = None
        for sign, left, k, right in terms:
            rr = len(left) if left is not None else tgt[k].dim
            cc = len(right[0]) if right is not None else src[k].dim
            shape = (rr, cc)
        for a in range(shape[0]):
            for b in range(shape[1]):
                row = [ZERO] * total
                for sign, left, k, right in terms:
                    lrows = left if left is not None else linalg.identity(tgt[k].dim)
                    rcols = right if right is not None else linalg.identity(src[k].dim)
                    for i in range(tgt[k].dim):
                        li = lrows[a][i]
                        if li == 0:
                            continue
                        for j in range(src[k].dim):
                            rj = rcols[j][b]
                            if rj != 0:
                                row[var(k, i, j)] += sign * li * rj
                if any(row):
                    rows.append(row)

    amb_id, amb_z = _pm_identity(r, m), _pm_identity(r, m, power=1)
    for k in range(r):
        zs, zt = induced(amb_z, src[k], src[k]), induced(amb_z, tgt[k], tgt[k])
        add_matrix_eq([(ONE, zt, k, None), (-ONE, None, k, zs)])
    for k in range(1, r):
        is_ = induced(amb_id, src[k], src[k - 1])
        it = induced(amb_id, tgt[k], tgt[k - 1])
        add_matrix_eq([(ONE, None, k - 1, is_), (-ONE, it, k, None)])
    zs = induced(amb_z, src[0], src[r - 1])
    zt = induced(amb_z, tgt[0], tgt[r - 1])
    add_matrix_eq([(ONE, None, r - 1, zs), (-ONE, zt, 0, None)])
    # symmetry: <X_k u, u'> = <X_(r-k-1) u', u> for u in src_k, u' in src_(r-k-1)
    for k in range(r):
        kk = r - k - 1
        for a, (i1, p1) in enumerate(src[k].basis):
            for b, (i2, p2) in enumerate(src[kk].basis):
                u1 = src[k].unit(i1, p1)
                u2 = src[kk].unit(i2, p2)
                for s in range(m):
                    row = [ZERO] * total
                    for t, (i3, p3) in enumerate(tgt[k].basis):
                        val = _pair_coeff(tgt[k].unit(i3, p3), u2, s, m)
                        if val != 0:
                            row[var(k, t, a)] += val
                    for t, (i3, p3) in enumerate(tgt[kk].basis):
                        val = _pair_coeff(tgt[kk].unit(i3, p3), u1, s, m)
                        if val != 0:
                            row[var(kk, t, b)] -= val
                    if any(row):
                        rows.append(row)
    return total - (linalg.rank(rows) if rows else 0)


def _pair_coeff(u: list, v: list, s: int, m: int):
    """z^s coefficient of sum_i u_i v_i."""
    acc = ZERO
    for a, b in zip(u, v):
        for p in range(min(s + 1, m)):
            if a[p] != 0 and b[s - p] != 0:
                acc += a[p] * b[s - p]
    return acc


# ---------------------------------------------------------------------------
# A^0 and A^1

@dataclass(frozen=True)
class A0Element:
    """(a_0(w), ..., a_(r-1)(w)) mod w^(mr-r+1), agreeing except at w^(mr-r)."""

    r: int
    m: int
    a: tuple

    def __post_init__(self):
        M = self.m * self.r - self.r + 1
        a = tuple(tuple(x) for x in self.a)
        if len(a) != self.r or any(len(x) != M for x in a):
            raise DimensionMismatch(f"A0 elements need {self.r} series of length {M}")
        if any(a[k][: M - 1] != a[k + 1][: M - 1] for k in range(self.r - 1)):
            raise DimensionMismatch("w (a_k - a_(k+1)) must vanish")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class A1Functional:
    """Values (polynomials mod z^m) on the canonical basis of A^0."""

    values: tuple

    def is_zero(self) -> bool:
        return all(x == 0 for v in self.values for x in v)


def a_spaces(r: int, m: int) -> tuple:
    """(basis of A^0, basis of A^1); both have m r elements. A^1 is the dual basis."""
    _check_rm(r, m)
    M = m * r - r + 1
    basis = []
    for j in range(M):
        s = tuple(ONE if i == j else ZERO for i in range(M))
        basis.append(A0Element(r, m, (s,) * r))
    top = tuple(ONE if i == M - 1 else ZERO for i in range(M))
    zero = (ZERO,) * M
    for k0 in range(1, r):
        basis.append(A0Element(r, m, tuple(top if k == k0 else zero for k in range(r))))
    dual = []
    n = len(basis)
    for b in range(n):
        vals = tuple(tuple(ONE if (c == b and p == 0) else ZERO for p in range(m)) for c in range(n))
        dual.append(A1Functional(vals))
    return basis, dual


def _poly_at(coeffs: Sequence, op: list) -> list:
    n = len(op)
    out = linalg.zeros(n, n)
    power = linalg.identity(n)
    for c in coeffs:
        if c != 0:
            out = linalg.mat_add(out, linalg.mat_scale(power, c))
        power = linalg.mat_mul(power, op)
    return out


# ---------------------------------------------------------------------------
# maps of the complex

class LocalComplex:
    """The quotient data of one factorized structure, cached for repeated use."""

    def __init__(self, fs: FactorizedStructure, nu: RamifiedExponent | None = None):
        self.fs, self.nu = fs, nu
        r, m = fs.r, fs.m
        self.r, self.m, self.M = r, m, fs.length
        self.theta = [fs.theta_k(k) for k in range(r)]
        self.kappa = [fs.kappa_k(k) for k in range(r)]
        self.nk = [linalg.mat_mul(self.theta[k], self.kappa[k]) for k in range(r)]
        self.sym_w = Sym2Space("W", r, m)
        self.sym_v = Sym2Space("V", r, m)
        self.a0_full, _ = a_spaces(r, m)
        self.a0 = self._symmetric_a0()
        self._f_lifts = None
        self.th_amb = fs.ambient("theta")
        self.ka_amb = fs.ambient("kappa")
        self.n_amb = fs.ambient("N")

    def _symmetric_a0(self) -> list:
        """The elements of A^0 whose image under d0 is a pair of symmetric tensors."""
        cols = [_flatten(t) + _flatten(x) for t, x in map(self.d0, self.a0_full)]
        wlen = len(_flatten(self.sym_w.basis_tuples()[0]))
        vlen = len(cols[0]) - wlen
        sym = [v + [ZERO] * vlen for v in self.sym_w.vectors]
        sym += [[ZERO] * wlen + v for v in self.sym_v.vectors]
        n = len(cols)
        null = linalg.nullspace(linalg.transpose(cols + sym), n + len(sym))
        proj = [v[:n] for v in null]
        keep = linalg.column_space_basis(proj)
        out = []
        for i in keep:
            c = proj[i]
            a = tuple(
                tuple(sum((ci * b.a[k][j] for ci, b in zip(c, self.a0_full) if ci != 0), ZERO)
                      for j in range(self.M))
                for k in range(self.r)
            )
            out.append(A0Element(self.r, self.m, a))
        return out

    # d0
    def d0(self, a: A0Element) -> tuple:
        taus, xis = [], []
        for k in range(self.r):
            ak = _poly_at(a.a[k], linalg.mat_mul(self.kappa[k], self.theta[k]))
            taus.append(linalg.mat_mul(self.theta[k], ak))
            xis.append(linalg.mat_scale(linalg.mat_mul(ak, self.kappa[k]), -1))
        return taus, xis

    # delta
    def delta(self, taus: Sequence, xis: Sequence) -> list:
        if self.nu is None:
            raise DimensionMismatch("delta needs the exponent")
        out = []
        for k in range(self.r):
            x = linalg.mat_add(linalg.mat_mul(self.theta[k], xis[k]), linalg.mat_mul(taus[k], self.kappa[k]))
            n = self.nk[k]
            zop = _matpow(n, self.r)
            acc = linalg.zeros(self.M, self.M)
            for p in range(1, self.r):
                nup = _poly_at(self.nu.a[p], zop)
                if linalg.is_zero_matrix(nup):
                    continue
                inner = linalg.zeros(self.M, self.M)
                for l in range(1, p + 1):
                    term = linalg.mat_mul(linalg.mat_mul(_matpow(n, p - l), x), _matpow(n, l - 1))
                    inner = linalg.mat_add(inner, term)
                acc = linalg.mat_add(acc, linalg.mat_mul(nup, inner))
            out.append(acc)
        return out

    # Theta
    def f_lifts(self) -> list:
        if self._f_lifts is None:
            lifts = []
            for a in self.a0:
                hs = [_poly_at(a.a[k], self.nk[k]) for k in range(self.r)]
                lifts.append(lift_endomorphism(hs, self.r, self.m))
            self._f_lifts = lifts
        return self._f_lifts

    def core(self, tau_amb: list | None, xi_amb: list | None) -> list:
        """theta xi + tau kappa as an ambient endomorphism."""
        m = self.m
        out = [[[ZERO] * m for _ in range(self.r)] for _ in range(self.r)]
        if xi_amb is not None:
            out = _add(out, _pm_mul(self.th_amb, xi_amb, m))
        if tau_amb is not None:
            out = _add(out, _pm_mul(tau_amb, self.ka_amb, m))
        return out

    def theta_functional(self, taus, xis, tau_amb=None, xi_amb=None, f_lifts=None) -> A1Functional:
        if tau_amb is None and taus is not None:
            tau_amb = self.sym_w.lift(taus)
        if xi_amb is None and xis is not None:
            xi_amb = self.sym_v.lift(xis)
        x = self.core(tau_amb, xi_amb)
        vals = tuple(tuple(trace(_pm_mul(f, x, self.m), self.m)) for f in (f_lifts or self.f_lifts()))
        return A1Functional(vals)

    # Xi
    def xi(self, eta: tuple, eta2: tuple, lifts: tuple | None = None) -> list:
        """Xi_ram(eta, eta2) as a polynomial mod z^m (coefficient of dz/z^m)."""
        if self.nu is None:
            raise DimensionMismatch("Xi needs the exponent")
        r, m = self.r, self.m
        if lifts is None:
            lifts = tuple(
                None if t is None else space.lift(t)
                for t, space in zip((eta[0], eta[1], eta2[0], eta2[1]), (self.sym_w, self.sym_v) * 2)
            )
        tau, xi, tau2, xi2 = lifts
        n, nt = self.n_amb, _pm_transpose(self.n_amb)
        npow = [_pm_power(n, e, m) for e in range(r)]
        ntpow = [_pm_power(nt, e, m) for e in range(r)]
        total = [ZERO] * m
        for p in range(1, r):
            nup = list(self.nu.a[p]) + [ZERO] * m
            if all(x == 0 for x in nup):
                continue
            acc = [ZERO] * m
            for j in range(1, p + 1):
                if tau2 is not None and xi is not None:
                    t1 = _pm_mul(_pm_mul(_pm_mul(tau2, ntpow[p - j], m), xi, m), npow[j - 1], m)
                    acc = [a + b for a, b in zip(acc, trace(t1, m))]
                if tau is not None and xi2 is not None:
                    t2 = _pm_mul(_pm_mul(_pm_mul(npow[p - j], tau, m), ntpow[j - 1], m), xi2, m)
                    acc = [a - b for a, b in zip(acc, trace(t2, m))]
            for s in range(m):
                if nup[s] == 0:
                    continue
                for q in range(m - s):
                    total[s + q] += nup[s] * acc[q] / 2
        return total


def _add(a: list, b: list) -> list:
    return [[[x + y for x, y in zip(ea, eb)] for ea, eb in zip(ra, rb)] for ra, rb in zip(a, b)]


def _pm_power(a: list, e: int, m: int) -> list:
    r = len(a)
    out = [[[ONE if (i == j and p == 0) else ZERO for p in range(m)] for j in range(r)] for i in range(r)]
    for _ in range(e):
        out = _pm_mul(out, a, m)
    return out


def d0_S(a: A0Element, fs: FactorizedStructure) -> tuple:
    """(theta_k a_k(kappa_k theta_k), -a_k(kappa_k theta_k) kappa_k) as quotient tuples."""
    return LocalComplex(fs).d0(a)


def delta_map(taus, xis, nu: RamifiedExponent, fs: FactorizedStructure) -> list:
    return LocalComplex(fs, nu).delta(taus, xis)


def theta_functional(taus, xis, fs: FactorizedStructure) -> A1Functional:
    return LocalComplex(fs).theta_functional(taus, xis)


def xi_pairing(eta, eta2, nu: RamifiedExponent, fs: FactorizedStructure) -> list:
    return LocalComplex(fs, nu).xi(eta, eta2)


# ---------------------------------------------------------------------------
# perfect pairing

@dataclass(frozen=True)
class PairingReport:
    ker_dim: int
    coker_dim: int
    rank: int
    sym2_dim: int
    descends: bool

    @property
    def perfect(self) -> bool:
        return self.ker_dim == self.coker_dim == self.rank and self.descends

    def summary(self) -> str:
        word = "PERFECT" if self.perfect else "DEGENERATE"
        return f"{word} rank={self.rank} dims=({self.ker_dim},{self.coker_dim})"


def perfect_pairing_check(r: int, m: int, nu: RamifiedExponent, fs: FactorizedStructure,
                          complex_: LocalComplex | None = None) -> PairingReport:
    """Residue of Xi((0, xi), (tau, 0)) on ker(Sym2(V) -> A^1) x coker(A^0 -> Sym2(W))."""
    validate_exponent(nu)
    if (nu.r, nu.m, fs.r, fs.m) != (r, m, r, m):
        raise DimensionMismatch("exponent and structure disagree on (r, m)")
    lc = complex_ or LocalComplex(fs, nu)
    sv, sw = lc.sym_v, lc.sym_w
    f_lifts = lc.f_lifts()
    theta_cols = []
    for lift in sv.lifts:
        val = lc.theta_functional(None, None, tau_amb=None, xi_amb=lift, f_lifts=f_lifts)
        theta_cols.append([x for v in val.values for x in v])
    ker = linalg.nullspace(linalg.transpose(theta_cols), sv.dim)
    image = [sw.coordinates(lc.d0(a)[0]) for a in lc.a0]
    img_rank = linalg.rank(image) if image else 0
    units = [[ONE if i == j else ZERO for i in range(sw.dim)] for j in range(sw.dim)]
    chosen = linalg.column_space_basis(image + units)
    coker = [units[i - len(image)] for i in chosen if i >= len(image)]

    def residue(xi_coords, tau_coords):
        xi_amb = _combine_coords(xi_coords, sv.lifts, r, m)
        tau_amb = _combine_coords(tau_coords, sw.lifts, r, m)
        return lc.xi((None, None), (None, None), lifts=(None, xi_amb, tau_amb, None))[m - 1]

    mat = [[residue(x, t) for t in coker] for x in ker]
    rank = linalg.rank(mat) if mat and mat[0] else 0
    descends = all(residue(x, t) == 0 for x in ker for t in image)
    return PairingReport(len(ker), sw.dim - img_rank, rank, sv.dim, descends)


def _combine_coords(coords, lifts, r, m):
    return _combine(coords, lifts, r, m)


# ---------------------------------------------------------------------------
# dimension of the moduli space

POINT_KINDS = ("log", "un", "ram")


def moduli_dimension(g: int, r: int, points: Sequence) -> int:
    """2 r^2 (g-1) + 2 + r (r-1) deg D, checked against the Euler characteristic bookkeeping."""
    if r < 1 or g < 0:
        raise DimensionMismatch("need r >= 1 and g >= 0")
    deg = 0
    chi_g0 = -(r * r * (g - 1))
    local = 0
    for kind, mx in points:
        if kind not in POINT_KINDS:
            raise DimensionMismatch(f"unknown point kind {kind!r}")
        if kind == "log" and mx != 1:
            raise DimensionMismatch("logarithmic points have multiplicity 1")
        if mx < 1:
            raise DimensionMismatch("multiplicities are positive")
        deg += mx
        if kind == "ram":
            _check_rm(r, mx)
            chi_g0 -= r * (r - 1) // 2
            sv = len(sym2_basis(r, mx, "V"))
            sw = len(sym2_basis(r, mx, "W"))
            a0, a1 = a_spaces(r, mx)
            local += sv + sw - len(a0) - len(a1)
        else:
            chi_g0 -= mx * r * (r - 1) // 2
    closed = 2 * r * r * (g - 1) + 2 + r * (r - 1) * deg
    # chi(G^1) - dim G^1 = -chi(G^0)
    bookkeeping = -chi_g0 + local - chi_g0 + 2
    if closed != bookkeeping:
        raise StructureError(f"closed form {closed} != bookkeeping {bookkeeping}")
    return closed


__all__ = [
    "A0Element",
    "A1Functional",
    "LocalComplex",
    "PairingReport",
    "Sym2Element",
    "Sym2Space",
    "a_spaces",
    "d0_S",
    "delta_map",
    "moduli_dimension",
    "perfect_pairing_check",
    "sym2_basis",
    "sym2_formula",
    "sym2_parametrization_rank",
    "sym2_quotient_dimension_bruteforce",
    "theta_functional",
    "xi_pairing",
]
