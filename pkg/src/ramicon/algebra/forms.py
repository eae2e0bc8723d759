"""Matrix-valued differential forms over nilpotent parameter rings.

A form is ``P dz + sum_j Q_j d(eps_j)`` where P and Q_j are polynomials in the
nilpotent parameters with :class:`SeriesMatrix` coefficients.  Four parameter
rings are supported, identified by a tag:

``none``      no parameters
``eps``       C[eps]/(eps^2)
``eps1eps2``  C[eps1, eps2]/(eps1^2, eps2^2)
``bar``       C[eps1, eps2]/(eps1^2, eps1 eps2, eps2^2)

One- and two-form coefficients are compared after reducing by the relations
of the Kaehler differentials of the ring (for instance eps d(eps) = 0).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from ..errors import EpsOrderMismatch
from .cyclotomic import CycNum
from .matrix import SeriesMatrix

RING_PARAMS = {"none": 0, "eps": 1, "eps1eps2": 2, "bar": 2}


def ring_monomials(tag: str) -> tuple:
    if tag == "none":
        return ((),)
    if tag == "eps":
        return ((0,), (1,))
    if tag == "eps1eps2":
        return ((0, 0), (1, 0), (0, 1), (1, 1))
    if tag == "bar":
        return ((0, 0), (1, 0), (0, 1))
    raise EpsOrderMismatch(f"unknown parameter ring {tag!r}")


def _allowed(mono: tuple, tag: str) -> bool:
    return mono in ring_monomials(tag)


def unit_monomial(tag: str) -> tuple:
    return (0,) * RING_PARAMS[tag]


def eps_monomial(tag: str, j: int) -> tuple:
    """Monomial eps_j (1-based)."""
    n = RING_PARAMS[tag]
    return tuple(int(i == j - 1) for i in range(n))


class EpsMatrix:
    """Polynomial in the ring parameters with SeriesMatrix coefficients."""

    __slots__ = ("tag", "terms", "n", "var")

    def __init__(self, tag: str, terms: dict, n: int, var: str = "z"):
        ring_monomials(tag)
        clean = {}
        for mono, mat in terms.items():
            mono = tuple(mono)
            if not _allowed(mono, tag):
                continue
            if mat.shape != (n, n):
                raise EpsOrderMismatch("coefficient shape mismatch")
            clean[mono] = mat
        object.__setattr__(self, "tag", tag)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "var", var)

    def __setattr__(self, key, value):
        raise AttributeError("EpsMatrix is immutable")

    @classmethod
    def constant(cls, tag: str, mat: SeriesMatrix) -> "EpsMatrix":
        return cls(tag, {unit_monomial(tag): mat}, mat.n, mat.var)

    @classmethod
    def zero(cls, tag: str, n: int, var: str = "z") -> "EpsMatrix":
        return cls(tag, {}, n, var)

    def coeff(self, mono: tuple) -> SeriesMatrix:
        mono = tuple(mono)
        if mono in self.terms:
            return self.terms[mono]
        return SeriesMatrix.zero(self.n, var=self.var)

    def _check(self, other: "EpsMatrix"):
        if self.tag != other.tag:
            raise EpsOrderMismatch(f"rings {self.tag} and {other.tag}")

    def __add__(self, other: "EpsMatrix") -> "EpsMatrix":
        self._check(other)
        out = dict(self.terms)
        for mono, mat in other.terms.items():
            out[mono] = out[mono] + mat if mono in out else mat
        return EpsMatrix(self.tag, out, self.n, self.var)

    def __neg__(self) -> "EpsMatrix":
        return EpsMatrix(self.tag, {k: -v for k, v in self.terms.items()}, self.n, self.var)

    def __sub__(self, other: "EpsMatrix") -> "EpsMatrix":
        return self + (-other)

    def __mul__(self, other) -> "EpsMatrix":
        if isinstance(other, (int, Fraction, CycNum)):
            return EpsMatrix(self.tag, {k: v * other for k, v in self.terms.items()}, self.n, self.var)
        if isinstance(other, SeriesMatrix):
            return EpsMatrix(self.tag, {k: v * other for k, v in self.terms.items()}, self.n, self.var)
        self._check(other)
        out: dict = {}
        for m1, a in self.terms.items():
            for m2, b in other.terms.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                if not _allowed(mono, self.tag):
                    continue
                prod = a * b
                out[mono] = out[mono] + prod if mono in out else prod
        return EpsMatrix(self.tag, out, self.n, self.var)

    def __rmul__(self, other) -> "EpsMatrix":
        if isinstance(other, (int, Fraction, CycNum)):
            return self * other
        if isinstance(other, SeriesMatrix):
            return EpsMatrix(self.tag, {k: other * v for k, v in self.terms.items()}, self.n, self.var)
        return NotImplemented

    def d_z(self) -> "EpsMatrix":
        return EpsMatrix(self.tag, {k: v.d() for k, v in self.terms.items()}, self.n, self.var)

    def d_eps(self, j: int) -> "EpsMatrix":
        """Formal partial derivative in eps_j (1-based)."""
        out = {}
        for mono, mat in self.terms.items():
            e = mono[j - 1]
            if e == 0:
                continue
            new = list(mono)
            new[j - 1] = e - 1
            out[tuple(new)] = mat * e
        return EpsMatrix(self.tag, out, self.n, self.var)

    def drop(self, predicate) -> "EpsMatrix":
        return EpsMatrix(self.tag, {k: v for k, v in self.terms.items() if not predicate(k)}, self.n, self.var)

    def map(self, f) -> "EpsMatrix":
        return EpsMatrix(self.tag, {k: f(v) for k, v in self.terms.items()}, self.n, self.var)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.terms.values())

    def agrees(self, other: "EpsMatrix", upto=None) -> bool:
        self._check(other)
        monos = set(self.terms) | set(other.terms)
        return all(self.coeff(m).agrees(other.coeff(m), upto) for m in monos)

    def inverse(self, prec=None) -> "EpsMatrix":
        """Inverse when the parameter-free part is invertible."""
        unit = unit_monomial(self.tag)
        g0inv = self.coeff(unit).inverse(prec)
        nil = EpsMatrix(self.tag, {k: v for k, v in self.terms.items() if k != unit}, self.n, self.var)
        step = -(EpsMatrix.constant(self.tag, g0inv) * nil)
        result = EpsMatrix.constant(self.tag, g0inv)
        power = EpsMatrix.constant(self.tag, SeriesMatrix.identity(self.n, self.var))
        for _ in range(RING_PARAMS[self.tag] + 1):
            power = power * step
            if power.is_zero() and not power.terms:
                break
            result = result + power * EpsMatrix.constant(self.tag, g0inv)
        return result

    def substitute_diagonal(self) -> "EpsMatrix":
        """Restrict a two-parameter polynomial along eps1 = eps2 = eps into C[eps]/(eps^2)."""
        if RING_PARAMS[self.tag] != 2:
            raise EpsOrderMismatch("diagonal substitution needs two parameters")
        out: dict = {}
        for (a, b), mat in self.terms.items():
            d = a + b
            if d > 1:
                continue
            out[(d,)] = out[(d,)] + mat if (d,) in out else mat
        return EpsMatrix("eps", out, self.n, self.var)

    def __repr__(self):
        return f"EpsMatrix({self.tag}, {self.terms!r})"


def commutator(a: EpsMatrix, b: EpsMatrix) -> EpsMatrix:
    return a * b - b * a


class FormMatrix:
    """``dz_part dz + sum_j deps_parts[j] d(eps_j)``; coefficients are EpsMatrix."""

    __slots__ = ("ring", "dz_part", "deps_parts")

    def __init__(self, ring: str, dz_part: EpsMatrix, deps_parts: dict | None = None):
        deps_parts = dict(deps_parts or {})
        if dz_part.tag != ring or any(v.tag != ring for v in deps_parts.values()):
            raise EpsOrderMismatch("form coefficients live in a different ring")
        for j in deps_parts:
            if not 1 <= j <= RING_PARAMS[ring]:
                raise EpsOrderMismatch(f"no parameter eps_{j} in ring {ring}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "dz_part", dz_part)
        object.__setattr__(self, "deps_parts", deps_parts)

    def __setattr__(self, key, value):
        raise AttributeError("FormMatrix is immutable")

    @property
    def n(self) -> int:
        return self.dz_part.n

    @property
    def var(self) -> str:
        return self.dz_part.var

    def q(self, j: int) -> EpsMatrix:
        return self.deps_parts.get(j) or EpsMatrix.zero(self.ring, self.n, self.var)

    @classmethod
    def dz_only(cls, mat: SeriesMatrix, ring: str = "none") -> "FormMatrix":
        return cls(ring, EpsMatrix.constant(ring, mat))

    def gauge(self, g: EpsMatrix, prec=None) -> "FormMatrix":
        """Right gauge action  Gamma -> g^-1 Gamma g + g^-1 dg."""
        ginv = g.inverse(prec)
        dz = ginv * self.dz_part * g + ginv * g.d_z()
        deps = {}
        for j in range(1, RING_PARAMS[self.ring] + 1):
            deps[j] = ginv * self.q(j) * g + ginv * g.d_eps(j)
        return FormMatrix(self.ring, dz, deps)

    def reduced_deps(self) -> dict:
        """dε coefficients reduced to canonical form modulo the Kaehler relations."""
        return reduce_one_form(self.ring, {j: self.q(j) for j in range(1, RING_PARAMS[self.ring] + 1)})

    def agrees(self, other: "FormMatrix", upto=None) -> bool:
        if self.ring != other.ring:
            raise EpsOrderMismatch("forms over different rings")
        if not self.dz_part.agrees(other.dz_part, upto):
            return False
        a, b = self.reduced_deps(), other.reduced_deps()
        return all(a[j].agrees(b[j], upto) for j in a)


def reduce_one_form(ring: str, coeffs: dict) -> dict:
    """Canonical representative of sum_j coeffs[j] d(eps_j) modulo the Kaehler relations."""
    if ring == "none":
        return {}
    if ring == "eps":
        return {1: coeffs[1].drop(lambda m: m[0] > 0)}
    if ring == "eps1eps2":
        return {
            1: coeffs[1].drop(lambda m: m[0] > 0),
            2: coeffs[2].drop(lambda m: m[1] > 0),
        }
    if ring == "bar":
        # eps1 d eps1 = eps2 d eps2 = 0 and eps1 d eps2 = - eps2 d eps1
        c1 = coeffs[1].drop(lambda m: m[0] > 0)
        c2 = coeffs[2]
        moved = c2.coeff((1, 0))
        c1 = c1 + EpsMatrix(ring, {(0, 1): -moved}, c1.n, c1.var)
        c2 = c2.drop(lambda m: m != (0, 0))
        return {1: c1, 2: c2}
    raise EpsOrderMismatch(f"unknown parameter ring {ring!r}")


def reduce_two_form(ring: str, comps: dict) -> dict:
    """Reduce a table {('z', j): ..., (1, 2): ...} of two-form coefficients."""
    out = {}
    n = RING_PARAMS[ring]
    if n:
        dz_parts = reduce_one_form(ring, {j: comps[("z", j)] for j in range(1, n + 1)})
        for j, v in dz_parts.items():
            out[("z", j)] = v
    if n == 2:
        out[(1, 2)] = comps[(1, 2)].drop(lambda m: m != (0, 0))
    return out


class TwoForm:
    """Reduced two-form components keyed by ('z', j) for dz^d(eps_j) and (1, 2) for d(eps1)^d(eps2)."""

    __slots__ = ("ring", "components")

    def __init__(self, ring: str, components: dict):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "components", components)

    def __setattr__(self, key, value):
        raise AttributeError("TwoForm is immutable")

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.components.values())

    def keys(self):
        return sorted(self.components, key=lambda k: (k[0] != "z", str(k)))

    def __getitem__(self, key) -> EpsMatrix:
        return self.components[key]

    def nonzero_keys(self) -> list:
        return [k for k in self.keys() if not self.components[k].is_zero()]


def wedge(gamma: FormMatrix, delta: FormMatrix) -> TwoForm:
    if gamma.ring != delta.ring:
        raise EpsOrderMismatch(f"rings {gamma.ring} and {delta.ring}")
    ring = gamma.ring
    n = RING_PARAMS[ring]
    comps = {}
    for j in range(1, n + 1):
        comps[("z", j)] = gamma.dz_part * delta.q(j) - gamma.q(j) * delta.dz_part
    if n == 2:
        comps[(1, 2)] = gamma.q(1) * delta.q(2) - gamma.q(2) * delta.q(1)
    return TwoForm(ring, reduce_two_form(ring, comps))


def exterior_derivative(gamma: FormMatrix) -> TwoForm:
    ring = gamma.ring
    n = RING_PARAMS[ring]
    comps = {}
    for j in range(1, n + 1):
        comps[("z", j)] = gamma.q(j).d_z() - gamma.dz_part.d_eps(j)
    if n == 2:
        comps[(1, 2)] = gamma.q(2).d_eps(1) - gamma.q(1).d_eps(2)
    return TwoForm(ring, reduce_two_form(ring, comps))


def curvature_form(gamma: FormMatrix) -> TwoForm:
    """d Gamma + Gamma ^ Gamma, reduced."""
    d = exterior_derivative(gamma)
    w = wedge(gamma, gamma)
    comps = {k: d[k] + w[k] for k in d.components}
    return TwoForm(gamma.ring, comps)
