"""Seeded random instances for self-tests and property checks."""
from __future__ import annotations

import random
from fractions import Fraction

from .algebra.matrix import SeriesMatrix
from .algebra.series import TruncSeries
from .connection import Connection, Gauge, gauge_transform, normal_matrix
from .exponent import DeformationDirection, RamifiedExponent


def small_rational(rng: random.Random, spread: int = 4) -> Fraction:
    return Fraction(rng.randint(-spread, spread), rng.randint(1, 3))


def random_exponent(r: int, m: int, rng: random.Random) -> RamifiedExponent:
    """Admissible exponent: a_(1,0) nonzero, no dz/z term beyond nu_0."""
    a = [[small_rational(rng) for _ in range(m)] for _ in range(r)]
    while a[1][0] == 0:
        a[1][0] = small_rational(rng)
    for k in range(1, r):
        a[k][m - 1] = Fraction(0)
    return RamifiedExponent(r, m, a)


def random_direction(r: int, m: int, rng: random.Random) -> DeformationDirection:
    return DeformationDirection(r, m, [[small_rational(rng) for _ in range(m - 1)] for _ in range(r)])


def random_gauge(r: int, q: int, rng: random.Random) -> Gauge:
    """Polynomial gauge of degree < q whose constant term is unipotent upper triangular."""
    rows = []
    for i in range(r):
        row = []
        for j in range(r):
            cs = [small_rational(rng, 2) for _ in range(q)]
            cs[0] = Fraction(1) if i == j else (cs[0] if i < j else Fraction(0))
            row.append(TruncSeries("z", 0, q, cs))
        rows.append(row)
    return Gauge(SeriesMatrix(rows))


def scrambled_normal_form(nu: RamifiedExponent, q: int, rng: random.Random) -> tuple:
    """(scrambled connection, gauge used): normal_matrix(nu) moved by a random gauge, mod z^q."""
    g = random_gauge(nu.r, q, rng)
    c = gauge_transform(normal_matrix(nu, q), g)
    return Connection(c.r, c.m, c.A, q), g


__all__ = ["random_direction", "random_exponent", "random_gauge", "scrambled_normal_form", "small_rational"]
