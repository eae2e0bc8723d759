import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import rationals
from ramicon import document as doc
from ramicon.algebra.cyclotomic import CycNum
from ramicon.algebra.series import INF, TruncSeries
from ramicon.connection import normal_matrix
from ramicon.errors import InvalidDocument
from ramicon.exponent import DeformationDirection, RamifiedExponent
from ramicon.isomonodromy import adapt, lift_ramified, lift_two_param
from ramicon.sampling import random_exponent

cyclos = st.builds(lambda r, cs: CycNum(r, cs), st.sampled_from([2, 3, 4, 6]), st.lists(rationals, min_size=1, max_size=6))
scalars = st.one_of(rationals, cyclos)


@st.composite
def series(draw, var="z"):
    cs = draw(st.lists(rationals, max_size=5))
    ord_ = draw(st.integers(-4, 3))
    prec = draw(st.one_of(st.just(INF), st.integers(ord_ + max(len(cs), 1), ord_ + len(cs) + 3)))
    return TruncSeries(var, ord_, prec, cs)


@st.composite
def exponents(draw):
    r, m = draw(st.sampled_from([(2, 2), (2, 3), (3, 2)]))
    a = [[draw(rationals) for _ in range(m)] for _ in range(r)]
    return RamifiedExponent(r, m, a)


@given(scalars)
def test_scalar_round_trip(x):
    assert doc.decode_scalar(doc.encode_scalar(x)) == x


def test_cyclotomic_encoding_is_a_coefficient_array():
    z3 = CycNum.zeta(3)
    assert doc.encode_scalar(z3) == ["0", "1", "0"]
    assert doc.encode_scalar(Fraction(-3, 4)) == "-3/4"
    assert doc.decode_scalar(["0", "1", "0"]) == z3


@given(series())
def test_series_round_trip(s):
    out = doc.decode_series(json.loads(json.dumps(doc.encode_series(s))))
    assert out == s and out.prec == s.prec and out.ord == s.ord


@given(exponents())
def test_exponent_round_trip(nu):
    kind, back = doc.parse(doc.render("exponent", nu))
    assert kind == "exponent" and back == nu


@given(st.sampled_from([(2, 2), (2, 3), (3, 2)]), st.integers(0, 10**6))
def test_connection_round_trip(rm, seed):
    nu = random_exponent(*rm, random.Random(seed))
    c = normal_matrix(nu, nu.m + 1)
    _, back = doc.parse(doc.render("connection", c), "connection")
    assert back.A == c.A and (back.r, back.m, back.prec) == (c.r, c.m, c.prec)


def test_direction_and_lift_round_trip():
    nu = RamifiedExponent.from_terms(2, 2, {(1, 0): 1})
    d = DeformationDirection.from_terms(2, 2, {(0, 0): Fraction(1, 2), (1, 0): 3})
    assert doc.parse(doc.render("direction", d))[1] == d
    _, ac = adapt(normal_matrix(nu, 5), nu, 5)
    for lift in (lift_ramified(ac, nu, d), lift_two_param(ac, nu, d, d * 2)):
        back = doc.parse(doc.render("lift", lift), "lift")[1]
        assert back.total_form().agrees(lift.total_form())


def test_rendering_is_deterministic():
    nu = RamifiedExponent.from_terms(3, 2, {(1, 0): 1, (2, 0): Fraction(-2, 3)})
    assert doc.render("exponent", nu) == doc.render("exponent", RamifiedExponent(3, 2, nu.a))


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[]",
        '{"kind": "exponent", "body": {}}',
        '{"schema_version": "2", "kind": "exponent", "body": {}}',
        '{"schema_version": "1", "kind": "poem", "body": {}}',
        '{"schema_version": "1", "kind": "exponent", "body": {"r": 2, "m": 2}}',
        '{"schema_version": "1", "kind": "exponent", "body": {"r": "2", "m": 2, "a": []}}',
        '{"schema_version": "1", "kind": "exponent", "body": {"r": 2, "m": 2, "a": [["1/0", "0"], ["1", "0"]]}}',
        '{"schema_version": "1", "kind": "connection", "body": {"r": 1, "m": 1, "prec": "big", "A": [[]]}}',
    ],
)
def test_malformed_documents(text):
    with pytest.raises(InvalidDocument):
        doc.parse(text)


def test_expected_kind_is_enforced(tmp_path):
    path = tmp_path / "nu.json"
    path.write_text(doc.render("exponent", RamifiedExponent.from_terms(2, 2, {(1, 0): 1})))
    assert doc.load(str(path), "exponent")[0] == "exponent"
    with pytest.raises(InvalidDocument):
        doc.load(str(path), "connection")
    with pytest.raises(InvalidDocument):
        doc.load(str(tmp_path / "missing.json"))
