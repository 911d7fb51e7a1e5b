import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from voakit.errors import ParseError, TruncationExceeded
from voakit.fock import AlgebraConfig, GradedVector, VACUUM, random_vector
from voakit.modes import HeisenbergVOA
from voakit.syntax import format_vector, parse_vector


@pytest.fixture(scope="module")
def voa():
    return HeisenbergVOA(rank=2, level=Fraction(2, 3), max_degree=5)


def test_canonical_format():
    v = GradedVector({((1, 1), (1, 1)): Fraction(1, 2), ((2, 2),): -3})
    assert format_vector(v) == "1/2*h1(-1)h1(-1)|0> - 3*h2(-2)|0>"
    assert format_vector(GradedVector.zero()) == "0"
    assert format_vector(GradedVector.vacuum()) == "|0>"


def test_monomial_sorted_on_parse():
    v = parse_vector("h1(-1)h1(-2)|0>")
    assert list(v) == [((1, 2), (1, 1))]


def test_aliases(voa):
    assert parse_vector("w", voa) == voa.omega
    assert parse_vector("omega", voa) == voa.omega
    assert parse_vector("h2", voa) == voa.h(2)
    assert parse_vector("T(h1)", voa) == voa.h(1, 2)
    assert parse_vector("kappa", voa) == GradedVector.vacuum() * Fraction(2, 3)
    assert parse_vector("w + h1 + kappa/2", voa) == (
        voa.omega + voa.h(1) + GradedVector.vacuum() * Fraction(1, 3))


def test_arithmetic(voa):
    v = parse_vector("2*(h1 - 1/2*h2(-1)|0>) / 3 - -1", voa)
    want = voa.h(1) * Fraction(2, 3) - voa.h(2) * Fraction(1, 3) + GradedVector.vacuum()
    assert v == want


def test_juxtaposed_scalar(voa):
    assert parse_vector("1/2|0>") == GradedVector.vacuum() * Fraction(1, 2)
    assert parse_vector("1/2h1(-1)h1(-1)|0> + 3|0>") == parse_vector(
        "1/2*h1(-1)h1(-1)|0> + 3*|0>")
    assert parse_vector("-2h1", voa) == voa.h(1) * -2


@pytest.mark.parametrize("text", ["", "h1(-0)|0>", "h1 h1", "h3", "(h1", "h1/h1",
                                  "h1*h1", "1/0", "h1(-1)", "$"])
def test_parse_errors(voa, text):
    with pytest.raises(ParseError):
        parse_vector(text, voa)


def test_aliases_need_config():
    with pytest.raises(ParseError):
        parse_vector("w")


def test_out_of_range(voa):
    with pytest.raises(TruncationExceeded):
        parse_vector("h1(-6)|0>", voa)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_parse_format_round_trip(seed):
    v = random_vector(AlgebraConfig(rank=2, max_degree=4), range(5), random.Random(seed), 0.3)
    text = format_vector(v)
    assert parse_vector(text) == v
    assert format_vector(parse_vector(text)) == text
