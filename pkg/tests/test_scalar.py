import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from acbm.errors import ParseError
from acbm.scalar import format_rational, parse_rational, rat

rationals = st.builds(
    mpq,
    st.integers(min_value=-10**6, max_value=10**6),
    st.integers(min_value=1, max_value=10**4),
)


def test_rat_accepts_ints_and_passes_mpq_through():
    assert rat(7) == mpq(7)
    q = mpq(3, 4)
    assert rat(q) is q


def test_rat_parses_fraction_strings():
    assert rat("3/4") == mpq(3, 4)
    assert rat("-3/4") == mpq(-3, 4)
    assert rat("+12") == mpq(12)


def test_rat_rejects_floats():
    with pytest.raises(ParseError):
        rat(0.5)


def test_rat_rejects_other_types():
    with pytest.raises(ParseError):
        rat([1])


@pytest.mark.parametrize("bad", ["", "1/0", "1/2/3", "a/b", "1.5", "--2", "/3"])
def test_parse_rational_rejects_malformed_literals(bad):
    with pytest.raises(ParseError):
        parse_rational(bad)


def test_format_integral_values_as_plain_ints():
    out = format_rational(mpq(6, 3))
    assert out == 2 and isinstance(out, int)


def test_format_proper_fractions_as_strings():
    assert format_rational(mpq(-3, 4)) == "-3/4"


@given(rationals)
def test_format_parse_round_trip(q):
    assert rat(format_rational(q)) == q
