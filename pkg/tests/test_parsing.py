import cmath
import math

import pytest

from qlbit.numerics import GaussianInt, GaussianRational
from qlbit.parsing import parse_number


@pytest.mark.parametrize("text, value", [
    ("1", 1), ("2+i", 2 + 1j), ("2 - 3i", 2 - 3j), ("-i", -1j), ("3j", 3j),
    ("2*exp(i*pi/4)", 2 * cmath.exp(1j * math.pi / 4)),
    ("1/sqrt2", 1 / math.sqrt(2)), ("sqrt(2)-1", math.sqrt(2) - 1),
    ("2^3", 8), ("conj(1+2i)", 1 - 2j), ("0.5e-1", 0.05), ("cos(pi/8)", math.cos(math.pi / 8)),
])
def test_parse_values(text, value):
    assert abs(parse_number(text) - value) <= 1e-15 * max(1, abs(value))


def test_exact_mode():
    assert parse_number("(1+2i)/(3-i)", exact=True) == GaussianRational(GaussianInt(1, 2), GaussianInt(3, -1))
    assert parse_number("i^2", exact=True) == -1
    assert isinstance(parse_number("1/sqrt2", exact=True), complex)
    assert isinstance(parse_number("2+i"), complex)


@pytest.mark.parametrize("text", ["", "foo", "__import__('os')", "1 +", "exp(1, 2)", "'a'", "True"])
def test_rejects_bad_input(text):
    with pytest.raises(ValueError):
        parse_number(text)
