import math

import pytest

from squeezed_dsp.config import parse_float, parse_key_values


@pytest.mark.parametrize(
    "text,value",
    [("1.5", 1.5), ("pi", math.pi), ("-pi/2", -math.pi / 2), ("2*pi", 2 * math.pi), ("0.5pi", 0.5 * math.pi), ("1e-3", 1e-3)],
)
def test_parse_float(text, value):
    assert parse_float(text) == pytest.approx(value, rel=1e-15)


@pytest.mark.parametrize("text", ["", "pie", "two", "pi/"])
def test_parse_float_rejects(text):
    with pytest.raises(ValueError):
        parse_float(text)


def test_key_values():
    assert parse_key_values("# c\nmodel = single\n\nr=1 # trailing\n") == {"model": "single", "r": "1"}


@pytest.mark.parametrize("text", ["novalue\n", "a = 1\na = 2\n", " = 3\n"])
def test_key_values_reject(text):
    with pytest.raises(ValueError):
        parse_key_values(text)
