"""Flat ``key = value`` config files and numeric literals that may mention pi."""

from __future__ import annotations

import math
import re

_PI_LITERAL = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<coef>\d+(\.\d*)?(e[+-]?\d+)?)?\s*\*?\s*pi\s*(/\s*(?P<div>\d+(\.\d*)?))?\s*$",
    re.IGNORECASE,
)


def parse_float(text: str) -> float:
    """Float literal, also accepting multiples of pi such as ``pi``, ``-pi/2``, ``2*pi``."""
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass
    m = _PI_LITERAL.match(text)
    if not m:
        raise ValueError(f"not a number: {text!r}")
    value = math.pi * float(m.group("coef") or 1.0)
    if m.group("div"):
        value /= float(m.group("div"))
    return -value if m.group("sign") == "-" else value


def parse_key_values(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment; duplicate keys are errors."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ValueError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value.strip()
    return out
