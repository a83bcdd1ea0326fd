"""Exact rational scalars.

Every number in the package is a gmpy2.mpq.  Floats are rejected at the
boundary: they have no place in an exact verification engine.  JSON files
carry scalars either as integers or as "p/q" strings, both parsed here.
"""

from __future__ import annotations

from gmpy2 import mpq, mpz

from .errors import ParseError

Scalar = type(mpq())

ZERO = mpq(0)
ONE = mpq(1)


def rat(value) -> Scalar:
    """Coerce an int, mpq, mpz or "p/q" string to an exact rational."""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, type(mpz()))):
        return mpq(value)
    if isinstance(value, str):
        return parse_rational(value)
    if isinstance(value, float):
        raise ParseError(f"float scalar {value!r} rejected; use int or 'p/q'")
    raise ParseError(f"cannot interpret {value!r} as a rational")


def parse_rational(text: str) -> Scalar:
    s = text.strip()
    body = s[1:] if s[:1] in "+-" else s
    parts = body.split("/")
    if len(parts) > 2 or not all(p.isdigit() and p for p in parts):
        raise ParseError(f"bad rational literal {text!r}")
    if len(parts) == 2 and int(parts[1]) == 0:
        raise ParseError(f"zero denominator in {text!r}")
    q = mpq(body) if len(parts) == 1 else mpq(int(parts[0]), int(parts[1]))
    return -q if s[:1] == "-" else q


def format_rational(value) -> int | str:
    """Render for JSON: plain int when integral, else a "p/q" string."""
    q = rat(value)
    if q.denominator == 1:
        return int(q.numerator)
    return f"{q.numerator}/{q.denominator}"
