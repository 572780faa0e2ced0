"""Exact rational scalars backed by gmpy2.mpq."""

from fractions import Fraction
from numbers import Rational

from gmpy2 import mpq, mpz

Q = mpq
ZERO = mpq(0)
ONE = mpq(1)
_MPQ = type(mpq(0))
_MPZ = type(mpz(0))


def as_q(value):
    """Convert an int, "p/q" string, Fraction or mpq to mpq.

    Floats are rejected so that inexact values never leak into exact types.
    """
    if isinstance(value, _MPQ):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _MPZ)):
        return mpq(value)
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("empty rational literal")
        return mpq(text)
    if isinstance(value, Rational):
        return mpq(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def q_str(x):
    x = as_q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def q_json(x):
    """JSON encoding: ints stay ints, everything else becomes "p/q"."""
    x = as_q(x)
    if x.denominator == 1:
        return int(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def sign(x):
    return (x > 0) - (x < 0)


def is_square(x):
    """True iff the nonnegative rational x is the square of a rational."""
    x = as_q(x)
    if x < 0:
        return False
    from gmpy2 import is_square as _isq
    return bool(_isq(x.numerator)) and bool(_isq(x.denominator))


def q_sqrt(x):
    """Exact square root of a rational square; raises ValueError otherwise."""
    from gmpy2 import isqrt
    x = as_q(x)
    if not is_square(x):
        raise ValueError(f"{q_str(x)} is not a rational square")
    return mpq(isqrt(x.numerator), isqrt(x.denominator))


def lcm_denominators(values):
    from math import lcm
    out = 1
    for v in values:
        out = lcm(out, int(as_q(v).denominator))
    return out
