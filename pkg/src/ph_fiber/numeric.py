"""Number coercion and tolerance-aware comparison.

Rational inputs (ints, Fractions, decimal strings) are kept as exact
``Fraction`` values and compared exactly.  Python floats stay floats and are
compared with the current epsilon, which is held in a context variable so
that concurrent callers do not interfere.
"""
from __future__ import annotations

import json
import math
from contextlib import contextmanager
from contextvars import ContextVar
from decimal import Decimal
from fractions import Fraction
from numbers import Real
from typing import Iterator, Union

Number = Union[Fraction, float]

DEFAULT_EPSILON = 1e-9
_epsilon: ContextVar[float] = ContextVar("ph_fiber_epsilon", default=DEFAULT_EPSILON)

INF = math.inf


def epsilon() -> float:
    return _epsilon.get()


@contextmanager
def tolerance(eps: float) -> Iterator[float]:
    """Temporarily override the comparison epsilon."""
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    token = _epsilon.set(float(eps))
    try:
        yield float(eps)
    finally:
        _epsilon.reset(token)


def as_number(x, allow_inf: bool = False) -> Number:
    """Coerce ``x`` to an exact Fraction when possible, else a float.

    Strings may be decimals (``"0.2"``), ratios (``"1/3"``) or ``"inf"``.
    """
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, Fraction):
        out: Number = x
    elif isinstance(x, int):
        out = Fraction(x)
    elif isinstance(x, Decimal):
        if not x.is_finite():
            out = float(x)
        else:
            out = Fraction(x)
    elif isinstance(x, str):
        s = x.strip()
        if s.lower() in ("inf", "+inf", "infinity", "+infinity"):
            out = INF
        else:
            try:
                out = Fraction(s)
            except ValueError:
                raise ValueError(f"not a number: {x!r}") from None
    elif isinstance(x, Real):
        out = float(x)
    else:
        raise TypeError(f"not a number: {x!r}")
    if isinstance(out, float):
        if math.isnan(out):
            raise ValueError("NaN is not allowed")
        if math.isinf(out) and not (allow_inf and out > 0):
            raise ValueError("infinite value not allowed here")
    return out


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def close(a: Number, b: Number) -> bool:
    """Equality under the module tolerance (exact for rationals)."""
    if is_exact(a) and is_exact(b):
        return a == b
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= epsilon()


def compare(a: Number, b: Number) -> int:
    if close(a, b):
        return 0
    return -1 if a < b else 1


def to_jsonable(x: Number):
    """Shortest faithful JSON form: a number when a decimal round-trips, else "p/q"."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return x
    if isinstance(x, int):
        x = Fraction(x)
    if x.denominator == 1 and abs(x.numerator) < 2**53:
        return int(x.numerator)
    f = float(x)
    if Fraction(repr(f)) == x:
        return f
    return f"{x.numerator}/{x.denominator}"


def loads(text: str):
    """``json.loads`` that reads decimal literals as exact fractions."""
    return json.loads(text, parse_float=Fraction)
