"""Number parsing and mode-aware comparisons.

Two arithmetic modes exist. Exact mode keeps every quantity as a
:class:`fractions.Fraction`; float mode uses ``float`` and compares with a
relative tolerance. An instance is exact iff every input literal is exact
(an ``int``, a ``Fraction`` or a ``"p/q"`` / decimal string).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Union

Number = Union[Fraction, float]

DEFAULT_EPS = 1e-9


def parse_number(raw, exact: bool | None = None) -> Number:
    """Turn a literal into a Fraction (exact) or float.

    ``exact=None`` infers the mode from the literal: ints, Fractions and
    strings are exact, floats are not. ``exact=True`` converts floats through
    their shortest decimal repr, ``exact=False`` forces float.
    """
    if isinstance(raw, bool):
        raise TypeError(f"not a number: {raw!r}")
    if isinstance(raw, str):
        value: Number = Fraction(raw.strip())
    elif isinstance(raw, Rational):
        value = Fraction(raw)
    elif isinstance(raw, float):
        if exact and math.isfinite(raw):
            value = Fraction(repr(raw))
        else:
            value = raw
    else:
        raise TypeError(f"not a number: {raw!r}")
    if exact is False:
        return float(value)
    return value


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def all_exact(values: Iterable) -> bool:
    return all(is_exact(x) for x in values)


def to_float(x) -> float:
    return float(x)


def tolerance_for(exact: bool, eps: float = DEFAULT_EPS) -> float:
    return 0.0 if exact else eps


def leq(a, b, eps: float = 0.0) -> bool:
    """``a <= b`` up to relative tolerance ``eps`` (exact when eps == 0)."""
    if eps == 0:
        return a <= b
    return a <= b + eps * max(1.0, abs(a), abs(b))


def close(a, b, eps: float = 0.0) -> bool:
    return leq(a, b, eps) and leq(b, a, eps)


def format_number(x) -> int | float | str:
    """JSON-friendly rendering: ints stay ints, other fractions become "p/q"."""
    if isinstance(x, Rational):
        x = Fraction(x)
        if x.denominator == 1:
            return x.numerator
        return f"{x.numerator}/{x.denominator}"
    return float(x)
