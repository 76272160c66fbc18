"""Exact rational scalars with an explicit float escape hatch.

Exact values are plain ``int`` or ``fractions.Fraction`` (arbitrary precision,
kept canonical by Fraction itself); real values are ``float`` and exist only
for the natural-log function family.  Arithmetic between exact values stays
exact; anything touching a float becomes a float.  Comparisons across the two
modes must be requested explicitly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

Rational = Fraction
Value = Union[int, Fraction, float]

REAL_DIGITS = 12
DEFAULT_REAL_TOL = 1e-9


class MixedModeError(TypeError):
    """Raised when an exact value is compared against a real one without promotion."""


def is_exact(v: Value) -> bool:
    return not isinstance(v, float)


def to_real(v: Value) -> float:
    """Explicit exact -> real conversion; floats pass through unchanged."""
    return float(v)


def rat_add(a: Rational, b: Rational) -> Rational:
    return Fraction(a) + Fraction(b)


def rat_sub(a: Rational, b: Rational) -> Rational:
    return Fraction(a) - Fraction(b)


def rat_mul(a: Rational, b: Rational) -> Rational:
    return Fraction(a) * Fraction(b)


def rat_div(a: Rational, b: Rational) -> Rational:
    if b == 0:
        raise ZeroDivisionError(
            "exact division by zero (did a completely multiplicative weight h "
            "evaluate to 0 upstream?)"
        )
    return Fraction(a) / Fraction(b)


def value_cmp(a: Value, b: Value, tol: float | None = None, promote: bool = False) -> bool:
    """Equality respecting the exact/real split.

    Exact vs exact is bit-exact.  Real vs real needs a caller-supplied
    absolute tolerance.  Mixed comparisons raise MixedModeError unless
    ``promote=True``, in which case both sides are compared as floats.
    """
    ae, be = is_exact(a), is_exact(b)
    if ae and be:
        return a == b
    if ae != be and not promote:
        raise MixedModeError(
            "comparing exact with real values requires promote=True"
        )
    if tol is None:
        raise ValueError("real-mode comparison needs an absolute tolerance")
    return abs(float(a) - float(b)) <= tol


def render(v: Value) -> str:
    """Canonical text form: "num/den" with "/den" omitted when den = 1;
    reals at 12 significant digits."""
    if isinstance(v, float):
        return f"{v:.{REAL_DIGITS}g}"
    if isinstance(v, Fraction):
        if v.denominator == 1:
            return str(v.numerator)
        return f"{v.numerator}/{v.denominator}"
    return str(v)
