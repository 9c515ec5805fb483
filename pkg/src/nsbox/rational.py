"""Exact rational arithmetic backend.

Every probability, coefficient and verdict in this package is an exact
rational; floating point never enters a decision path.  gmpy2's mpq is used
when available (roughly an order of magnitude faster than the stdlib
Fraction, which matters in the larger membership LPs); fractions.Fraction is
a drop-in fallback.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    Q = Fraction

ZERO = Q(0)
ONE = Q(1)


def as_rational(value):
    """Coerce ``value`` to an exact rational.

    Accepts rationals, ints and strings like ``"3"`` or ``"-2/5"``.  Floats
    are rejected: they carry binary rounding and would silently break the
    exactness guarantees.
    """
    if isinstance(value, float):
        raise TypeError(
            f"refusing float {value!r}: pass an exact rational string like '1/2'"
        )
    if isinstance(value, str):
        value = value.strip()
        try:
            return Q(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    try:
        return Q(value)
    except (TypeError, ValueError) as exc:
        raise TypeError(f"not a rational: {value!r}") from exc


def rational_str(value) -> str:
    """Render a rational as ``p/q`` in lowest terms (``p`` when integral)."""
    return str(Q(value))


def decimal_str(value, digits: int = 6) -> str:
    """Decimal approximation for display only; never used in any verdict."""
    q = Q(value)
    scaled = int(q * 10**digits) if q >= 0 else -int(-q * 10**digits)
    sign = "-" if q < 0 else ""
    whole, frac = divmod(abs(scaled), 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"
