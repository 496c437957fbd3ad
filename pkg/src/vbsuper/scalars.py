"""Exact rational scalars.

Everything in this package computes over the rationals.  gmpy2.mpq is used
when available (much faster for big intermediate results); fractions.Fraction
is the fallback.  Both are stored in lowest terms with positive denominator.
"""

from fractions import Fraction

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    Q = Fraction

ZERO = Q(0)
ONE = Q(1)


def rational(value) -> "Q":
    """Coerce ints, Fractions and 'p/q' strings to the scalar type."""
    if isinstance(value, str):
        value = Fraction(value)
    return Q(value)


def format_rational(x) -> str:
    """Canonical decimal-free serialization: '3', '-1/2'."""
    f = Fraction(x)
    if f.denominator == 1:
        return str(f.numerator)
    return "%d/%d" % (f.numerator, f.denominator)
