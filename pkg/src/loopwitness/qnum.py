"""Exact rational scalars.

All arithmetic in this package is over rationals kept in lowest terms with a
positive denominator; nothing is ever rounded.  `gmpy2.mpq` is used when
available (roughly an order of magnitude faster on the pivot-heavy LP and
double-description workloads), with `fractions.Fraction` as a pure-Python
fallback.  Both types normalize eagerly and interoperate with Python ints.
"""

from __future__ import annotations

from fractions import Fraction

try:
    from gmpy2 import mpq as _mpq

    QNum = type(_mpq())
    _make = _mpq
except ImportError:  # pragma: no cover - environment without gmpy2
    QNum = Fraction
    _make = Fraction

QLike = "QNum | Fraction | int | str"


def Q(value, den=None) -> QNum:
    """Build an exact rational from an int, string, Fraction or (num, den) pair.

    Strings accept integer ("3"), fraction ("-5/7") and finite decimal
    ("0.25") literals; decimals are converted exactly, never via float.
    """
    if den is not None:
        return _make(value, den)
    if isinstance(value, QNum):
        return value
    if isinstance(value, float):
        raise TypeError("refusing to build an exact rational from a float; "
                        "pass a string or Fraction instead")
    if isinstance(value, str):
        # Fraction handles all accepted literal forms exactly; route through
        # it so the gmpy2 and fallback builds accept identical syntax.
        f = Fraction(value.strip())
        return _make(f.numerator, f.denominator)
    if isinstance(value, Fraction):
        return _make(value.numerator, value.denominator)
    return _make(value)


ZERO = Q(0)
ONE = Q(1)


def qstr(q) -> str:
    """Canonical "p/q" (or "p" for integers) form used in JSON payloads."""
    return str(q)


def qsign(q) -> int:
    if q > 0:
        return 1
    if q < 0:
        return -1
    return 0


def qfloor(q) -> int:
    return q.numerator // q.denominator


def limit_denominator(q, max_den: int):
    """Best rational approximation with denominator <= max_den (continued
    fractions); exact values with small denominators pass through unchanged."""
    f = Fraction(int(q.numerator), int(q.denominator))
    g = f.limit_denominator(max_den)
    return Q(g.numerator, g.denominator)


def simplest_between(lo, hi):
    """The rational with the smallest denominator (then numerator) in the
    closed interval [lo, hi]; Stern-Brocot descent."""
    lo, hi = Q(lo), Q(hi)
    if lo > hi:
        raise ValueError("empty interval")
    if lo <= 0 <= hi:
        return ZERO
    if hi < 0:
        return -simplest_between(-hi, -lo)
    il = qfloor(lo)
    if lo == il:
        return lo
    if il + 1 <= hi:
        return Q(il + 1)
    return il + 1 / simplest_between(1 / (hi - il), 1 / (lo - il))
