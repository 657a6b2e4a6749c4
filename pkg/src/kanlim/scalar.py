"""Exact scalars for arithmetic over the p-local integers.

A p-local number is a rational a/b whose denominator b is coprime to the
odd prime p.  We represent them with exact rationals (gmpy2.mpq when
available, fractions.Fraction otherwise) and never round.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as QQ
except ImportError:  # pragma: no cover - gmpy2 is normally present
    from fractions import Fraction as QQ

INF = float("inf")


class PAlgebraError(Exception):
    """Base class for errors raised by the exact-algebra layer."""


class InvalidScalar(PAlgebraError):
    """A scalar whose denominator is divisible by p is not p-local."""


def rational(numerator, denominator=1):
    """Build an exact rational; no p-locality check (see :func:`plocal`)."""
    return QQ(numerator, denominator)


def plocal(x, p):
    """Coerce ``x`` to an exact rational and verify it lies in Z_(p)."""
    q = QQ(x) if not isinstance(x, type(QQ(0))) else x
    if q.denominator % p == 0:
        raise InvalidScalar(f"{q} has denominator divisible by {p}")
    return q


def int_valuation(n, p):
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def valuation(x, p):
    """p-adic valuation of an exact rational; ``inf`` for zero.

    >>> valuation(rational(18), 3)
    2
    >>> valuation(rational(2, 3), 3)
    -1
    >>> valuation(rational(0), 3)
    inf
    """
    if x == 0:
        return INF
    num = int(x.numerator)
    den = int(x.denominator)
    return int_valuation(abs(num), p) - int_valuation(den, p)


def unit_part(x, p):
    """Write x = u * p^v with u a p-local unit and return u."""
    v = valuation(x, p)
    if v is INF:
        raise ValueError("zero has no unit part")
    return x / QQ(p) ** v


def residue(x, p, exponent):
    """Canonical representative of x in Z_(p)/(p^exponent), as an integer.

    The denominator of x is inverted modulo p^exponent; requires x p-local.
    """
    m = p**exponent
    num = int(x.numerator) % m
    den = int(x.denominator) % m
    return (num * pow(den, -1, m)) % m
