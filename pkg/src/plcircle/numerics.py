"""Directed-rounding interval helpers on top of ``mpmath.iv``."""
from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass

import mpmath
from gmpy2 import mpq
from mpmath.libmp import to_rational

from .arith import Q, Rational, floor

iv = mpmath.iv


@contextmanager
def iv_precision(bits: int):
    old = iv.prec
    iv.prec = int(bits)
    try:
        yield
    finally:
        iv.prec = old


def iv_of(x):
    """Tight enclosure of an exact rational."""
    x = Q(x)
    return iv.mpf(int(x.numerator)) / int(x.denominator)


def iv_bounds(v):
    """Exact rational endpoints of an mpmath interval."""
    a, b = v._mpi_
    return mpq(*to_rational(a)), mpq(*to_rational(b))


@dataclass(frozen=True)
class Enclosure:
    lo: Rational
    hi: Rational

    @property
    def width(self):
        return self.hi - self.lo

    def overlaps(self, other: "Enclosure") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def contains(self, x) -> bool:
        return self.lo <= Q(x) <= self.hi


def h_sigma_iv(sigma, y):
    """(sigma^y - 1)/(sigma - 1) on an interval y inside one unit cell."""
    s = iv_of(sigma)
    return (iv.exp(y * iv.log(s)) - 1) / (s - 1)


def h_sigma_lift_point(sigma, e):
    """Lift h(y) = floor(y) + h(frac(y)) at a point e given as an exact rational."""
    k = floor(e)
    return k + h_sigma_iv(sigma, iv_of(e - k))
