"""Exact rationals, prime-exponent vectors and the number theory behind the
membership criteria of Thompson-Stein groups.

Rationals are ``gmpy2.mpq`` values throughout the package; they hash and
compare equal to :class:`fractions.Fraction`, so either can be passed in.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from gmpy2 import mpq, mpz

Rational = type(mpq())

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def Q(x, den=None) -> Rational:
    """Coerce ints, Fractions, mpq and ``"p/q"`` strings to an exact rational.

    Floats are refused: every coordinate in this package is exact.
    """
    if isinstance(x, float):
        raise TypeError("floating-point input is not accepted; use 'p/q'")
    if den is not None:
        return mpq(x, den)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not a rational literal: {x!r}")
        return mpq(Fraction(s))
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def format_rational(x) -> str:
    """``"p/q"``, or ``"p"`` when q = 1; sign carried by the numerator."""
    x = Q(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{int(x.numerator)}/{int(x.denominator)}"


def floor(x) -> int:
    return int(math.floor(x))


def mod(x, r):
    """x reduced into [0, r)."""
    return x - floor(x / r) * r


# ---------------------------------------------------------------------------
# factorization and exponent vectors


@dataclass(frozen=True)
class ExponentVector:
    """A positive rational as a finitely supported map prime -> exponent."""

    exps: tuple = field(default=())  # sorted ((prime, exponent), ...), no zeros

    @classmethod
    def from_dict(cls, d):
        return cls(tuple(sorted((p, e) for p, e in d.items() if e != 0)))

    @classmethod
    def of(cls, q) -> "ExponentVector":
        q = Q(q)
        if q <= 0:
            raise ValueError("exponent vectors represent positive rationals")
        d = dict(factorize(int(q.numerator)).exps)
        for p, e in factorize(int(q.denominator)).exps:
            d[p] = d.get(p, 0) - e
        return cls.from_dict(d)

    def as_dict(self):
        return dict(self.exps)

    def value(self) -> Rational:
        out = mpq(1)
        for p, e in self.exps:
            out *= mpq(p) ** e
        return out

    def __mul__(self, other):
        d = self.as_dict()
        for p, e in other.exps:
            d[p] = d.get(p, 0) + e
        return ExponentVector.from_dict(d)

    def __pow__(self, k: int):
        return ExponentVector.from_dict({p: e * k for p, e in self.exps})

    def inverse(self):
        return self ** -1

    def primes(self):
        return [p for p, _ in self.exps]

    def __str__(self):
        return format_rational(self.value())


def factorize(n: int) -> ExponentVector:
    """Trial division; inputs are desk-scale."""
    n = int(n)
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out = {}
    for p in _SMALL_PRIMES:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    p = _SMALL_PRIMES[-1] + 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return ExponentVector.from_dict(out)


# ---------------------------------------------------------------------------
# small exact linear algebra over Q


def _row_reduce(rows):
    """Reduced row echelon form of a list of Fraction rows; returns (rref, pivots)."""
    m = [list(r) for r in rows]
    pivots = []
    lead = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(lead, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[lead], m[piv] = m[piv], m[lead]
        pv = m[lead][c]
        m[lead] = [x / pv for x in m[lead]]
        for i in range(len(m)):
            if i != lead and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[lead])]
        pivots.append(c)
        lead += 1
        if lead == len(m):
            break
    return m, pivots


def vectors_rank(vectors) -> int:
    """Rank over Q of a list of ExponentVectors."""
    vectors = list(vectors)
    if not vectors:
        return 0
    primes = sorted({p for v in vectors for p in v.primes()})
    if not primes:
        return 0
    rows = [[Fraction(v.as_dict().get(p, 0)) for p in primes] for v in vectors]
    _, pivots = _row_reduce(rows)
    return len(pivots)


def check_independent(basis) -> bool:
    """True iff the basis integers are multiplicatively independent."""
    basis = [int(n) for n in basis]
    if not basis or any(n < 2 for n in basis):
        raise ValueError("basis members must be integers >= 2")
    return vectors_rank(factorize(n) for n in basis) == len(basis)


# ---------------------------------------------------------------------------
# group context


@dataclass(frozen=True)
class GroupContext:
    """The data (r, n_1 < ... < n_p) of a Thompson-Stein group T_{r,(n_i)}."""

    r: Rational
    basis: tuple
    m: int = field(init=False)
    d: int = field(init=False)
    basis_exps: tuple = field(init=False, repr=False)

    def __post_init__(self):
        basis = tuple(int(n) for n in self.basis)
        if not basis or any(b <= a for a, b in zip(basis, basis[1:])):
            raise ValueError("basis must be a nonempty strictly increasing sequence")
        if not check_independent(basis):
            raise ValueError(f"basis {basis} is not multiplicatively independent")
        r = Q(self.r)
        if r <= 0:
            raise ValueError("circumference must be positive")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "m", reduce(math.lcm, basis))
        object.__setattr__(self, "d", reduce(math.gcd, (n - 1 for n in basis)))
        object.__setattr__(self, "basis_exps", tuple(factorize(n) for n in basis))

    @property
    def p(self):
        return len(self.basis)

    def with_r(self, r):
        return GroupContext(Q(r), self.basis)

    def slope(self, exponents) -> Rational:
        out = mpq(1)
        for n, s in zip(self.basis, exponents):
            out *= mpq(n) ** int(s)
        return out


def slope_decompose(q, ctx: GroupContext):
    """Exponents (s_i) with prod n_i^s_i = q, or None when q is not in <n_i>."""
    q = Q(q)
    if q <= 0:
        raise ValueError("slopes are positive")
    target = ExponentVector.of(q).as_dict()
    allowed = {p for v in ctx.basis_exps for p in v.primes()}
    if any(p not in allowed for p in target):
        return None
    primes = sorted(allowed)
    # augmented system: columns are basis vectors, rhs is target
    rows = [
        [Fraction(v.as_dict().get(p, 0)) for v in ctx.basis_exps] + [Fraction(target.get(p, 0))]
        for p in primes
    ]
    red, pivots = _row_reduce(rows)
    ncols = len(ctx.basis)
    if ncols in pivots:  # inconsistent
        return None
    sol = [Fraction(0)] * ncols
    for row, c in zip(red, pivots):
        sol[c] = row[-1]
    if any(s.denominator != 1 for s in sol):
        return None
    out = tuple(int(s) for s in sol)
    assert ctx.slope(out) == q
    return out


def in_ring(x, m: int) -> bool:
    """x in Z[1/m]."""
    den = int(Q(x).denominator)
    m = int(m)
    while den != 1:
        g = math.gcd(den, m)
        if g == 1:
            return False
        while den % g == 0:
            den //= g
    return True


def in_dA(x, ctx: GroupContext) -> bool:
    """x in dA = (1 - Lambda)A, i.e. x/d in Z[1/m]."""
    return in_ring(Q(x) / ctx.d, ctx.m)


def bezout(values):
    """(g, coeffs) with g = gcd(values) >= 0 and sum(c*v) = g, folding left to right."""
    values = [int(v) for v in values]
    if not values or all(v == 0 for v in values):
        raise ValueError("bezout needs a nonzero entry")

    def egcd(a, b):
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            qt, a, b = a // b, b, a % b
            x0, x1 = x1, x0 - qt * x1
            y0, y1 = y1, y0 - qt * y1
        return a, x0, y0

    g = values[0]
    coeffs = [1]
    for v in values[1:]:
        g, x, y = egcd(g, v)
        coeffs = [c * x for c in coeffs] + [y]
    if g < 0:
        g, coeffs = -g, [-c for c in coeffs]
    assert sum(c * v for c, v in zip(coeffs, values)) == g
    return g, coeffs


def _pi_ok(Pi: int, d: int) -> bool:
    return (Pi - 1) % d == 0 and math.gcd((Pi - 1) // d, d) == 1


def find_pi(ctx: GroupContext):
    """Exponents alpha_i >= 1 and Pi = prod n_i^alpha_i with gcd((Pi-1)/d, d) = 1."""
    basis, d = ctx.basis, ctx.d
    alphas = [1] * len(basis)
    Pi = math.prod(basis)
    if not _pi_ok(Pi, d):
        ks = [(n - 1) // d for n in basis]
        _, betas = bezout(ks)
        primed = [abs(b) + 1 for b in betas]
        w = sum(k * a for k, a in zip(ks, primed))
        if math.gcd(w, d) == 1:
            alphas = primed
        else:
            scale = d // math.gcd(w, d)
            alphas = [scale * a + b for a, b in zip(primed, betas)]
        Pi = math.prod(n ** a for n, a in zip(basis, alphas))
    if not (all(a >= 1 for a in alphas) and _pi_ok(Pi, d)):
        raise AssertionError(f"find_pi post-check failed for {basis}")
    return alphas, Pi


def common_denominator(values) -> int:
    return reduce(math.lcm, (int(Q(v).denominator) for v in values), 1)


__all__ = [
    "Rational", "Q", "format_rational", "floor", "mod", "ExponentVector", "factorize",
    "vectors_rank", "check_independent", "GroupContext", "slope_decompose", "in_ring",
    "in_dA", "bezout", "find_pi", "common_denominator", "mpz",
]
