"""Rotation numbers of PL circle maps.

Everything is decided with exact arithmetic.  The lift fixed by
``f0 in [0, r)`` has translation number in [0, 1], so rho(f) mod 1 is read off
it directly.  The Stern-Brocot search compares rho against each mediant p/q;
Poincare's criterion (rho = p/q iff f^q(x) = x + p*r has a solution) gives the
exact answer, and the orbit of 0 gives a cheap one-sided answer that is used
first.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath
from gmpy2 import mpq, mpz

from .arith import (
    ExponentVector, GroupContext, Q, Rational, common_denominator, factorize, floor,
    format_rational, in_ring, mod, slope_decompose,
)
from .errors import NotMAdic
from .numerics import Enclosure, iv, iv_bounds, iv_of, iv_precision
from .plmap import PLCircleMap, compose

DEFAULT_DEPTH = 64


# ---------------------------------------------------------------------------
# value types


@dataclass(frozen=True)
class RationalRho:
    p: int
    q: int

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if q <= 0:
            raise ValueError("q must be positive")
        g = math.gcd(p, q)
        p, q = (p // g) % (q // g), q // g
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def value(self) -> Rational:
        return mpq(self.p, self.q)

    def to_json(self):
        return {"kind": "rational", "p": str(self.p), "q": str(self.q)}


@dataclass(frozen=True)
class LogRatio:
    """log(alpha) / log(beta) with 1 < alpha < beta, both positive rationals."""

    alpha: ExponentVector
    beta: ExponentVector

    @classmethod
    def canonical(cls, alpha, beta):
        """Normalize log(alpha)/log(beta) mod 1 into the form 1 < alpha < beta.

        Returns a RationalRho(0, 1) when the value is an integer.
        """
        a, b = Q(alpha), Q(beta)
        if a <= 0 or b <= 0 or b == 1:
            raise ValueError("need alpha > 0 and beta > 0, beta != 1")
        if b < 1:
            a, b = 1 / a, 1 / b
        av, bv = ExponentVector.of(a), ExponentVector.of(b)
        # alpha * beta^-j lands in [1, beta)
        while a >= b:
            a /= b
            av = av * bv.inverse()
        while a < 1:
            a *= b
            av = av * bv
        if a == 1:
            return RationalRho(0, 1)
        return cls(av, bv)

    @property
    def alpha_value(self) -> Rational:
        return self.alpha.value()

    @property
    def beta_value(self) -> Rational:
        return self.beta.value()

    def numeric(self, dps=30):
        with mpmath.workdps(dps):
            a, b = self.alpha_value, self.beta_value
            return mpmath.log(mpmath.mpf(int(a.numerator)) / int(a.denominator)) / mpmath.log(
                mpmath.mpf(int(b.numerator)) / int(b.denominator))

    def enclosure(self, bits=128) -> Enclosure:
        """Certified rational interval around the value."""
        with iv_precision(bits + 16):
            v = iv.log(iv_of(self.alpha_value)) / iv.log(iv_of(self.beta_value))
            return Enclosure(*iv_bounds(v))

    def same_as(self, other) -> bool:
        """Sufficient test: exponent vectors proportional with the same ratio."""
        if not isinstance(other, LogRatio):
            return False
        if self == other:
            return True
        primes = sorted(set(self.alpha.primes()) | set(self.beta.primes())
                        | set(other.alpha.primes()) | set(other.beta.primes()))
        a1, b1 = self.alpha.as_dict(), self.beta.as_dict()
        a2, b2 = other.alpha.as_dict(), other.beta.as_dict()
        # alpha1^k = alpha2^l and beta1^k = beta2^l for a common (k, l)
        ratio = None
        for p in primes:
            for x, y in ((a1.get(p, 0), a2.get(p, 0)), (b1.get(p, 0), b2.get(p, 0))):
                if x == 0 and y == 0:
                    continue
                if x == 0 or y == 0:
                    return False
                r = mpq(y, x)
                if ratio is None:
                    ratio = r
                elif r != ratio:
                    return False
        return ratio is not None

    def to_json(self):
        return {"kind": "logratio", "alpha": str(self.alpha), "beta": str(self.beta)}


@dataclass(frozen=True)
class CertifiedInterval:
    """Exact interval of width hi - lo holding rho mod 1.

    ``lo`` is normalized into [0, 1); ``hi`` may exceed 1, in which case the
    interval wraps through 0 (see :meth:`parts`).
    """

    lo: Rational
    hi: Rational

    @property
    def width(self):
        return self.hi - self.lo

    def parts(self):
        """The interval as one or two pieces inside [0, 1]."""
        if self.hi <= 1:
            return [(self.lo, self.hi)]
        return [(self.lo, mpq(1)), (mpq(0), self.hi - 1)]

    def contains(self, x) -> bool:
        x = mod(Q(x), 1)
        return any(a <= x <= b for a, b in self.parts()) or (x == 0 and self.hi >= 1)

    def contains_real(self, x) -> bool:
        """Membership for an mpmath value, mod 1."""
        x = x - mpmath.floor(x)
        for a, b in self.parts():
            if _q_to_mpf(a) <= x <= _q_to_mpf(b):
                return True
        return False

    def contains_enclosure(self, e: Enclosure) -> bool:
        """True when the whole certified enclosure e lies inside (mod 1)."""
        shift = floor(e.lo)
        lo, hi = e.lo - shift, e.hi - shift
        return any(a <= lo and hi <= b for a, b in self.parts())

    def to_json(self):
        return {"kind": "interval", "lo": format_rational(self.lo), "hi": format_rational(self.hi)}


def rotation_number_from_json(d):
    kind = d["kind"]
    if kind == "rational":
        return RationalRho(int(d["p"]), int(d["q"]))
    if kind == "logratio":
        return LogRatio(ExponentVector.of(Q(d["alpha"])), ExponentVector.of(Q(d["beta"])))
    if kind == "interval":
        return CertifiedInterval(Q(d["lo"]), Q(d["hi"]))
    raise ValueError(f"unknown rotation number kind {kind!r}")


def _q_to_mpf(x):
    return mpmath.mpf(int(x.numerator)) / int(x.denominator)


class Cmp(enum.Enum):
    LESS = "Less"
    EQUAL = "Equal"
    GREATER = "Greater"


# ---------------------------------------------------------------------------
# fast exact orbits


class Orbit:
    """Exact forward orbit x, f(x), f^2(x), ... of the canonical lift.

    The state is ``K*r + N/(L*E)`` with ``0 <= N/(L*E) < r``; L is a fixed
    common denominator of the map data and E accumulates slope denominators,
    so one step costs a handful of big-by-small integer products and no
    rational normalization.
    """

    _REDUCE_EVERY = 16

    def __init__(self, f: PLCircleMap, x=0, shift=0):
        r = f.src
        x = Q(x)
        self.r = r
        self.L = L = common_denominator(list(f.lefts) + list(f.values) + [r, x])
        self.A = [mpz(a * L) for a in f.lefts]
        self.V = [mpz(v * L) for v in f.values[:-1]]
        self.num = [mpz(s.numerator) for s in f.slopes]
        self.den = [mpz(s.denominator) for s in f.slopes]
        # E only ever picks up these primes, so they are the only common factors to strip
        self.primes = sorted({p for d in self.den for p in factorize(int(d)).primes()})
        self.R = mpz(r * L)
        self.shift = int(shift)
        k = floor(x / r)
        self.K = k
        self.N = mpz((x - k * r) * L)
        self.E = mpz(1)
        self.n = 0

    def step(self):
        A, N, E = self.A, self.N, self.E
        lo, hi = 0, len(A) - 1
        while lo < hi:  # largest i with A[i]*E <= N
            mid = (lo + hi + 1) >> 1
            if A[mid] * E <= N:
                lo = mid
            else:
                hi = mid - 1
        i = lo
        b = self.den[i]
        N = self.V[i] * b * E + self.num[i] * (N - A[i] * E)
        E = b * E
        RE = self.R * E
        K = self.K + self.shift
        while N >= RE:
            N -= RE
            K += 1
        self.n += 1
        if self.n % self._REDUCE_EVERY == 0:
            for p in self.primes:
                while E % p == 0 and N % p == 0:
                    N //= p
                    E //= p
        self.N, self.E, self.K = N, E, K

    def advance_to(self, n):
        while self.n < n:
            self.step()

    def value(self) -> Rational:
        return self.K * self.r + mpq(self.N, self.L * self.E)

    def sign_vs(self, p) -> int:
        """Sign of (current value - p*r)."""
        if self.K != p:
            return 1 if self.K > p else -1
        return 0 if self.N == 0 else 1


# ---------------------------------------------------------------------------
# displacement and comparison


def _displacement_samples(f: PLCircleMap, p, q):
    """(x, g(x)) for g(x) = f^q(x) - x - p*r at a superset of the breakpoints of f^q.

    The breakpoints of f^q are f^-j(b) for subdivision points b and 0 <= j < q,
    and f^q(f^-j(b)) = f^(q-j)(b), so two orbits per point suffice.
    """
    r = f.src
    out = []
    for b in f.lefts:
        fwd = [b]
        for _ in range(q):
            fwd.append(f.lift(fwd[-1]))
        x = b
        for j in range(q):
            out.append((x, fwd[q - j] - x - p * r))
            x = f.lift_inv(x)
    return out


def displacement_extrema(f: PLCircleMap, p, q):
    """Exact (min, max) of f^q(x) - x - p*r over the circle."""
    q = int(q)
    if q < 1:
        raise ValueError("q >= 1")
    vals = [g for _, g in _displacement_samples(f, int(p), q)]
    return min(vals), max(vals)


def _state(o: Orbit):
    return o.K, o.N, o.L * o.E


def _displacement_signs(f: PLCircleMap, p, q):
    """Signs of f^q(x) - x - p*r at the same points as _displacement_samples.

    Works on raw orbit states: with values K*r + a and a in [0, r), the sign
    is decided by the K's unless they tie, and then by one cross product.
    """
    finv = f.inverse()
    c = (finv.lift(0) - f.lift_inv(0)) / f.src  # canonical inverse lift = true inverse + c*r
    c = int(c)
    signs = set()
    for b in f.lefts:
        fw = Orbit(f, b)
        fwd = [_state(fw)]
        for _ in range(q):
            fw.step()
            fwd.append(_state(fw))
        bw = Orbit(finv, b, shift=-c)
        for j in range(q):
            K1, N1, D1 = fwd[q - j]
            K2, N2, D2 = _state(bw)
            d = K1 - K2 - p
            if d != 0:
                signs.add(1 if d > 0 else -1)
            else:
                t = N1 * D2 - N2 * D1
                signs.add((t > 0) - (t < 0))
            if len(signs) > 1 or 0 in signs:
                return signs
            bw.step()
    return signs


def compare_rho(f: PLCircleMap, p, q) -> Cmp:
    """Compare rho(f) (as the translation number of the canonical lift) with p/q."""
    q = int(q)
    if q < 1:
        raise ValueError("q >= 1")
    signs = _displacement_signs(f, int(p), q)
    if signs == {1}:
        return Cmp.GREATER
    if signs == {-1}:
        return Cmp.LESS
    return Cmp.EQUAL


# ---------------------------------------------------------------------------
# Stern-Brocot search


def exact_rational_rho(f: PLCircleMap, max_depth: int = DEFAULT_DEPTH):
    """rho(f) as a RationalRho when it is a Stern-Brocot mediant of depth
    <= max_depth, else None.

    Each mediant is first compared against the orbit of 0, which only yields a
    non-strict inequality; an endpoint kept by the descent is certified
    strictly once a later mediant lands between it and rho, or by the exact
    displacement test when that does not happen soon enough.
    """
    if max_depth < 1:
        raise ValueError("max_depth >= 1")
    if compare_rho(f, 0, 1) is Cmp.EQUAL or compare_rho(f, 1, 1) is Cmp.EQUAL:
        return RationalRho(0, 1)

    orbit = Orbit(f)
    # endpoint: [p, q, depth, certified, age]
    lo = [0, 1, 0, True, 0]
    hi = [1, 1, 0, True, 0]
    checkpoints = (4, 16, 64, 256)

    def settle(end):
        """Exact test for an endpoint that stayed uncertified too long."""
        if compare_rho(f, end[0], end[1]) is Cmp.EQUAL:
            return True
        end[3] = True
        return False

    depth = 0
    extra = 0
    while True:
        depth += 1
        p, q = lo[0] + hi[0], lo[1] + hi[1]
        orbit.advance_to(q)
        s = orbit.sign_vs(p)
        if s == 0:
            # 0 is periodic of type p/q
            return RationalRho(p, q) if depth <= max_depth else None
        node = [p, q, depth, False, 0]
        if s > 0:
            lo[:] = node
            hi[4] += 1
        else:
            hi[:] = node
            lo[4] += 1
        for end in (lo, hi):
            if not end[3] and end[4] in checkpoints and settle(end):
                return RationalRho(end[0], end[1]) if end[2] <= max_depth else None
        if depth >= max_depth:
            pending = [e for e in (lo, hi) if not e[3] and e[2] <= max_depth]
            if not pending:
                return None
            extra += 1
            if extra > 32:
                for end in pending:
                    if settle(end):
                        return RationalRho(end[0], end[1])
                return None


def rho_bounds(f: PLCircleMap, n: int) -> CertifiedInterval:
    """Interval [c - 1/n, c + 1/n] mod 1 with c = f^n(0)/(r n); holds rho(f)."""
    n = int(n)
    if n < 1:
        raise ValueError("n >= 1")
    orbit = Orbit(f)
    orbit.advance_to(n)
    c = orbit.value() / (f.src * n)
    lo = c - mpq(1, n)
    shift = floor(lo)
    return CertifiedInterval(lo - shift, c + mpq(1, n) - shift)


def periodic_point(f: PLCircleMap, p, q):
    """Least x in [0, r) with f^q(x) = x + p*r, or None."""
    p, q = int(p), int(q)
    r = f.src
    nodes = {}
    for x, g in _displacement_samples(f, p, q):
        nodes[mod(x, r)] = g
    xs = sorted(nodes)
    pts = [(x, nodes[x]) for x in xs] + [(r, nodes[xs[0]])]
    for (x0, g0), (x1, g1) in zip(pts, pts[1:]):
        if g0 == 0:
            return x0
        if (g0 < 0) != (g1 < 0) and g1 != 0:
            return x0 - g0 * (x1 - x0) / (g1 - g0)
        if g1 == 0 and x1 < r:
            return x1
    return None


def order_of(f: PLCircleMap, max_order: int):
    """Least q <= max_order with f^q = id, or None."""
    g = f
    for k in range(1, int(max_order) + 1):
        if g.is_identity():
            return k
        g = compose(g, f)
    return None


# ---------------------------------------------------------------------------
# m-adic orbit diagnostic


@dataclass(frozen=True)
class MadicProfile:
    m: int
    entries: tuple  # (k, M, N) with f^k(0) = M / m^N
    slope_log: tuple  # exponent of D(f^k)(0) in base m

    def to_json(self):
        return {
            "m": self.m,
            "entries": [{"n": k, "M": str(M), "N": N} for k, M, N in self.entries],
            "slopeLog": list(self.slope_log),
        }


def _madic(x, m):
    """(M, N) with x = M/m^N and N minimal."""
    if x == 0:
        return 0, 0
    N = 0
    while (x * mpq(m) ** N).denominator != 1:
        N += 1
    M = x * mpq(m) ** N
    return int(M.numerator), N


def madic_profile(f: PLCircleMap, ctx: GroupContext, n: int) -> MadicProfile:
    if ctx.p != 1:
        raise NotMAdic("the m-adic profile needs a single-generator context")
    m = ctx.m
    exps = [slope_decompose(s, ctx) for s in f.slopes]
    if any(e is None for e in exps) or not all(in_ring(v, m) for v in list(f.lefts) + list(f.values)):
        raise NotMAdic("map data are not m-adic")
    entries, logs = [], [0]
    x = mpq(0)
    for k in range(int(n) + 1):
        M, N = _madic(x, m)
        entries.append((k, M, N))
        if k < n:
            i = f._piece(x)[0]
            logs.append(logs[-1] + exps[i][0])
            x = f(x)
    return MadicProfile(m, tuple(entries), tuple(logs))
