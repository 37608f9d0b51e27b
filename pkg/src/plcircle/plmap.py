"""Piecewise-linear circle homeomorphisms with exact group operations.

A map is stored through one lift on [0, src): sorted piece left endpoints
(0 first), the slope on each piece, and the lift value f0 in [0, dst) at 0.
``PLHomeo`` allows different source and target circumferences, which covers
homotheties and interval identifications; ``PLCircleMap`` is the src == dst case.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from gmpy2 import mpq

from .arith import GroupContext, Q, Rational, floor, in_ring, mod, slope_decompose
from .errors import CircumferenceMismatch, LengthMismatch, NonPositiveSlope, Unsorted


@dataclass(frozen=True)
class Jump:
    at: Rational
    value: Rational


class PLHomeo:
    """Orientation-preserving PL homeomorphism S_src -> S_dst, canonical form."""

    __slots__ = ("src", "dst", "lefts", "slopes", "f0", "values", "_hash")

    def __init__(self, src, dst, pieces, f0, *, merge=True):
        src, dst, f0 = Q(src), Q(dst), Q(f0)
        if src <= 0 or dst <= 0:
            raise ValueError("circumferences must be positive")
        pieces = [(Q(a), Q(s)) for a, s in pieces]
        if not pieces or pieces[0][0] != 0:
            raise Unsorted("the first piece must start at 0")
        lefts = [a for a, _ in pieces]
        if any(b <= a for a, b in zip(lefts, lefts[1:])) or lefts[-1] >= src:
            raise Unsorted("piece endpoints must increase strictly inside [0, r)")
        if any(s <= 0 for _, s in pieces):
            raise NonPositiveSlope("slopes must be positive")
        if not 0 <= f0 < dst:
            raise ValueError("f0 must lie in [0, r)")
        if merge:
            merged = [pieces[0]]
            for a, s in pieces[1:]:
                if s != merged[-1][1]:
                    merged.append((a, s))
            pieces = merged
        lefts = tuple(a for a, _ in pieces)
        slopes = tuple(s for _, s in pieces)
        values = [f0]
        for i, s in enumerate(slopes):
            right = lefts[i + 1] if i + 1 < len(lefts) else src
            values.append(values[-1] + s * (right - lefts[i]))
        if values[-1] - f0 != dst:
            raise LengthMismatch(
                f"sum of slope*length is {values[-1] - f0}, expected {dst}")
        self.src, self.dst, self.f0 = src, dst, f0
        self.lefts, self.slopes = lefts, slopes
        self.values = tuple(values)  # lift values at lefts, then at src
        self._hash = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def _from_nodes(cls, src, dst, xs, ys):
        """Build from lift samples at sorted xs in [0, src) (xs[0] = 0) covering
        every breakpoint; ys are the lift values there."""
        shift = floor(ys[0] / dst) * dst
        pieces = []
        n = len(xs)
        for i in range(n):
            x1 = xs[i + 1] if i + 1 < n else src
            y1 = ys[i + 1] if i + 1 < n else ys[0] + dst
            pieces.append((xs[i], (y1 - ys[i]) / (x1 - xs[i])))
        return _build(src, dst, pieces, ys[0] - shift)

    @classmethod
    def from_lift(cls, src, dst, func, points):
        """Build from a callable lift and a superset of its breakpoints."""
        src, dst = Q(src), Q(dst)
        xs = sorted({mod(Q(p), src) for p in points} | {mpq(0)})
        return cls._from_nodes(src, dst, xs, [func(x) for x in xs])

    # -- evaluation -------------------------------------------------------------

    def lift(self, x):
        """Value of the canonical lift at any rational x."""
        x = Q(x)
        k = floor(x / self.src)
        x0 = x - k * self.src
        i = bisect_right(self.lefts, x0) - 1
        return self.values[i] + self.slopes[i] * (x0 - self.lefts[i]) + k * self.dst

    def __call__(self, x):
        """Value on the circle, in [0, dst)."""
        return mod(self.lift(x), self.dst)

    def lift_inv(self, y):
        """Inverse of the canonical lift."""
        y = Q(y)
        k = floor((y - self.f0) / self.dst)
        y0 = y - k * self.dst
        i = bisect_right(self.values, y0, 0, len(self.lefts)) - 1
        return self.lefts[i] + (y0 - self.values[i]) / self.slopes[i] + k * self.src

    def inv(self, y):
        return mod(self.lift_inv(y), self.src)

    def _piece(self, x):
        x0 = mod(Q(x), self.src)
        return bisect_right(self.lefts, x0) - 1, x0

    def slope_right(self, x):
        i, _ = self._piece(x)
        return self.slopes[i]

    def slope_left(self, x):
        i, x0 = self._piece(x)
        if x0 == self.lefts[i]:
            i -= 1  # wraps to the last piece when i == 0
        return self.slopes[i]

    def jump_at(self, x):
        i, x0 = self._piece(x)
        if x0 != self.lefts[i]:
            return mpq(1)
        return self.slopes[i] / self.slopes[i - 1]

    # -- structure --------------------------------------------------------------

    def jumps(self):
        """True breaks with their jumps (right slope / left slope), cyclically."""
        out = []
        for i, a in enumerate(self.lefts):
            j = self.slopes[i] / self.slopes[i - 1]
            if j != 1:
                out.append(Jump(a, j))
        return out

    def breaks(self):
        return [j.at for j in self.jumps()]

    @property
    def pieces(self):
        return list(zip(self.lefts, self.slopes))

    def images(self):
        """Images (mod dst) of the subdivision points, 0 included."""
        return [mod(v, self.dst) for v in self.values[:-1]]

    def is_identity(self):
        return self.src == self.dst and len(self.slopes) == 1 and self.slopes[0] == 1 and self.f0 == 0

    def inverse(self):
        return PLHomeo.from_lift(self.dst, self.src, self.lift_inv, self.values[:-1])

    def __eq__(self, other):
        if not isinstance(other, PLHomeo):
            return NotImplemented
        return (self.src, self.dst, self.f0, self.lefts, self.slopes) == (
            other.src, other.dst, other.f0, other.lefts, other.slopes)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.src, self.dst, self.f0, self.lefts, self.slopes))
        return self._hash

    def __repr__(self):
        from .arith import format_rational as fr
        body = ", ".join(f"({fr(a)}, {fr(s)})" for a, s in self.pieces)
        if self.src == self.dst:
            return f"PLCircleMap(r={fr(self.src)}, f0={fr(self.f0)}, pieces=[{body}])"
        return f"PLHomeo({fr(self.src)}->{fr(self.dst)}, f0={fr(self.f0)}, pieces=[{body}])"


def _build(src, dst, pieces, f0):
    if src == dst:
        return PLCircleMap(src, pieces, f0)
    return PLHomeo(src, dst, pieces, f0)


class PLCircleMap(PLHomeo):
    """PL homeomorphism of the circle S_r = R / rZ."""

    __slots__ = ()

    def __init__(self, r, pieces, f0, *, merge=True):
        super().__init__(r, r, pieces, f0, merge=merge)

    @property
    def r(self):
        return self.src


def from_pieces(r, pieces, f0) -> PLCircleMap:
    """Validating constructor; adjacent equal slopes are merged."""
    return PLCircleMap(r, pieces, f0)


def identity(r) -> PLCircleMap:
    return PLCircleMap(r, [(0, 1)], 0)


def rotation(r, a) -> PLCircleMap:
    r = Q(r)
    return PLCircleMap(r, [(0, 1)], mod(Q(a), r))


def homothety(r, factor) -> PLHomeo:
    """x -> factor*x from S_r to S_{factor*r}."""
    r, factor = Q(r), Q(factor)
    return _build(r, factor * r, [(0, factor)], 0)


def evaluate(f: PLHomeo, x):
    return f.lift(x)


def compose(f: PLHomeo, g: PLHomeo) -> PLHomeo:
    """f o g (apply g first)."""
    if g.dst != f.src:
        raise CircumferenceMismatch(f"cannot compose: {g.dst} != {f.src}")
    pts = list(g.lefts) + [g.lift_inv(a) for a in f.lefts]

    def h(x):
        return f.lift(g.lift(x))

    return PLHomeo.from_lift(g.src, f.dst, h, pts)


def invert(f: PLHomeo) -> PLHomeo:
    return f.inverse()


def conjugate(h: PLHomeo, f: PLHomeo) -> PLHomeo:
    """h o f o h^-1."""
    return compose(h, compose(f, h.inverse()))


def power(f: PLCircleMap, n: int) -> PLCircleMap:
    """f^n by binary exponentiation."""
    n = int(n)
    if n < 0:
        f, n = f.inverse(), -n
    result = identity(f.src)
    base = f
    while n:
        if n & 1:
            result = compose(result, base)
        n >>= 1
        if n:
            base = compose(base, base)
    return result


def jumps(f: PLHomeo):
    return f.jumps()


def membership(f: PLCircleMap, ctx: GroupContext) -> bool:
    """Slopes in <n_i>, subdivision points and their images in Z[1/m]."""
    if f.src != ctx.r or f.dst != ctx.r:
        raise CircumferenceMismatch(f"map lives on S_{f.src}, context is S_{ctx.r}")
    return homeo_in_group(f, ctx)


def homeo_in_group(f: PLHomeo, ctx: GroupContext) -> bool:
    """The membership test without the circumference check (interval maps etc.)."""
    if any(slope_decompose(s, ctx) is None for s in f.slopes):
        return False
    if not all(in_ring(a, ctx.m) for a in f.lefts):
        return False
    return all(in_ring(v, ctx.m) for v in f.values[:-1])


def rescale(f: PLCircleMap, factor) -> PLCircleMap:
    """Conjugate by the homothety S_r -> S_{factor*r}."""
    factor = Q(factor)
    if factor <= 0:
        raise ValueError("rescale factor must be positive")
    return conjugate(homothety(f.src, factor), f)


def equals(f: PLHomeo, g: PLHomeo) -> bool:
    return f == g


def commute(f: PLCircleMap, g: PLCircleMap) -> bool:
    return compose(f, g) == compose(g, f)
