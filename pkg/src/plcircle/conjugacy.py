"""Break-orbit bookkeeping, the jump-product invariant and reduction of a map
to a two-break normal form that reads off its rotation number symbolically."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .arith import GroupContext, Q, Rational, format_rational, in_ring, mod
from .errors import (
    DNotSatisfied, DuplicatePoints, JumpProductNotOne, NormalFormFailure, NotBoshernitzanForm,
)
from .numerics import Enclosure, h_sigma_iv, h_sigma_lift_point, iv, iv_bounds, iv_of, iv_precision
from .plmap import PLCircleMap, conjugate
from .rotnum import LogRatio, RationalRho

DEFAULT_MAX_ITER = 256


def jump_chain(f: PLCircleMap, k: int, x) -> Rational:
    """Jump of f^k at x by the chain rule: prod_{j<k} sigma_f(f^j(x))."""
    if k < 1:
        raise ValueError("k >= 1")
    out = mpq(1)
    x = mod(Q(x), f.src)
    for _ in range(k):
        out *= f.jump_at(x)
        x = f(x)
    return out


# ---------------------------------------------------------------------------
# orbit partition of the break set


@dataclass(frozen=True)
class OrbitClass:
    anchor: Rational
    iterates: tuple  # anchor, f(anchor), ..., f^l(anchor)
    members: tuple  # the breaks among the iterates
    jump_product: Rational
    cyclic: bool = False

    @property
    def length(self):
        return len(self.iterates) - 1

    @property
    def resolved(self):
        # a closed cycle cannot merge with anything; a trivial product cannot change the verdict
        return self.cyclic or self.jump_product == 1

    def to_json(self):
        return {
            "anchor": format_rational(self.anchor),
            "iterates": [format_rational(x) for x in self.iterates],
            "members": [format_rational(x) for x in self.members],
            "l": self.length,
            "jumpProduct": format_rational(self.jump_product),
            "cyclic": self.cyclic,
        }


@dataclass(frozen=True)
class OrbitPartition:
    classes: tuple
    status: str  # "Complete" | "TruncatedAtBound"
    max_iter: int

    def to_json(self):
        return {"status": self.status, "maxIter": self.max_iter,
                "classes": [c.to_json() for c in self.classes]}


def orbit_partition(f: PLCircleMap, max_iter: int = DEFAULT_MAX_ITER) -> OrbitPartition:
    """Group the breaks of f into pieces of forward orbits."""
    breaks = f.breaks()
    bset = set(breaks)
    nxt = {}
    for b in breaks:
        x = b
        for j in range(1, max_iter + 1):
            x = f(x)
            if x in bset:
                nxt[b] = (x, j)
                break
    has_prev = {y for y, _ in nxt.values()}

    def walk(start, stop_at_start):
        iterates, members = [start], [start]
        cur = start
        while cur in nxt:
            y, j = nxt[cur]
            if stop_at_start and y == start:
                break
            x = cur
            for _ in range(j):
                x = f(x)
                iterates.append(x)
            members.append(y)
            cur = y
        return iterates, members

    classes, seen = [], set()
    for b in breaks:
        if b in has_prev:
            continue
        iterates, members = walk(b, False)
        seen.update(members)
        classes.append(_make_class(f, b, iterates, members, cyclic=False))
    for b in breaks:  # what is left lies on periodic break orbits
        if b in seen:
            continue
        iterates, members = walk(b, True)
        seen.update(members)
        classes.append(_make_class(f, b, iterates, members, cyclic=True))
    status = "Complete" if all(c.resolved for c in classes) else "TruncatedAtBound"
    return OrbitPartition(tuple(classes), status, int(max_iter))


def _make_class(f, anchor, iterates, members, cyclic):
    prod = mpq(1)
    for x in members:
        prod *= f.jump_at(x)
    return OrbitClass(anchor, tuple(iterates), tuple(members), prod, cyclic)


@dataclass(frozen=True)
class DVerdict:
    kind: str  # "Yes" | "No" | "Unknown"
    partition: OrbitPartition
    witness: OrbitClass | None = None
    bound: int | None = None

    def __bool__(self):
        return self.kind == "Yes"

    def to_json(self):
        out = {"verdict": self.kind, "partition": self.partition.to_json()}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        if self.bound is not None:
            out["bound"] = self.bound
        return out


def has_D_property(f: PLCircleMap, max_iter: int = DEFAULT_MAX_ITER) -> DVerdict:
    part = orbit_partition(f, max_iter)
    for c in part.classes:
        if c.cyclic and c.jump_product != 1:
            return DVerdict("No", part, witness=c)
    if part.status != "Complete":
        return DVerdict("Unknown", part, bound=max_iter)
    return DVerdict("Yes", part)


def _require_d(partition: OrbitPartition):
    if partition.status != "Complete" or any(c.jump_product != 1 for c in partition.classes):
        raise DNotSatisfied("the map does not have the (D)-property on this partition")


def pi_invariant(f: PLCircleMap, partition: OrbitPartition) -> Rational:
    _require_d(partition)
    N = max((c.length for c in partition.classes), default=0)
    out = mpq(1)
    for c in partition.classes:
        for x in c.iterates[1:]:
            out *= jump_chain(f, N + 1, x)
    return out


# ---------------------------------------------------------------------------
# the conjugator


def pl_from_jumps(r, breaks, normalize_at=0) -> PLCircleMap:
    """The PL circle map with exactly the given (point, jump) breaks and H(normalize_at) = 0."""
    r = Q(r)
    pts = [(mod(Q(a), r), Q(s)) for a, s in breaks]
    pts = [(a, s) for a, s in pts if s != 1]
    if len({a for a, _ in pts}) != len(pts):
        raise DuplicatePoints("break points must be distinct")
    if any(s <= 0 for _, s in pts):
        raise ValueError("jumps must be positive")
    if math.prod(s for _, s in pts) != 1:
        raise JumpProductNotOne("the product of the jumps must be 1")
    pts.sort()
    if not pts:
        xs, slopes = [mpq(0)], [mpq(1)]
    else:
        xs = [a for a, _ in pts]
        slopes = [mpq(1)]
        for _, s in pts[1:]:
            slopes.append(slopes[-1] * s)
    ends = xs[1:] + [xs[0] + r]
    total = sum(s * (b - a) for s, a, b in zip(slopes, xs, ends))
    slopes = [s * r / total for s in slopes]
    ys = [mpq(0)]
    for s, a, b in zip(slopes, xs, ends):
        ys.append(ys[-1] + s * (b - a))
    nodes_x = xs + [ends[-1]]

    def lift(x):
        x = Q(x)
        k = (x - xs[0]) // r
        x0 = x - k * r
        i = max(i for i, a in enumerate(xs) if a <= x0)
        return ys[i] + slopes[i] * (x0 - xs[i]) + k * r

    c = lift(normalize_at)
    return PLCircleMap.from_lift(r, r, lambda x: lift(x) - c, nodes_x[:-1])


def _candidates(r, excluded, m):
    """Elements of A in [0, r) by increasing denominator, then numerator."""
    den = 1
    while True:
        if m is None or in_ring(mpq(1, den), m):
            top = math.ceil(r * den)
            for num in range(top):
                if math.gcd(num, den) != 1 and not (num == 0 and den == 1):
                    continue
                x = mpq(num, den)
                if x < r and x not in excluded:
                    yield x
        den += 1


def build_H(f: PLCircleMap, partition: OrbitPartition, ctx: GroupContext | None = None,
            max_candidates: int = 500):
    """Conjugator H and the extra break c (None when pi(f) = 1).

    The extra break is taken from Z[1/m] when a context is given; the first
    candidate for which H f H^-1 has the expected two breaks wins.
    """
    Pi = pi_invariant(f, partition)
    N = max((c.length for c in partition.classes), default=0)
    jumps = {}
    excluded = set()
    for cls in partition.classes:
        excluded.update(cls.iterates)
        for x in cls.iterates[1:]:
            jumps[x] = jump_chain(f, N + 1, x)
    if Pi == 1:
        H = pl_from_jumps(f.src, jumps.items(), 0)
        return H, None
    m = ctx.m if ctx is not None else None
    for i, c in enumerate(_candidates(f.src, excluded, m)):
        if i >= max_candidates:
            break
        H = pl_from_jumps(f.src, list(jumps.items()) + [(c, 1 / Pi)], c)
        F = conjugate(H, f)
        if len(F.breaks()) == 2 and F.jump_at(0) == Pi:
            return H, c
    raise NormalFormFailure("no admissible extra break point found")


def to_boshernitzan(f: PLCircleMap, max_iter: int = DEFAULT_MAX_ITER, ctx: GroupContext | None = None):
    """(F, H, rho) with F = H f H^-1 having at most two breaks."""
    verdict = has_D_property(f, max_iter)
    if verdict.kind != "Yes":
        raise DNotSatisfied(f"(D)-property verdict is {verdict.kind}")
    H, c = build_H(f, verdict.partition, ctx)
    F = conjugate(H, f)
    nb = len(F.breaks())
    if c is None:
        if nb != 0:
            raise NormalFormFailure(f"expected a rotation, got {nb} breaks")
        t = F.f0 / F.src
        return F, H, RationalRho(int(t.numerator), int(t.denominator))
    if nb != 2:
        raise NormalFormFailure(f"normal form has {nb} breaks")
    Pi = F.jump_at(0)
    return F, H, LogRatio.canonical(F.slopes[0], Pi)


# ---------------------------------------------------------------------------
# numeric linearization of two-break maps


def numeric_h_sigma(sigma, x, precision_bits: int = 128) -> Enclosure:
    """Enclosure of (sigma^x - 1)/(sigma - 1) of width <= 2^-precision_bits."""
    sigma, x = Q(sigma), Q(x)
    if sigma <= 0 or sigma == 1:
        raise ValueError("sigma must be positive and != 1")
    if x.denominator == 1 and x >= 0:
        val = sum((sigma ** k for k in range(int(x))), mpq(0))
        return Enclosure(val, val)
    target = mpq(1, 2 ** precision_bits)
    bits = precision_bits + 32
    while True:
        with iv_precision(bits):
            e = Enclosure(*iv_bounds(h_sigma_iv(sigma, iv_of(x))))
        if e.width <= target:
            return e
        bits *= 2


def boshernitzan_data(f: PLCircleMap):
    """(lambda1, lambda2, a) for a map with breaks exactly {0, a} and f(a) = 0."""
    br = f.breaks()
    if len(br) != 2 or br[0] != 0 or f(br[1]) != 0:
        raise NotBoshernitzanForm("need exactly two breaks 0 and a with f(a) = 0")
    return f.slopes[0], f.slopes[-1], br[1]


def verify_linearization(f: PLCircleMap, samples: int = 32, precision_bits: int = 128) -> bool:
    """Check f o (r h_sigma) = (r h_sigma) o R_rho at sample points with certified intervals."""
    lam1, lam2, _ = boshernitzan_data(f)
    r = f.src
    sigma = lam1 / lam2
    with iv_precision(precision_bits + 32):
        rho = iv.log(iv_of(lam1)) / iv.log(iv_of(sigma))
        for j in range(samples):
            x = mpq(j, samples)
            u_lo, u_hi = iv_bounds(h_sigma_lift_point(sigma, x) * iv_of(r))
            rhs = Enclosure(f.lift(u_lo), f.lift(u_hi))
            y_lo, y_hi = iv_bounds(iv_of(x) + rho)
            lo = iv_bounds(h_sigma_lift_point(sigma, y_lo) * iv_of(r))[0]
            hi = iv_bounds(h_sigma_lift_point(sigma, y_hi) * iv_of(r))[1]
            if not Enclosure(lo, hi).overlaps(rhs):
                return False
    return True
