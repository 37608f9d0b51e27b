"""Constructors for the explicit families: two-break maps with irrational
rotation number, finite-order elements, interval identifications realizing
the length criterion, commuting families and the local bumps."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from gmpy2 import mpq

from .arith import (
    GroupContext, Q, bezout, find_pi, format_rational, in_dA, in_ring, mod, slope_decompose, vectors_rank,
)
from .errors import (
    CircumferenceMismatch, FactorizationFailure, MixedDenominators, NonIntegerCircumference,
    NotRealizable, ParameterOutOfRange, RankUnavailable, SlopesOnSameSideOfOne,
)
from .plmap import PLCircleMap, PLHomeo, commute, compose, conjugate, homeo_in_group, identity, membership, rotation
from .rotnum import LogRatio, RationalRho, exact_rational_rho, order_of


# ---------------------------------------------------------------------------
# two-break maps


def boshernitzan(r, lambda1, lambda2) -> PLCircleMap:
    """Map with breaks 0 and a, slope lambda1 on [0, a), lambda2 on [a, r), f(a) = 0."""
    r, l1, l2 = Q(r), Q(lambda1), Q(lambda2)
    if l1 <= 0 or l2 <= 0 or (l1 - 1) * (l2 - 1) >= 0:
        raise SlopesOnSameSideOfOne("need one slope above 1 and one below")
    a = r * (1 - l2) / (l1 - l2)
    return PLCircleMap(r, [(0, l1), (a, l2)], r - l1 * a)


def boshernitzan_rho(lambda1, lambda2):
    """Rotation number log l1 / (log l1 - log l2) as a normalized LogRatio."""
    l1, l2 = Q(lambda1), Q(lambda2)
    return LogRatio.canonical(l1, l1 / l2)


# ---------------------------------------------------------------------------
# interval identifications


@dataclass(frozen=True)
class BSWitness:
    """PL homeomorphism [0, l] -> [0, l'] fixing 0, stored as a map S_l -> S_l'."""

    map: PLHomeo
    source_length: object
    target_length: object

    def check(self, ctx: GroupContext) -> bool:
        w = self.map
        return (w.src == self.source_length and w.dst == self.target_length and w.f0 == 0
                and homeo_in_group(w, ctx))

    def to_json(self):
        from .codec import map_to_json
        d = map_to_json(self.map)
        d["sourceLength"] = format_rational(self.source_length)
        d["targetLength"] = format_rational(self.target_length)
        return d


def bs_equivalent(l, lp, ctx: GroupContext) -> bool:
    return in_dA(Q(l) - Q(lp), ctx)


def _stretch(L, n, s):
    """Slope n on [0, s], slope 1 after: [0, L] -> [0, L + (n-1)s]."""
    pieces = [(0, mpq(n))] if s == L else [(0, mpq(n)), (s, 1)]
    return PLHomeo(L, L + (n - 1) * s, pieces, 0)


def _shrink(L, n, t):
    """Slope 1/n on [0, n t], slope 1 after: [0, L] -> [0, L - (n-1)t]."""
    pieces = [(0, mpq(1, n))] if n * t == L else [(0, mpq(1, n)), (n * t, 1)]
    return PLHomeo(L, L - (n - 1) * t, pieces, 0)


def bs_witness(l, lp, ctx: GroupContext):
    """A PL identification [0, l] -> [0, lp] inside the group data, or None."""
    l, lp = Q(l), Q(lp)
    if l <= 0 or lp <= 0:
        raise ValueError("lengths must be positive")
    if not bs_equivalent(l, lp, ctx):
        return None
    w = PLHomeo(l, l, [(0, 1)], 0)
    delta = lp - l
    if delta != 0:
        _, coeffs = bezout([n - 1 for n in ctx.basis])
        amounts = [c * delta / ctx.d for c in coeffs]
        L = l
        # stretches first so the running length never drops below min(l, lp)
        for n, s in zip(ctx.basis, amounts):
            while s > 0:
                step = min(s, L)
                move = _stretch(L, n, step)
                w, L, s = compose(move, w), move.dst, s - step
        for n, s in zip(ctx.basis, amounts):
            t = -s
            while t > 0:
                step = min(t, L / n)
                move = _shrink(L, n, step)
                w, L, t = compose(move, w), move.dst, t - step
        assert L == lp
    out = BSWitness(w, l, lp)
    if not out.check(ctx):
        raise AssertionError("bs_witness produced an invalid identification")
    return out


def transport(f: PLCircleMap, w: BSWitness) -> PLCircleMap:
    """w f w^-1 on S_lp."""
    if f.src != w.source_length:
        raise CircumferenceMismatch(f"map on S_{f.src}, witness starts at {w.source_length}")
    return conjugate(w.map, f)


# ---------------------------------------------------------------------------
# finite order


def _single_generator(ctx: GroupContext):
    if ctx.p != 1:
        raise ValueError("finite-order criterion is stated for a single generator m")
    if ctx.r.denominator != 1:
        raise NonIntegerCircumference("r must be an integer")
    return ctx.basis[0], int(ctx.r)


def finite_order_exists(ctx: GroupContext, q: int) -> bool:
    m, r = _single_generator(ctx)
    return r % math.gcd(m - 1, int(q)) == 0


def finite_order_element(ctx: GroupContext, q: int, p: int = 1):
    """Element of order q and rotation number p/q in T_{r,m}, or None."""
    m, r = _single_generator(ctx)
    q, p = int(q), int(p)
    if q < 1 or math.gcd(p, q) != 1:
        raise ParameterOutOfRange("need q >= 1 and gcd(p, q) = 1")
    if not finite_order_exists(ctx, q):
        return None
    u = 1
    while (r - u * q) % (m - 1) != 0:
        u += 1
    rot = rotation(u * q, u * p)
    w = bs_witness(u * q, r, ctx)
    f = transport(rot, w)
    if not (membership(f, ctx) and order_of(f, q) == q and exact_rational_rho(f) == RationalRho(p, q)):
        raise NotRealizable("finite-order element failed verification")
    return f


# ---------------------------------------------------------------------------
# commuting families with irrational rotation numbers


def stein_family(ctx: GroupContext, k: int = 1):
    """Two-break maps with slopes (n_i, n_i/Pi) on S_{k(Pi-1)/d}.

    For a single generator the family degenerates to the identity.
    """
    _, Pi = find_pi(ctx)
    r = mpq(int(k) * (Pi - 1), ctx.d)
    gctx = ctx.with_r(r)
    out = []
    for n in ctx.basis:
        f = identity(r) if n == Pi else boshernitzan(r, n, mpq(n, Pi))
        if not membership(f, gctx):
            raise AssertionError(f"family member for n={n} left the group")
        if n != Pi and f.jump_at(0) != Pi:
            raise AssertionError("family member has the wrong jump at 0")
        out.append(f)
    return out


@dataclass(frozen=True)
class FreeAbelianCertificate:
    members: tuple
    Pi: int
    rhos: tuple
    rank: int
    r: object

    def to_json(self):
        from .codec import map_to_json
        return {
            "circumference": format_rational(self.r),
            "Pi": str(self.Pi),
            "rank": self.rank,
            "rhos": [x.to_json() for x in self.rhos],
            "members": [map_to_json(f) for f in self.members],
        }


def qindependence_check(rhos) -> bool:
    """{1} u {log a_i / log b} independent over Q, for a common b."""
    rhos = list(rhos)
    if not rhos:
        return True
    betas = {x.beta for x in rhos}
    if len(betas) != 1:
        raise MixedDenominators("all log-ratios must share the same beta")
    vecs = [rhos[0].beta] + [x.alpha for x in rhos]
    return vectors_rank(vecs) == len(vecs)


def free_abelian_witness(ctx: GroupContext, k: int = 1) -> FreeAbelianCertificate:
    from .conjugacy import has_D_property, pi_invariant

    if ctx.p < 2:
        raise RankUnavailable("rank p-1 needs at least two generators")
    _, Pi = find_pi(ctx)
    family = stein_family(ctx, k)
    members = tuple(family[1:])
    rhos = tuple(LogRatio.canonical(n, Pi) for n in ctx.basis[1:])
    for f, g in itertools.combinations(members, 2):
        if not commute(f, g):
            raise AssertionError("family members do not commute")
    for f in members:
        v = has_D_property(f)
        if v.kind != "Yes" or pi_invariant(f, v.partition) != Pi:
            raise AssertionError("family member has the wrong invariant")
    rank = len(rhos) if qindependence_check(rhos) else 0
    return FreeAbelianCertificate(members, Pi, rhos, rank, members[0].src)


def realize_log_ratio(ctx: GroupContext, alpha, beta, bound: int = 16) -> PLCircleMap:
    """Two-break map in T_{d n, (n_i)} with rotation number log alpha / log beta.

    Needs beta - 1 = d * n * lam with n a positive integer and lam in <n_i>;
    lam is searched in the exponent box |s_i| <= bound; the smallest exponent
    norm wins, then the smallest n.
    """
    alpha, beta = Q(alpha), Q(beta)
    if not 1 < alpha < beta:
        raise ParameterOutOfRange("need 1 < alpha < beta")
    if slope_decompose(alpha, ctx) is None or slope_decompose(beta, ctx) is None:
        raise ParameterOutOfRange("alpha and beta must lie in <n_i>")
    X = (beta - 1) / ctx.d
    best = None
    for s in itertools.product(range(-bound, bound + 1), repeat=ctx.p):
        n = X / ctx.slope(s)
        if n.denominator == 1:
            key = (sum(map(abs, s)), n, s)
            if best is None or key < best:
                best = key
    if best is None:
        raise FactorizationFailure("no decomposition beta - 1 = d n lam found in the exponent box")
    _, n, s = best
    r = ctx.d * n
    lam = ctx.slope(s)
    f = boshernitzan(r, alpha, alpha / beta)
    assert f.breaks()[1] == (beta - alpha) / (alpha * lam)
    if not membership(f, ctx.with_r(r)):
        raise FactorizationFailure("realized map is not in the group")
    return f


# ---------------------------------------------------------------------------
# local bumps


def bump_alpha(ctx: GroupContext, k, a0, b0, x0, alpha) -> PLCircleMap:
    """Slopes k, 1, 1/k on [a0, b0] pushing x0 to x0 + alpha; identity elsewhere.

    a0 < x0 < b0 are lift coordinates with b0 - a0 <= r.
    """
    k, a0, b0, x0, alpha = int(k), Q(a0), Q(b0), Q(x0), Q(alpha)
    r = ctx.r
    if k < 2 or slope_decompose(mpq(k), ctx) is None:
        raise ParameterOutOfRange("k must be an integer >= 2 in the slope group")
    if not (a0 < x0 < b0 and b0 - a0 <= r):
        raise ParameterOutOfRange("need a0 < x0 < b0 within one chart")
    if not all(in_ring(v, ctx.m) for v in (a0, b0, alpha)):
        raise ParameterOutOfRange("a0, b0, alpha must lie in Z[1/m]")
    bound = (k - 1) * min(x0 - a0, (b0 - x0) / k)
    if not 0 < alpha <= bound:
        raise ParameterOutOfRange(f"alpha must lie in (0, {format_rational(bound)}]")
    a1 = a0 + alpha / (k - 1)
    b1 = b0 - k * alpha / (k - 1)

    def local(x):
        if x <= a1:
            return k * x + (1 - k) * a0
        if x <= b1:
            return x + alpha
        return x / k + mpq(k - 1, k) * b0

    def lift(x):
        shift = -math.floor((x - a0) / r) * r
        y = x + shift
        return (local(y) if y <= b0 else y) - shift

    f = PLCircleMap.from_lift(r, r, lift, [a0, a1, b1, b0])
    if not membership(f, ctx) or f(x0) != mod(x0 + alpha, r):
        raise AssertionError("bump failed verification")
    return f
