"""Verification suites, random words in the groups and CSV exporters.

Every suite re-checks its cases from primitives (composition, evaluation,
orbit search) instead of trusting the constructors that produced them.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from .arith import GroupContext, Q, find_pi, format_rational, in_ring
from .constructions import (
    boshernitzan, bump_alpha, finite_order_element, finite_order_exists, free_abelian_witness,
    qindependence_check, realize_log_ratio, stein_family,
)
from .conjugacy import has_D_property, pi_invariant, to_boshernitzan
from .codec import map_to_json
from .errors import PLError
from .plmap import PLCircleMap, commute, compose, conjugate, identity, invert, membership, power, rotation
from .rotnum import LogRatio, RationalRho, exact_rational_rho, rho_bounds

MASK64 = (1 << 64) - 1


class SplitMix64:
    """The splitmix64 generator; tiny, seedable and identical on every platform."""

    def __init__(self, seed: int):
        self.state = int(seed) & MASK64

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next()
            if x < limit:
                return x % n

    def between(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)


# ---------------------------------------------------------------------------
# random words


@dataclass(frozen=True)
class WordSpec:
    generators: tuple
    max_length: int
    seed: int

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("need at least one generator")
        if len({g.src for g in gens}) != 1:
            raise ValueError("generators must share one circumference")
        if self.max_length < 0:
            raise ValueError("max_length must be >= 0")
        object.__setattr__(self, "generators", gens)


def _letters(spec: WordSpec, rng: SplitMix64):
    n = 0 if spec.max_length == 0 else rng.between(1, spec.max_length)
    return [(rng.below(len(spec.generators)), rng.below(2) == 1) for _ in range(n)]


def random_word(spec: WordSpec, rng: SplitMix64 | None = None) -> PLCircleMap:
    """Product of at most max_length generators or inverses.

    With no ``rng`` the word depends only on ``spec.seed``; pass a shared
    generator to draw a stream of different words.
    """
    rng = rng if rng is not None else SplitMix64(spec.seed)
    gens = spec.generators
    invs = [invert(g) for g in gens]
    out = identity(gens[0].src)
    for i, inv in _letters(spec, rng):
        out = compose(invs[i] if inv else gens[i], out)
    return out


def _unit_below(span, m, factor):
    """Largest m^-j (j >= 0) with factor * m^-j <= span."""
    u = mpq(1)
    while factor * u > span:
        u /= m
    return u


def default_generators(ctx: GroupContext):
    """Rotation by 1/m plus two bumps per basis element (supports [0, r] and a shifted one)."""
    r, m = ctx.r, ctx.m
    if not in_ring(r, m):
        raise ValueError("default generators need r in Z[1/m]")
    gens = [rotation(r, mpq(1, m))]
    supports = [(mpq(0), r), (mpq(1, m), mpq(1, m) + r * (m - 1) / m)]
    for n in ctx.basis:
        for a0, b0 in supports:
            u = _unit_below(b0 - a0, m, n + 2)
            gens.append(bump_alpha(ctx, n, a0, b0, a0 + u, (n - 1) * u))
    for g in gens:
        if not membership(g, ctx):
            raise AssertionError("default generator left the group")
    return gens


# ---------------------------------------------------------------------------
# reports


@dataclass
class Case:
    params: dict
    verdict: str  # pass | fail | skip
    kind: str = "proof"  # proof | evidence
    expected: object = None
    observed: object = None
    detail: str = ""

    def sort_key(self):
        return tuple((k, (0, v) if isinstance(v, int) else (1, str(v))) for k, v in self.params.items())

    def to_json(self):
        return {"params": self.params, "kind": self.kind, "expected": self.expected,
                "observed": self.observed, "verdict": self.verdict, "detail": self.detail}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    cases: list = field(default_factory=list)
    runtime_ms: int = 0

    def summary(self):
        out = {"pass": 0, "fail": 0, "skip": 0}
        for c in self.cases:
            out[c.verdict] += 1
        return out

    @property
    def ok(self):
        return self.summary()["fail"] == 0

    def to_json(self, with_runtime=True):
        self.cases.sort(key=Case.sort_key)
        d = {"suite": self.suite, "seed": self.seed,
             "cases": [c.to_json() for c in self.cases], "summary": self.summary()}
        if with_runtime:
            d["runtimeMs"] = self.runtime_ms
        return d

    def dumps(self, with_runtime=True):
        return json.dumps(self.to_json(with_runtime), indent=2)


def _run(report: SuiteReport, body):
    t0 = time.perf_counter()
    body(report)
    report.runtime_ms = int((time.perf_counter() - t0) * 1000)
    report.cases.sort(key=Case.sort_key)
    return report


def _rho_json(rho):
    return None if rho is None else rho.to_json()


# ---------------------------------------------------------------------------
# finite-order criterion


def run_thm1_suite(m_range, r_range, q_range, seed: int = 0, samples: int = 3,
                   max_length: int = 8) -> SuiteReport:
    """Finite-order elements in T_{r,m} exist exactly when gcd(m-1, q) divides r."""

    def body(rep):
        rng = SplitMix64(seed)
        gen_cache = {}
        for m, r, q in itertools.product(m_range, r_range, q_range):
            params = {"m": m, "r": r, "q": q}
            ctx = GroupContext(r, (m,))
            expected = r % math.gcd(m - 1, q) == 0
            try:
                exists = finite_order_exists(ctx, q)
                f = finite_order_element(ctx, q, 1)
            except PLError as exc:
                rep.cases.append(Case(params, "fail", expected=expected, detail=exc.name))
                continue
            if exists != expected or (f is None) == expected:
                rep.cases.append(Case(params, "fail", expected=expected, observed=exists,
                                      detail="existence disagrees with the divisibility test"))
                continue
            if f is not None:
                problems = []
                if not membership(f, ctx):
                    problems.append("membership")
                if not power(f, q).is_identity():
                    problems.append("f^q != id")
                if any(power(f, j).is_identity() for j in range(1, q)):
                    problems.append("order below q")
                rho = exact_rational_rho(f)
                if rho != RationalRho(1, q):
                    problems.append(f"rho = {_rho_json(rho)}")
                rep.cases.append(Case(params, "fail" if problems else "pass", expected=True,
                                      observed=True, detail="; ".join(problems) or "order and rho verified"))
                continue
            # no element exists: look for a counterexample among random words
            if (m, r) not in gen_cache:
                gen_cache[(m, r)] = default_generators(ctx)
            spec = WordSpec(tuple(gen_cache[(m, r)]), max_length, seed)
            found = []
            for _ in range(samples):
                w = random_word(spec, rng)
                rho = exact_rational_rho(w)
                if rho is not None and rho.q == q:
                    found.append({"rho": rho.to_json(), "map": map_to_json(w)})
            rep.cases.append(Case(params, "fail" if found else "pass", kind="evidence",
                                  expected=False, observed=found[0] if found else False,
                                  detail=f"{samples} sampled words, none with denominator {q}"
                                  if not found else "sampled word has rotation number with denominator q"))

    return _run(SuiteReport("thm1", seed), body)


# ---------------------------------------------------------------------------
# commuting families


def _verify_family(ctx, k, Pi):
    """Re-check stein_family output from primitives; returns a list of problems."""
    problems = []
    fam = stein_family(ctx, k)
    r = mpq(k * (Pi - 1), ctx.d)
    gctx = ctx.with_r(r)
    for n, f in zip(ctx.basis, fam):
        if f.src != r or not membership(f, gctx):
            problems.append(f"membership of f_{n}")
        if n != Pi and f.jump_at(0) != Pi:
            problems.append(f"jump at 0 of f_{n}")
        if n != Pi and not (f.slopes[0] == n and f.slopes[-1] == mpq(n, Pi)):
            problems.append(f"slopes of f_{n}")
    for f, g in itertools.combinations(fam, 2):
        if compose(f, g) != compose(g, f):
            problems.append("family does not commute")
    return fam, problems


def run_thm2_suite(bases, k_range, seed: int = 0, iters: int = 10 ** 4) -> SuiteReport:
    """Commuting families, their rank certificate, the rank-p obstruction and log-ratio realization."""

    def body(rep):
        for basis, k in itertools.product(bases, k_range):
            basis = tuple(basis)
            params = {"basis": ",".join(map(str, basis)), "k": k}
            try:
                ctx = GroupContext(1, basis)
                _, Pi = find_pi(ctx)
                fam, problems = _verify_family(ctx, k, Pi)
                rhos = [LogRatio.canonical(n, Pi) for n in basis]
                for n, f, rho in zip(basis, fam, rhos):
                    if n == Pi:
                        continue
                    box = rho_bounds(f, iters)
                    if not box.contains_enclosure(rho.enclosure()):
                        problems.append(f"rho_bounds of f_{n} misses log {n}/log {Pi}")
                observed = {"Pi": Pi, "r": format_rational(fam[0].src)}
                if ctx.p >= 2:
                    cert = free_abelian_witness(ctx, k)
                    for f, g in itertools.combinations(cert.members, 2):
                        if compose(f, g) != compose(g, f):
                            problems.append("certificate members do not commute")
                    pis = set()
                    for f in cert.members:
                        v = has_D_property(f)
                        pis.add(pi_invariant(f, v.partition) if v else None)
                    if pis != {Pi}:
                        problems.append("pi invariants differ")
                    if cert.rank != ctx.p - 1:
                        problems.append(f"rank {cert.rank}")
                    full = qindependence_check(rhos)
                    if full:
                        problems.append("all p rotation numbers independent")
                    observed.update(rank=cert.rank, fullRankRefuted=not full)
                    # realize log(n_2)/log(Pi) and compare with the interval estimate
                    g = realize_log_ratio(ctx, basis[1], Pi)
                    target = LogRatio.canonical(basis[1], Pi)
                    if not membership(g, ctx.with_r(g.src)):
                        problems.append("realized map left the group")
                    if not rho_bounds(g, iters).contains_enclosure(target.enclosure()):
                        problems.append("realized map has the wrong rotation number")
                    observed["realizedOn"] = format_rational(g.src)
                rep.cases.append(Case(params, "fail" if problems else "pass",
                                      expected={"Pi": Pi}, observed=observed,
                                      detail="; ".join(problems) or "certificate verified"))
            except PLError as exc:
                rep.cases.append(Case(params, "fail", detail=exc.name))

    return _run(SuiteReport("thm2", seed), body)


# ---------------------------------------------------------------------------
# normal form round trip


def lemma2_check(f: PLCircleMap, iters: int = 10 ** 3):
    """(verdict, detail, observed) for one map."""
    v = has_D_property(f)
    if v.kind != "Yes":
        return "skip", f"(D)-property verdict {v.kind}", {"D": v.kind}
    try:
        F, H, rho = to_boshernitzan(f)
    except PLError as exc:
        return "fail", exc.name, {"D": "Yes"}
    problems = []
    if len(F.breaks()) > 2:
        problems.append("normal form has more than two breaks")
    if conjugate(H, f) != F:
        problems.append("H f H^-1 != F")
    box = rho_bounds(f, iters)
    if isinstance(rho, RationalRho):
        if not box.contains(rho.value):
            problems.append("interval misses the rational rotation number")
    elif not box.contains_enclosure(rho.enclosure()):
        problems.append("interval misses the symbolic rotation number")
    if box.width > mpq(2, iters):
        problems.append("interval too wide")
    return ("fail" if problems else "pass"), "; ".join(problems) or "round trip verified", \
        {"D": "Yes", "breaks": len(F.breaks()), "rho": rho.to_json()}


def run_lemma2_suite(inputs, seed: int = 0, iters: int = 10 ** 3) -> SuiteReport:
    """Normal form round trip per map, then pi equality over commuting (D)-pairs."""

    def body(rep):
        pis = {}
        for i, f in enumerate(inputs):
            verdict, detail, observed = lemma2_check(f, iters)
            if verdict != "skip":
                v = has_D_property(f)
                if v:
                    pis[i] = pi_invariant(f, v.partition)
                    observed["pi"] = format_rational(pis[i])
            rep.cases.append(Case({"input": i}, verdict, observed=observed, detail=detail))
        for i, j in itertools.combinations(sorted(pis), 2):
            f, g = inputs[i], inputs[j]
            if f.src != g.src or not commute(f, g):
                continue
            ok = pis[i] == pis[j]
            rep.cases.append(Case({"input": i, "pair": j}, "pass" if ok else "fail",
                                  expected="equal pi",
                                  observed=[format_rational(pis[i]), format_rational(pis[j])],
                                  detail="commuting pair"))

    return _run(SuiteReport("lemma2", seed), body)


# ---------------------------------------------------------------------------
# staircase export


def _decimal(x, digits, up):
    scale = 10 ** digits
    v = x * scale
    k = math.ceil(v) if up else math.floor(v)
    sign = "-" if k < 0 else ""
    k = abs(k)
    return f"{sign}{k // scale}.{k % scale:0{digits}d}"


FAMILIES = {
    "rotation": lambda t, **_: rotation(1, t),
    "boshernitzan": lambda t, l1=2, **_: boshernitzan(1, l1, t),
}


def export_staircase(family, t0, t1, samples: int, iters: int = 1000, depth: int = 32,
                     digits: int = 12, **family_args):
    """Rows (param, lo, hi, exact) over `samples` equally spaced parameters.

    ``lo``/``hi`` are rounded outward to ``digits`` decimals, so they still
    enclose rho; ``exact`` is "p/q" or "" when the search gives up.
    """
    if samples < 2:
        raise ValueError("samples >= 2")
    make = FAMILIES[family] if isinstance(family, str) else family
    t0, t1 = Q(t0), Q(t1)
    rows = []
    for j in range(samples):
        t = t0 + (t1 - t0) * j / (samples - 1)
        f = make(t, **family_args)
        box = rho_bounds(f, iters)
        rho = exact_rational_rho(f, depth)
        exact = "" if rho is None else format_rational(rho.value)
        rows.append({"param": format_rational(t), "lo": _decimal(box.lo, digits, False),
                     "hi": _decimal(box.hi, digits, True), "exact": exact})
    return rows


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["param", "lo", "hi", "exact"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def default_lemma2_inputs():
    """Commuting families, two rotations and a bump (the bump is expected to be skipped)."""
    out = []
    for basis in ((2, 3), (3, 5)):
        out.extend(stein_family(GroupContext(1, basis), 1))
    out.append(rotation(1, mpq(1, 3)))
    out.append(rotation(5, 2))
    out.append(bump_alpha(GroupContext(1, (2,)), 2, 0, mpq(1, 2), mpq(1, 4), mpq(1, 8)))
    return out
