import pytest
from gmpy2 import mpq
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from plcircle.arith import GroupContext
from plcircle.harness import SplitMix64, WordSpec, default_generators, random_word
from plcircle.plmap import PLCircleMap

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DENS = (1, 2, 3, 4, 6, 8, 9, 12, 27)


@st.composite
def rationals(draw, lo=0, hi=1, dens=DENS):
    """Rational in [lo, hi) with a small denominator."""
    den = draw(st.sampled_from(dens))
    a, b = int(mpq(lo) * den), int(mpq(hi) * den)
    num = draw(st.integers(a, max(a, b - 1)))
    return mpq(num, den)


@st.composite
def pl_maps(draw, r=1, max_breaks=4):
    """A generic PL circle map on S_r with rational data."""
    r = mpq(r)
    k = draw(st.integers(0, max_breaks))
    xs = sorted(set(draw(st.lists(rationals(0, r), min_size=k, max_size=k))) - {0})
    ys = sorted(set(draw(st.lists(rationals(0, r), min_size=len(xs), max_size=len(xs)))) - {0})
    n = min(len(xs), len(ys))
    xs, ys = xs[:n], ys[:n]
    f0 = draw(rationals(0, r))
    return PLCircleMap._from_nodes(r, r, [mpq(0)] + xs, [f0] + [f0 + y for y in ys])


_GENS = {}


def group_generators(r, basis):
    key = (mpq(r), tuple(basis))
    if key not in _GENS:
        _GENS[key] = default_generators(GroupContext(r, tuple(basis)))
    return _GENS[key]


@st.composite
def group_words(draw, r=1, basis=(2,), max_length=6):
    """Random element of T_{r,(n_i)} as a seeded word in the default generators."""
    seed = draw(st.integers(0, 2 ** 64 - 1))
    spec = WordSpec(tuple(group_generators(r, basis)), max_length, seed)
    return random_word(spec)


@pytest.fixture
def irr_map():
    from plcircle.constructions import boshernitzan
    return boshernitzan(1, 2, mpq(1, 3))


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
