import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from plcircle.arith import GroupContext
from plcircle.conjugacy import (
    boshernitzan_data, build_H, has_D_property, jump_chain, numeric_h_sigma, orbit_partition,
    pi_invariant, pl_from_jumps, to_boshernitzan, verify_linearization,
)
from plcircle.constructions import boshernitzan, bump_alpha, stein_family
from plcircle.errors import DNotSatisfied, JumpProductNotOne, NotBoshernitzanForm
from plcircle.plmap import compose, conjugate, power, rotation
from plcircle.rotnum import LogRatio, RationalRho

from conftest import group_words, pl_maps, rationals


def test_two_break_partition(irr_map):
    part = orbit_partition(irr_map)
    assert part.status == "Complete"
    (cls,) = part.classes
    assert cls.anchor == mpq(2, 5) and cls.iterates == (mpq(2, 5), 0)
    assert cls.jump_product == 1


def test_two_break_normal_form(irr_map):
    F, H, rho = to_boshernitzan(irr_map)
    assert rho == LogRatio.canonical(2, 6)
    assert len(F.breaks()) == 2 and F.jump_at(0) == 6
    assert conjugate(H, irr_map) == F
    assert pi_invariant(irr_map, orbit_partition(irr_map)) == 6


def test_rotation_pi_is_one():
    f = rotation(1, mpq(1, 3))
    F, H, rho = to_boshernitzan(f)
    assert rho == RationalRho(1, 3) and F.breaks() == []


def test_bump_has_no_D_property():
    f = bump_alpha(GroupContext(1, (2,)), 2, 0, mpq(1, 2), mpq(1, 4), mpq(1, 8))
    v = has_D_property(f)
    assert v.kind == "No"
    with pytest.raises(DNotSatisfied):
        to_boshernitzan(f)


@given(pl_maps(), rationals(0, 1), st.integers(1, 4))
def test_jump_chain_matches_power(f, x, k):
    assert jump_chain(f, k, x) == power(f, k).jump_at(x)


def test_pl_from_jumps():
    H = pl_from_jumps(1, [(mpq(1, 4), 2), (mpq(3, 4), mpq(1, 2))])
    assert H(0) == 0
    assert {j.at for j in H.jumps()} == {mpq(1, 4), mpq(3, 4)}
    with pytest.raises(JumpProductNotOne):
        pl_from_jumps(1, [(mpq(1, 4), 2)])


@pytest.mark.parametrize("basis", [(2, 3), (3, 5), (2, 3, 5)])
def test_stein_members_round_trip(basis):
    for f in stein_family(GroupContext(1, basis), 1):
        if f.is_identity():
            continue
        F, H, rho = to_boshernitzan(f, ctx=GroupContext(f.src, basis))
        assert len(F.breaks()) == 2
        assert isinstance(rho, LogRatio)


@given(group_words(r=5, basis=(2, 3), max_length=3))
def test_pi_is_conjugation_invariant(h):
    f = stein_family(GroupContext(1, (2, 3)), 1)[0]
    g = conjugate(h, f)
    v = has_D_property(g)
    assert v.kind == "Yes"
    assert pi_invariant(g, v.partition) == 6
    F, _, rho = to_boshernitzan(g)
    assert len(F.breaks()) <= 2 and rho == LogRatio.canonical(2, 6)


def test_numeric_h_sigma():
    assert numeric_h_sigma(2, 3).lo == 7
    e = numeric_h_sigma(6, mpq(1, 2))
    assert e.width <= mpq(1, 2 ** 128)
    import mpmath
    mpmath.mp.dps = 50
    v = (mpmath.sqrt(6) - 1) / 5
    assert mpmath.mpf(e.lo.numerator) / e.lo.denominator <= v <= mpmath.mpf(e.hi.numerator) / e.hi.denominator


def test_linearization(irr_map):
    assert verify_linearization(irr_map)
    with pytest.raises(NotBoshernitzanForm):
        boshernitzan_data(rotation(1, mpq(1, 3)))


def test_linearization_detects_a_wrong_map(irr_map):
    # same slopes, wrong break: not of the two-break form with f(a) = 0
    bad = compose(rotation(1, mpq(1, 7)), irr_map)
    with pytest.raises(NotBoshernitzanForm):
        boshernitzan_data(bad)
