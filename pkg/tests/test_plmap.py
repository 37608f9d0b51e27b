import math

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from plcircle.arith import GroupContext
from plcircle.codec import map_from_json, map_to_json
from plcircle.errors import CircumferenceMismatch, LengthMismatch, NonPositiveSlope, Unsorted
from plcircle.plmap import (
    PLCircleMap, commute, compose, conjugate, identity, invert, membership, power, rescale, rotation,
)

from conftest import group_words, pl_maps, rationals


def test_two_break_map_breaks(irr_map):
    assert irr_map.breaks() == [0, mpq(2, 5)]
    assert irr_map(mpq(2, 5)) == 0
    assert irr_map.f0 == mpq(1, 5)
    # jump at 0 is lambda_0 / lambda_last
    assert irr_map.jump_at(0) == 6
    assert irr_map.jump_at(mpq(2, 5)) == mpq(1, 6)


def test_inverse_of_two_break_map(irr_map):
    g = invert(irr_map)
    assert g.slopes == (3, mpq(1, 2))
    assert g.breaks() == [0, mpq(1, 5)]
    assert compose(g, irr_map).is_identity()


@pytest.mark.parametrize("pieces,f0,err", [
    ([(0, 2), (mpq(1, 2), 0)], 0, NonPositiveSlope),
    ([(mpq(1, 2), 1)], 0, Unsorted),
    ([(0, 1), (mpq(1, 2), 2)], 0, LengthMismatch),
])
def test_validation(pieces, f0, err):
    with pytest.raises(err):
        PLCircleMap(1, pieces, f0)


def test_equal_slopes_merge():
    f = PLCircleMap(1, [(0, 1), (mpq(1, 2), 1)], mpq(1, 3))
    assert f == rotation(1, mpq(1, 3))


def test_circumference_mismatch():
    with pytest.raises(CircumferenceMismatch):
        compose(rotation(1, 0), rotation(2, 0))


def test_power_of_rotation():
    assert power(rotation(1, mpq(2, 7)), 7).is_identity()
    assert power(rotation(1, mpq(2, 7)), -3) == rotation(1, mpq(1, 7))


@given(pl_maps(), pl_maps(), pl_maps())
def test_associativity(f, g, h):
    assert compose(f, compose(g, h)) == compose(compose(f, g), h)


@given(pl_maps())
def test_inverse_and_identity(f):
    one = identity(1)
    assert compose(f, invert(f)) == one == compose(invert(f), f)
    assert compose(f, one) == f


@given(pl_maps(), rationals(0, 1))
def test_lift_inverse_pointwise(f, x):
    assert f.lift_inv(f.lift(x)) == x
    assert f.inv(f(x)) == x


@given(pl_maps(), pl_maps())
def test_jump_cocycle(f, g):
    # sigma_{f o g}(x) = sigma_f(g(x)) * sigma_g(x)
    fg = compose(f, g)
    for x in set(g.breaks()) | {g.inv(a) for a in f.breaks()} | {mpq(0)}:
        assert fg.jump_at(x) == f.jump_at(g(x)) * g.jump_at(x)


@given(pl_maps())
def test_jump_product_is_one(f):
    assert math.prod(j.value for j in f.jumps()) == 1


@given(pl_maps())
def test_json_roundtrip(f):
    assert map_from_json(map_to_json(f)) == f


@given(group_words(basis=(2,)), group_words(basis=(2,)))
def test_group_closure_T12(f, g):
    ctx = GroupContext(1, (2,))
    assert membership(f, ctx) and membership(g, ctx)
    assert membership(compose(f, g), ctx)
    assert membership(invert(f), ctx)


@given(group_words(r=5, basis=(2, 3), max_length=4))
def test_group_closure_T5_23(f):
    assert membership(f, GroupContext(5, (2, 3)))


def test_membership_rejects_two_break(irr_map):
    assert not membership(irr_map, GroupContext(1, (2, 3)))


def test_disjoint_bumps_commute():
    from plcircle.constructions import bump_alpha
    ctx = GroupContext(1, (2,))
    a = bump_alpha(ctx, 2, 0, mpq(1, 2), mpq(1, 4), mpq(1, 8))
    b = bump_alpha(ctx, 2, mpq(1, 2), 1, mpq(3, 4), mpq(1, 8))
    assert commute(a, b)


@given(pl_maps(), st.sampled_from([2, 3, mpq(1, 2), mpq(5, 3)]))
def test_rescale_is_conjugation(f, c):
    g = rescale(f, c)
    assert g.src == c
    x = mpq(1, 7)
    assert g.lift(c * x) == c * f.lift(x)


@given(pl_maps(), pl_maps())
def test_conjugate_identity(f, h):
    assert conjugate(h, f) == compose(h, compose(f, invert(h)))
    assert conjugate(identity(1), f) == f
