from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from plcircle.arith import (
    ExponentVector, GroupContext, Q, bezout, check_independent, factorize, find_pi, format_rational,
    in_dA, in_ring, mod, slope_decompose, vectors_rank,
)


def test_q_accepts_exact_inputs():
    assert Q("3/6") == mpq(1, 2)
    assert Q(Fraction(2, 4)) == mpq(1, 2)
    assert Q(5) == 5
    assert Q(" -7/21 ") == mpq(-1, 3)


@pytest.mark.parametrize("bad", [0.5, "0.5", "1e3", ""])
def test_q_refuses_floats(bad):
    with pytest.raises((TypeError, ValueError)):
        Q(bad)


def test_format_rational():
    assert format_rational(mpq(6, 3)) == "2"
    assert format_rational(mpq(-2, 5)) == "-2/5"


def test_mod_range():
    assert mod(mpq(-1, 3), 1) == mpq(2, 3)
    assert mod(mpq(7, 2), 2) == mpq(3, 2)


def test_factorize_examples():
    assert factorize(360).as_dict() == {2: 3, 3: 2, 5: 1}
    assert factorize(1).as_dict() == {}
    assert factorize(97).as_dict() == {97: 1}


@given(st.integers(1, 10 ** 6))
def test_factorize_roundtrip(n):
    assert factorize(n).value() == n


def test_exponent_vector_arithmetic():
    a, b = ExponentVector.of(mpq(4, 3)), ExponentVector.of(6)
    assert (a * b).value() == 8
    assert (a ** -2).value() == mpq(9, 16)
    assert a.inverse().value() == mpq(3, 4)
    assert str(ExponentVector.of(mpq(1))) == "1"


def test_independence():
    assert check_independent([2, 3])
    assert check_independent([2, 3, 5])
    assert not check_independent([2, 4])
    assert not check_independent([6, 12, 18])
    with pytest.raises(ValueError):
        GroupContext(1, (2, 4))


def test_group_context_derived_fields():
    ctx = GroupContext(1, (3, 5))
    assert (ctx.m, ctx.d, ctx.p) == (15, 2, 2)
    ctx = GroupContext(1, (2, 3, 5))
    assert (ctx.m, ctx.d) == (30, 1)


def test_vectors_rank():
    v = ExponentVector.of
    assert vectors_rank([v(6), v(3)]) == 2
    assert vectors_rank([v(6), v(2), v(3)]) == 2
    assert vectors_rank([]) == 0


def test_slope_decompose():
    ctx = GroupContext(1, (2, 3))
    assert slope_decompose(mpq(2, 9), ctx) == (1, -2)
    assert slope_decompose(5, ctx) is None
    ctx = GroupContext(1, (4, 6))
    assert slope_decompose(mpq(3, 2), ctx) == (-1, 1)
    assert slope_decompose(2, ctx) is None  # 2 = 4^(1/2) is not allowed


def test_in_ring():
    assert in_ring(mpq(5, 36), 6)
    assert not in_ring(mpq(2, 5), 6)
    assert in_ring(7, 2)


def test_in_dA():
    ctx = GroupContext(1, (3,))
    assert in_dA(mpq(2, 9), ctx)
    assert not in_dA(1, ctx)
    assert in_dA(1, GroupContext(1, (2, 3)))


@given(st.lists(st.integers(-500, 500), min_size=1, max_size=5).filter(any))
def test_bezout_identity(values):
    g, coeffs = bezout(values)
    assert sum(c * v for c, v in zip(coeffs, values)) == g
    assert g == __import__("math").gcd(*values)


def test_bezout_examples():
    assert bezout([3, 5]) == (1, [2, -1])
    assert bezout([2, 4]) == (2, [1, 0])


@pytest.mark.parametrize("basis,Pi", [((2, 3), 6), ((3, 5), 15), ((2, 3, 5), 30), ((4, 7), 112)])
def test_find_pi(basis, Pi):
    ctx = GroupContext(1, basis)
    alphas, got = find_pi(ctx)
    assert got == Pi
    assert all(a >= 1 for a in alphas)
    assert (Pi - 1) % ctx.d == 0 and __import__("math").gcd((Pi - 1) // ctx.d, ctx.d) == 1


# (1 - Lambda)A = dA, sampled both ways
@given(st.sampled_from([(2,), (3,), (3, 5), (4, 7), (2, 3)]), st.integers(-3, 3), st.integers(-3, 3),
       st.integers(-50, 50), st.integers(0, 3))
def test_one_minus_lambda_A_inside_dA(basis, s1, s2, num, e):
    ctx = GroupContext(1, basis)
    lam = ctx.slope([s1, s2][: ctx.p])
    a = mpq(num, ctx.m ** e)
    assert in_dA((1 - lam) * a, ctx)


@given(st.sampled_from([(2,), (3,), (3, 5), (4, 7), (2, 3)]), st.integers(-50, 50), st.integers(0, 3))
def test_dA_inside_sums_of_one_minus_lambda_A(basis, num, e):
    ctx = GroupContext(1, basis)
    x = ctx.d * mpq(num, ctx.m ** e)
    g, coeffs = bezout([n - 1 for n in ctx.basis])
    # x = sum (1 - n_i) * a_i with a_i = -c_i x / d in A
    parts = [-c * x / g for c in coeffs]
    assert all(in_ring(a, ctx.m) for a in parts)
    assert sum((1 - n) * a for n, a in zip(ctx.basis, parts)) == x
