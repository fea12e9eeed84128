import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lambdabuildings.scalars import LexScalar, RankMismatchError, compare, scale


def L(*coords):
    return LexScalar(coords)


def test_compare_lexicographic():
    assert compare(L(0, 5), L(1, -100)) == -1
    assert compare(L(2, 3), L(2, 3)) == 0
    assert compare(L(1, 0), L(0, 999)) == 1


def test_compare_rank_mismatch():
    with pytest.raises(RankMismatchError):
        compare(L(1), L(1, 0))


def test_abs():
    assert abs(L(-1, 4)) == L(1, -4)
    assert abs(L(0, 0)) == L(0, 0)
    assert abs(L(3, -7)) == L(3, -7)


def test_scale():
    assert scale(Fraction(1, 2), L(4, 6)) == L(2, 3)
    assert scale(0, L(4, 6)) == L(0, 0)
    assert scale(-1, L(1, 0)) == L(-1, 0)


def test_division_is_exact():
    a = L(1, -3)
    assert (a / 3) * 3 == a
    assert a / Fraction(2, 5) == a * Fraction(5, 2)


def test_string_round_trip():
    a = LexScalar([Fraction(1, 2), Fraction(-3)])
    assert a.to_strings() == ["1/2", "-3/1"]
    assert LexScalar.from_strings(a.to_strings()) == a


def _random_scalar(rng, rank=2):
    return LexScalar(
        Fraction(rng.randint(-50, 50), rng.randint(1, 9)) for _ in range(rank)
    )


def test_translation_invariance_randomized():
    rng = random.Random(7)
    for _ in range(500):
        a, b, c = (_random_scalar(rng) for _ in range(3))
        assert (a <= b) == (a + c <= b + c)


def test_triangle_of_abs_randomized():
    rng = random.Random(11)
    for _ in range(500):
        a, b = _random_scalar(rng), _random_scalar(rng)
        lhs, rhs = abs(a + b), abs(a) + abs(b)
        assert lhs <= rhs
        if a.sign() * b.sign() >= 0:
            assert lhs == rhs


rationals = st.builds(
    Fraction, st.integers(min_value=-50, max_value=50), st.integers(min_value=1, max_value=20)
)
scalars = st.tuples(rationals, rationals).map(LexScalar)


@given(scalars, scalars, scalars)
def test_order_respects_addition(a, b, c):
    assert (a <= b) == (a + c <= b + c)


@given(rationals, rationals, scalars)
def test_scale_composes(q1, q2, a):
    assert scale(q1 * q2, a) == scale(q1, scale(q2, a))


@given(scalars)
def test_halving_is_exact(a):
    assert a / 2 + a / 2 == a
