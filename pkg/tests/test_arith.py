import doctest
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from oplimits import arith
from oplimits.arith import (
    SnRelation,
    Supernatural,
    prime_factors,
    rat_perfect_power,
    reduced_root,
    sn_compare,
    sn_from_periodic,
)


def test_doctests():
    failures, _ = doctest.testmod(arith)
    assert failures == 0


@pytest.mark.parametrize("n, expected", [(1, {}), (12, {2: 2, 3: 1}), (97, {97: 1}), (1024, {2: 10})])
def test_prime_factors(n, expected):
    assert prime_factors(n) == expected


def test_prime_factors_rejects_zero():
    with pytest.raises(ValueError):
        prime_factors(0)


@pytest.mark.parametrize("q, expected", [
    (1, (Fraction(1), 1)),
    (4, (Fraction(2), 2)),
    (Fraction(8, 27), (Fraction(2, 3), 3)),
    (Fraction(4, 27), (Fraction(4, 27), 1)),
    (Fraction(1, 64), (Fraction(1, 2), 6)),
    (72, (Fraction(72), 1)),
])
def test_reduced_root(q, expected):
    assert reduced_root(q) == expected


@given(st.fractions(min_value=Fraction(1, 50), max_value=50).filter(lambda q: q > 0))
def test_reduced_root_is_a_root_and_has_no_deeper_root(q):
    root, e = reduced_root(q)
    assert root ** e == q
    if root != 1:
        assert reduced_root(root)[1] == 1


@given(st.integers(1, 10**6))
def test_rat_perfect_power_roundtrip(n):
    base, e = rat_perfect_power(n)
    assert base ** e == n


def test_reduced_root_rejects_nonpositive():
    with pytest.raises(ValueError):
        reduced_root(0)


def test_supernatural_from_periodic():
    s = sn_from_periodic([3, 2], [2])
    assert s == Supernatural.from_parts({3: 1}, {2})
    assert str(s) == "3*2^inf"
    assert str(sn_from_periodic([], [1])) == "1"
    assert sn_from_periodic([12], [5]).finite_exponents == {2: 2, 3: 1}


def test_supernatural_validation():
    with pytest.raises(ValueError):
        Supernatural(((4, 1),))
    with pytest.raises(ValueError):
        Supernatural(((2, 1),), frozenset({2}))
    with pytest.raises(ValueError):
        sn_from_periodic([2], [])


@pytest.mark.parametrize("a, b, rel", [
    (([], [2]), ([], [4]), SnRelation.EQUAL),
    (([3], [2]), ([], [2]), SnRelation.FINITELY_EQUIVALENT),
    (([], [2]), ([], [6]), SnRelation.INEQUIVALENT),
    (([], [1]), ([5], [1]), SnRelation.FINITELY_EQUIVALENT),
])
def test_sn_compare(a, b, rel):
    assert sn_compare(sn_from_periodic(*a), sn_from_periodic(*b)) is rel
    assert sn_compare(sn_from_periodic(*b), sn_from_periodic(*a)) is rel
