from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from expuiseux import (
    NATURALS,
    Direction,
    Extremal,
    Factorization,
    InsufficientCoefficient,
    NotAtomic,
    SemiringClass,
    nm_from_generators,
    parse_element,
    parse_rational,
    sr_atom,
    sr_divides,
    sr_extremal,
    sr_factorizations,
    sr_is_extremal,
    sr_member,
    sr_new,
    sr_pi,
    sr_rewrite,
)
from expuiseux.checks import default_pool
from expuiseux.semiring import ExpressionError

POOL = default_pool()


def test_classes():
    assert sr_new(F(3), NATURALS).cls is SemiringClass.TRIVIAL
    assert sr_new(F(1, 2), NATURALS).cls is SemiringClass.NON_ATOMIC
    assert sr_new(F(2, 3), nm_from_generators([2, 3])).cls is SemiringClass.ATOMIC_BELOW_ONE
    assert sr_new(F(5, 2), NATURALS).cls is SemiringClass.ATOMIC_ABOVE_ONE


def test_atoms(s23, sparse_monoid):
    assert sr_atom(s23, 2) == F(4, 9)
    assert sr_atom(sr_new(F(2, 3), sparse_monoid), 1) == F(2**18, 3**18)
    with pytest.raises(NotAtomic):
        sr_atom(sr_new(F(1, 2), NATURALS), 0)


def test_pi(s52, sparse_monoid):
    S = sr_new(F(2, 3), sparse_monoid)
    assert sr_pi(S, Factorization()) == 0
    assert sr_pi(S, Factorization({1: 2, 3: 4})) == 2 * F(2, 3) ** 18 + 4 * F(2, 3) ** 25
    assert sr_pi(s52, Factorization({1: 2})) == 5


def test_rewrite_examples(s23, s52, sparse_monoid):
    assert sr_rewrite(s23, Factorization({0: 2}), 0, Direction.UP) == Factorization({1: 3})
    assert sr_rewrite(s52, Factorization({1: 2}), 0, Direction.DOWN) == Factorization({0: 5})
    S = sr_new(F(2, 3), sparse_monoid)
    assert sr_rewrite(S, Factorization({0: 2**18}), 0, Direction.UP) == Factorization({1: 3**18})
    with pytest.raises(InsufficientCoefficient):
        sr_rewrite(s23, Factorization({0: 1}), 0, Direction.UP)


def test_extremal_examples(s23, s52):
    z5 = Factorization({0: 5})
    assert sr_extremal(s52, z5, Extremal.MIN) == Factorization({1: 2})
    assert sr_extremal(s52, z5, Extremal.MAX) == z5
    assert sr_extremal(s23, Factorization({1: 3}), Extremal.MIN) == Factorization({0: 2})
    assert sr_extremal(s23, Factorization({1: 3}), Extremal.MAX) is None
    assert sr_extremal(s23, Factorization(), Extremal.MAX) == Factorization()
    assert sr_is_extremal(s23, Factorization({0: 2}), Extremal.MIN)
    assert not sr_is_extremal(s23, Factorization({1: 3}), Extremal.MIN)
    assert sr_is_extremal(s52, z5, Extremal.MAX)


def test_member_examples(s23, sparse_monoid):
    assert sr_member(s23, F(0)) == Factorization()
    assert sr_member(s23, F(1, 3)) is None
    S = sr_new(F(2, 3), sparse_monoid)
    x, _ = parse_element("2*r^18+4*r^25", S)
    assert sr_member(S, x).length == 6


def test_divides(s52):
    assert sr_divides(s52, F(1), F(5))
    assert sr_divides(s52, F(5, 2), F(5))
    assert not sr_divides(s52, F(1), F(5, 2))


def test_factorization_examples(s23, s52):
    fs = sr_factorizations(s52, F(5))
    assert fs.complete and list(fs) == [Factorization({0: 5}), Factorization({1: 2})]
    fs = sr_factorizations(s23, F(2), exp_cap=3)
    assert not fs.complete
    assert set(fs) == {
        Factorization({0: 2}),
        Factorization({1: 3}),
        Factorization({1: 1, 2: 3}),
        Factorization({1: 1, 2: 1, 3: 3}),
    }
    nothing = sr_factorizations(s52, F(3, 2))
    assert nothing.complete and len(nothing) == 0


def test_parse_rational_and_element(s23, sparse_monoid):
    assert parse_rational("4/6") == F(2, 3)
    assert parse_rational(" 7 ") == 7
    for bad in ("", "1/0", "-1", "2.5", "a/b"):
        with pytest.raises(ValueError):
            parse_rational(bad)
    S = sr_new(F(2, 3), sparse_monoid)
    with pytest.raises(ExpressionError) as err:
        parse_element("2*r^18+r^20", S)
    assert err.value.position == 7
    assert parse_element("r+3", s23) == (F(2, 3) + 3, Factorization({1: 1, 0: 3}))


def test_factorization_algebra():
    a, b = Factorization({0: 3, 2: 1}), Factorization({0: 1, 1: 4})
    assert a.gcd(b) == Factorization({0: 1})
    assert a.distance(b) == 4
    assert (a + b).length == 9
    assert a - Factorization({0: 3}) == Factorization({2: 1})


factorizations = st.dictionaries(st.integers(0, 8), st.integers(1, 9), min_size=1, max_size=4).map(Factorization)


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(POOL), factorizations, st.integers(0, 8), st.sampled_from(list(Direction)))
def test_rewrite_preserves_value(S, z, k, direction):
    need = S.up_cost(k) if direction is Direction.UP else S.up_gain(k)
    z = z + Factorization({k if direction is Direction.UP else k + 1: need})
    w = sr_rewrite(S, z, k, direction)
    assert sr_pi(S, w) == sr_pi(S, z)
    sign = 1 if direction is Direction.UP else -1
    assert w.length - z.length == sign * (S.up_gain(k) - S.up_cost(k))
    assert (w.length - z.length) % S.step == 0


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(POOL), factorizations)
def test_min_form_is_the_member_answer(S, z):
    x = sr_pi(S, z)
    zmin = sr_extremal(S, z, Extremal.MIN)
    assert sr_is_extremal(S, zmin, Extremal.MIN)
    assert sr_pi(S, zmin) == x
    assert zmin.length <= z.length
    assert sr_member(S, x) == zmin


small_factorizations = st.dictionaries(st.integers(0, 4), st.integers(1, 5), min_size=1, max_size=3).map(Factorization)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([S for S in POOL if S.above_one]), small_factorizations)
def test_complete_sets_above_one(S, z):
    fs = sr_factorizations(S, sr_pi(S, z))
    assert fs.complete and z in fs.items
    assert sum(sr_is_extremal(S, w, Extremal.MIN) for w in fs) == 1
    assert sum(sr_is_extremal(S, w, Extremal.MAX) for w in fs) == 1
    assert len({w.length % S.step for w in fs}) == 1
