import pytest
from hypothesis import given, settings, strategies as st
from math import gcd

from expuiseux import (
    NATURALS,
    NotAMonoid,
    NotClosed,
    NotCofinite,
    nm_from_generators,
    nm_from_small_elements,
    parse_monoid,
)


def sieve(gens, limit):
    """Coin-sieve membership table, written independently of the package."""
    ok = [False] * (limit + 1)
    ok[0] = True
    for k in range(1, limit + 1):
        ok[k] = any(g <= k and ok[k - g] for g in gens)
    return ok


def test_naturals():
    assert NATURALS.frobenius == -1
    assert NATURALS.conductor == 0
    assert [NATURALS.element(n) for n in range(5)] == [0, 1, 2, 3, 4]
    assert all(NATURALS.gap(n) == 1 for n in range(10))
    assert str(NATURALS) == "N"


def test_two_three():
    N = nm_from_generators([2, 3])
    assert N.frobenius == 1
    assert N.small_elements == (0, 2)
    assert N.element(1) == 2 and N.gap(0) == 2 and N.gap(1) == 1


def test_gcd_rejected():
    with pytest.raises(NotCofinite):
        nm_from_generators([4, 6])


def test_sparse_monoid(sparse_monoid):
    N = sparse_monoid
    assert N.frobenius == 35
    assert [N.element(n) for n in range(6)] == [0, 18, 19, 25, 27, 36]
    assert [N.gap(n) for n in range(5)] == [18, 1, 6, 2, 9]
    # worked out by hand: 39..42, 47..49, 51, 53 are not sums of two smaller elements
    assert N.min_generators == (18, 19, 25, 27, 39, 40, 41, 42, 47, 48, 49, 51, 53)
    assert N.conductor_index == 5


def test_small_elements_variants():
    assert nm_from_small_elements([0], 2).frobenius == 1
    N = nm_from_small_elements([0, 3], 5)
    assert N.frobenius == 4 and 3 in N and 4 not in N and 6 in N
    with pytest.raises(NotClosed):
        nm_from_small_elements([0, 2], 5)
    with pytest.raises(NotAMonoid):
        nm_from_small_elements([2, 3], 5)


def test_parse_grammar():
    assert parse_monoid("gens:3,4,5").min_generators == (3, 4, 5)
    assert parse_monoid("elems:0;cond:2").min_generators == (2, 3)
    for bad in ("gens:", "gens:a", "elems:0,2", "2,3"):
        with pytest.raises(ValueError):
            parse_monoid(bad)


def test_index_roundtrip(sparse_monoid):
    for k in range(40):
        assert sparse_monoid.index_of(sparse_monoid.element(k)) == k
    with pytest.raises(ValueError):
        sparse_monoid.index_of(20)
    assert sparse_monoid.index_floor(20) == 2


@pytest.mark.parametrize("a,b,frob", [(3, 5, 7), (4, 7, 17), (5, 9, 31)])
def test_two_generator_frobenius(a, b, frob):
    assert nm_from_generators([a, b]).frobenius == frob


gens_strategy = st.lists(st.integers(2, 15), min_size=1, max_size=4).filter(
    lambda g: gcd(*g) == 1 if len(g) > 1 else False
)


@settings(max_examples=60, deadline=None)
@given(gens_strategy)
def test_membership_matches_sieve(gens):
    N = nm_from_generators(gens)
    limit = N.frobenius + max(N.min_generators) + 1
    table = sieve(gens, limit)
    assert all((k in N) == table[k] for k in range(limit + 1))
    assert N.frobenius not in N
    els = [N.element(k) for k in range(len(N.small_elements) + 5)]
    assert els == sorted(set(els))


@settings(max_examples=40, deadline=None)
@given(gens_strategy)
def test_both_constructors_agree(gens):
    N = nm_from_generators(gens)
    M = nm_from_small_elements(N.small_elements[:-1], N.conductor)
    assert M.min_generators == N.min_generators
    assert M.frobenius == N.frobenius


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 20), st.integers(2, 20))
def test_sylvester(a, b):
    if gcd(a, b) != 1:
        return
    assert nm_from_generators([a, b]).frobenius == a * b - a - b
