import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from expuiseux import BudgetExceeded, Factorization, sr_member, sr_pi
from expuiseux.checks import default_pool, nonmember_candidates, oracle_member_decision, random_factorization
from expuiseux.oracle import (
    KnapsackInstance,
    _two_variable_solutions,
    integerize,
    low_form_bounds,
    oracle_minimal_bouquets,
    oracle_representations,
    solve_knapsack,
)

POOL = default_pool()


def test_integerize(s52):
    inst = integerize(s52, F(5), [0, 1, 2])
    assert inst.weights == (4, 10, 25) and inst.target == 20


def test_representations(s23, s52):
    assert oracle_representations(s52, F(5), [0, 1, 2]) == [Factorization({0: 5}), Factorization({1: 2})]
    assert oracle_representations(s23, F(1, 3), [0, 1], low_form_bounds(s23, [0, 1])) == []
    assert oracle_representations(s52, F(0), [0]) == [Factorization()]


def test_bouquets(s52):
    small = oracle_minimal_bouquets(s52, 0, 3, 3)
    assert Factorization({0: 1}) in small and Factorization({1: 2}) in small
    five_halves = oracle_minimal_bouquets(s52, 1, 5, 3)
    assert Factorization({1: 1}) in five_halves
    assert Factorization({0: 5}) in five_halves
    assert all(z[0] != 4 for z in five_halves)


def test_bouquets_need_r_above_one(s23):
    with pytest.raises(ValueError):
        oracle_minimal_bouquets(s23, 0, 2, 2)


def test_budget_carries_partial():
    inst = KnapsackInstance(1000, (1, 2, 3, 5), (None,) * 4, (0, 1, 2, 3))
    with pytest.raises(BudgetExceeded) as err:
        solve_knapsack(inst, budget=50)
    assert isinstance(err.value.partial, list)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 30), st.integers(1, 30), st.integers(0, 300), st.integers(0, 40) | st.none())
def test_two_variable_solver(a, b, target, cap):
    expected = {(u, v) for u in range(target // a + 1) for v in range(target // b + 1)
                if a * u + b * v == target and (cap is None or (u <= cap and v <= cap))}
    assert set(_two_variable_solutions(a, b, target, cap, cap)) == expected


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=1, max_size=4), st.integers(0, 60))
def test_knapsack_against_product_enumeration(weights, target):
    from itertools import product
    n = len(weights)
    inst = KnapsackInstance(target, tuple(weights), (None,) * n, tuple(range(n)))
    got = {tuple(z[i] for i in range(n)) for z in solve_knapsack(inst)}
    ranges = [range(target // w + 1) for w in weights]
    want = {c for c in product(*ranges) if sum(ci * wi for ci, wi in zip(c, weights)) == target}
    assert got == want


@pytest.mark.parametrize("S", POOL, ids=lambda S: f"{S.r}@{S.N.spec()}")
def test_membership_agrees(S):
    rng = random.Random(11)
    for i in range(40):
        z = random_factorization(S, rng)
        x = sr_pi(S, z) if i % 2 else nonmember_candidates(S, rng)
        assert (sr_member(S, x) is not None) == oracle_member_decision(S, x, 10**6)


@pytest.mark.parametrize("S", POOL, ids=lambda S: f"{S.r}@{S.N.spec()}")
def test_representations_evaluate_back(S):
    rng = random.Random(5)
    for _ in range(10):
        x = sr_pi(S, random_factorization(S, rng, max_index=3, max_coeff=3))
        window = list(range(S.N.conductor_index + 4))
        bounds = low_form_bounds(S, window) if S.below_one else None
        for z in oracle_representations(S, x, window, bounds):
            assert sr_pi(S, z) == x
