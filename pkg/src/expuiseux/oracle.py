"""Brute-force ground truth for small instances.

Everything here is deliberately naive: clear denominators, then run a plain
depth-first bounded knapsack.  Nothing from the rewriting theory is used, so
these routines can check the fast paths in :mod:`expuiseux.semiring`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import gcd
from typing import Optional, Sequence

from .errors import BudgetExceeded
from .semiring import DEFAULT_BUDGET, Factorization, Semiring, SemiringClass


@dataclass(frozen=True)
class KnapsackInstance:
    target: int
    weights: tuple[int, ...]
    bounds: tuple[Optional[int], ...]
    indices: tuple[int, ...]


def integerize(S: Semiring, x: Fraction, window: Sequence[int], bounds=None) -> Optional[KnapsackInstance]:
    """Scale ``pi(z) = x`` by ``d**s_max`` so every quantity is an integer.

    Returns None when ``x`` has a denominator the window's atoms cannot produce.
    """
    window = sorted(window)
    if S.cls is SemiringClass.TRIVIAL:
        exps = [0 for _ in window]
    else:
        exps = [S.s(k) for k in window]
    top = max(exps)
    n, d = S.n, S.d
    if S.cls is SemiringClass.TRIVIAL:
        n, d = 1, 1
    num = x.numerator * d**top
    if num % x.denominator:
        return None
    weights = tuple(n**e * d ** (top - e) for e in exps)
    if bounds is None:
        bounds = [None] * len(window)
    return KnapsackInstance(num // x.denominator, weights, tuple(bounds), tuple(window))


def _two_variable_solutions(a, b, target, cap_a, cap_b):
    """Pairs (u, v) >= 0 with a*u + b*v == target, u <= cap_a, v <= cap_b (caps may be None)."""
    g = gcd(a, b)
    if target % g:
        return
    step = b // g
    # u is fixed modulo b/g; pow gives the inverse of a/g there
    u = (target // g) * pow(a // g, -1, step) % step if step > 1 else 0
    hi = target // a
    if cap_a is not None:
        hi = min(hi, cap_a)
    while u <= hi:
        v = (target - a * u) // b
        if cap_b is None or v <= cap_b:
            yield u, v
        u += step


def solve_knapsack(inst: KnapsackInstance, budget: int = DEFAULT_BUDGET):
    """All coefficient vectors with sum(c_i * w_i) == target and c_i <= bounds[i].

    Plain depth-first search by descending index.  A branch is dropped when
    its remainder is not a multiple of the gcd of the weights still to be
    chosen, and the last two unknowns are solved directly as a bounded
    two-variable linear equation.
    """
    order = sorted(range(len(inst.weights)), key=lambda i: -inst.indices[i])
    # rest_gcd[p]: gcd of the weights at positions p, p+1, ...
    rest_gcd = [0] * (len(order) + 1)
    for p in range(len(order) - 1, -1, -1):
        rest_gcd[p] = gcd(rest_gcd[p + 1], inst.weights[order[p]])
    found = []
    chosen = [0] * len(inst.weights)
    nodes = 0

    def emit():
        found.append(Factorization({inst.indices[i]: chosen[i] for i in range(len(chosen))}))

    def dfs(pos, remaining):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("oracle node budget exhausted", partial=list(found))
        if remaining == 0:
            emit()
            return
        if pos == len(order):
            return
        if pos == len(order) - 2:
            i, j = order[pos], order[pos + 1]
            for u, v in _two_variable_solutions(
                inst.weights[i], inst.weights[j], remaining, inst.bounds[i], inst.bounds[j]
            ):
                nodes += 1
                if nodes > budget:
                    raise BudgetExceeded("oracle node budget exhausted", partial=list(found))
                chosen[i], chosen[j] = u, v
                emit()
            chosen[i] = chosen[j] = 0
            return
        i = order[pos]
        w = inst.weights[i]
        cap = remaining // w
        if inst.bounds[i] is not None:
            cap = min(cap, inst.bounds[i])
        g = rest_gcd[pos + 1]
        for c in range(cap, -1, -1):
            left = remaining - c * w
            if g and left % g:
                nodes += 1
                if nodes > budget:
                    raise BudgetExceeded("oracle node budget exhausted", partial=list(found))
                continue
            chosen[i] = c
            dfs(pos + 1, left)
        chosen[i] = 0

    dfs(0, inst.target)
    return found


def oracle_representations(S: Semiring, x, window, bounds=None, budget: int = DEFAULT_BUDGET):
    """Every factorization of ``x`` supported on ``window`` within ``bounds``, sorted."""
    x = Fraction(x)
    if not window:
        raise ValueError("window must be nonempty")
    if x == 0:
        return [Factorization()]
    inst = integerize(S, x, window, bounds)
    if inst is None:
        return []
    return sorted(set(solve_knapsack(inst, budget)))


def value_window(S: Semiring, x: Fraction):
    """For r > 1: every atom index whose atom does not exceed x."""
    x = Fraction(x)
    out = [0]
    k = 1
    while S.r ** S.s(k) <= x:
        out.append(k)
        k += 1
    return out


def low_form_bounds(S: Semiring, window):
    """Coefficient caps c_i < d**gap(i-1) (i >= 1), c_0 free."""
    return [None if k == 0 else S.d ** S.gap(k - 1) - 1 for k in sorted(window)]


def oracle_member(S: Semiring, x, window, bounds=None, budget: int = DEFAULT_BUDGET) -> bool:
    return bool(oracle_representations(S, x, window, bounds, budget))


def _oracle_divides(S, a, y, budget):
    diff = Fraction(y) - a
    if diff < 0:
        return False
    if diff == 0:
        return True
    return oracle_member(S, diff, value_window(S, diff), budget=budget)


def oracle_minimal_bouquets(S: Semiring, atom_index: int, size_cap: int, exp_cap: int, budget: int = DEFAULT_BUDGET):
    """Multisets of atoms (indices <= exp_cap, size <= size_cap) divisible by the
    atom, none of whose one-atom-smaller sub-multisets is.

    Divisibility is upward closed, so checking one-atom removals is enough.
    Intended for r > 1, where membership is a finite search.
    """
    if not S.above_one:
        raise ValueError("minimal bouquet search is only finite for r > 1")
    a = S.r ** S.s(atom_index)
    atoms = [S.r ** S.s(k) for k in range(exp_cap + 1)]
    out = []
    checks = 0
    for size in range(1, size_cap + 1):
        for combo in combinations_with_replacement(range(exp_cap + 1), size):
            checks += 1
            if checks > budget:
                raise BudgetExceeded("bouquet search budget exhausted", partial=out)
            total = sum((atoms[k] for k in combo), Fraction(0))
            if not _oracle_divides(S, a, total, budget):
                continue
            if all(not _oracle_divides(S, a, total - atoms[k], budget) for k in set(combo)):
                z = {}
                for k in combo:
                    z[k] = z.get(k, 0) + 1
                out.append(Factorization(z))
    return sorted(out)


def exponent_window(S: Semiring, top_exponent: int):
    """Atom indices whose exponent is at most ``top_exponent``."""
    return list(range(S.N.index_floor(top_exponent) + 1))
