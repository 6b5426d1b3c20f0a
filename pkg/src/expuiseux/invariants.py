"""Factorization invariants of exponential Puiseux semirings.

Everything for r < 1 is computed on truncated factorization sets; results
carry ``complete`` / ``exact`` flags saying how far they can be trusted.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement, product
from typing import Optional, Sequence

from .errors import BudgetExceeded, MixedResidues, NotMember
from .semiring import (
    DEFAULT_BUDGET,
    Extremal,
    Factorization,
    FactorizationSet,
    Semiring,
    SemiringClass,
    _require_atomic,
    sr_atom,
    sr_divides,
    sr_extremal,
    sr_factorizations,
    sr_length_window,
    sr_member,
    sr_pi,
)


@dataclass(frozen=True)
class Caps:
    exp_cap: int = 64
    len_cap: Optional[int] = 512
    index_cap: int = 16
    size_cap: int = 16
    budget: int = DEFAULT_BUDGET


class Unbounded:
    """Sentinel for an infinite elasticity."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Unbounded"


UNBOUNDED = Unbounded()


# -- lengths ---------------------------------------------------------------------


@dataclass(frozen=True)
class LengthSet:
    lengths: tuple[int, ...]
    complete: bool
    caps: tuple = (None, None)
    # lengths <= complete_upto are exhaustive even when complete is False
    complete_upto: Optional[int] = None
    member: bool = True

    def __iter__(self):
        return iter(self.lengths)

    def __len__(self):
        return len(self.lengths)

    @property
    def exact_lengths(self) -> tuple[int, ...]:
        if self.complete or self.complete_upto is None:
            return self.lengths
        return tuple(l for l in self.lengths if l <= self.complete_upto)


def lengths_of(fs: FactorizationSet, member: bool = True) -> LengthSet:
    upto = None if fs.complete else fs.complete_upto
    return LengthSet(tuple(fs.lengths), fs.complete, (fs.exp_cap, fs.len_cap), upto, member)


def inv_length_set(S: Semiring, x, exp_cap: int = 64, len_cap: Optional[int] = 512, budget: int = DEFAULT_BUDGET) -> LengthSet:
    _require_atomic(S)
    x = Fraction(x)
    if S.cls is SemiringClass.TRIVIAL:
        if x.denominator != 1 or x < 0:
            return LengthSet((), True, (exp_cap, len_cap), member=False)
        return LengthSet((x.numerator,), True, (exp_cap, len_cap))
    fs = sr_factorizations(S, x, exp_cap, len_cap, budget)
    if not fs.items and fs.complete:
        return LengthSet((), True, (exp_cap, len_cap), member=False)
    return lengths_of(fs)


def inv_delta_element(lengths: Sequence[int]) -> set[int]:
    """Successive differences of the sorted lengths."""
    ls = sorted(set(lengths))
    return {b - a for a, b in zip(ls, ls[1:])}


# -- AAP decomposition ----------------------------------------------------------------


@dataclass(frozen=True)
class AAPStructure:
    y: int
    d: int
    core: tuple[int, ...]
    head: tuple[int, ...]
    tail: tuple[int, ...]
    B: int

    def reassemble(self) -> list[int]:
        return sorted(self.y + v for v in self.head + self.core + self.tail)


def inv_aap_decompose(lengths: Sequence[int], d: int) -> AAPStructure:
    """Split a length set into head + arithmetic core + tail with the smallest bound B.

    Ties go to the longest core, then the smallest ``y``.  Only maximal runs
    need trying: extending a core never increases B.
    """
    if d < 1:
        raise ValueError("difference must be positive")
    ls = sorted(set(lengths))
    if not ls:
        raise ValueError("length set is empty")
    if len({l % d for l in ls}) > 1:
        raise MixedResidues(f"lengths {ls} are not all congruent mod {d}")
    runs = []
    start = 0
    for i in range(1, len(ls) + 1):
        if i == len(ls) or ls[i] - ls[i - 1] != d:
            runs.append((start, i))
            start = i
    best = None
    for a, b in runs:
        y, top = ls[a], ls[b - 1]
        B = max(y - ls[0], ls[-1] - top)
        key = (B, -(b - a), y)
        if best is None or key < best[0]:
            best = (key, a, b)
    _, a, b = best
    y = ls[a]
    return AAPStructure(
        y=y,
        d=d,
        core=tuple(l - y for l in ls[a:b]),
        head=tuple(l - y for l in ls[:a]),
        tail=tuple(l - y for l in ls[b:]),
        B=best[0][0],
    )


# -- Betti elements, R-classes, catenary degree -----------------------------------------


def inv_betti(S: Semiring, count: int) -> list[tuple[int, Fraction]]:
    _require_atomic(S)
    if S.cls is SemiringClass.TRIVIAL:
        return []
    return [(k, S.up_cost(k) * sr_atom(S, k)) for k in range(count)]


@dataclass(frozen=True)
class RClassPartition:
    classes: tuple[tuple[Factorization, ...], ...]
    complete: bool

    def __len__(self):
        return len(self.classes)


def rclasses_of(factorizations: Sequence[Factorization]) -> list[list[Factorization]]:
    """Components of the 'shares an atom' graph, via union-find on atom indices."""
    zs = list(factorizations)
    parent = list(range(len(zs)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner: dict[int, int] = {}
    for i, z in enumerate(zs):
        for k in z.support:
            if k in owner:
                a, b = find(i), find(owner[k])
                if a != b:
                    parent[a] = b
            else:
                owner[k] = i
    groups: dict[int, list[Factorization]] = {}
    for i, z in enumerate(zs):
        groups.setdefault(find(i), []).append(z)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def inv_rclasses(S: Semiring, x, exp_cap: int = 64, len_cap: Optional[int] = 512, budget: int = DEFAULT_BUDGET) -> RClassPartition:
    _require_atomic(S)
    fs = sr_factorizations(S, Fraction(x), exp_cap, len_cap, budget)
    return RClassPartition(tuple(tuple(c) for c in rclasses_of(fs.items)), fs.complete)


def catenary_of(factorizations: Sequence[Factorization]) -> int:
    """Bottleneck value: the largest edge of a minimum spanning tree under d(z, z')."""
    zs = list(factorizations)
    if len(zs) < 2:
        return 0
    width = max(z.top for z in zs) + 1
    vecs = [z.dense(width) for z in zs]
    lens = [z.length for z in zs]
    # Prim's algorithm on the complete graph
    best = [None] * len(zs)
    used = [False] * len(zs)
    used[0] = True
    cur = 0
    worst = 0
    todo = set(range(1, len(zs)))
    while todo:
        vc, lc = vecs[cur], lens[cur]
        for j in todo:
            common = sum(map(min, vc, vecs[j]))
            dist = max(lc, lens[j]) - common
            if best[j] is None or dist < best[j]:
                best[j] = dist
        cur = min(todo, key=best.__getitem__)
        worst = max(worst, best[cur])
        todo.remove(cur)
    return worst


def inv_catenary_element(S: Semiring, x, exp_cap: int = 64, len_cap: Optional[int] = 512, budget: int = DEFAULT_BUDGET) -> tuple[int, bool]:
    """Catenary degree of x and whether it is exact.

    For r < 1 the value is that of the truncated factorization set; it is a
    heuristic, not a certified bound, since truncation can drop the chains
    that would connect two found factorizations more cheaply.
    """
    _require_atomic(S)
    if S.cls is SemiringClass.TRIVIAL:
        return 0, True
    fs = sr_factorizations(S, Fraction(x), exp_cap, len_cap, budget)
    return catenary_of(fs.items), fs.complete


def inv_catenary_semiring(S: Semiring) -> int:
    if S.cls is SemiringClass.TRIVIAL:
        return 0
    _require_atomic(S)
    return max(S.n, S.d) ** S.gap(0)


# -- delta sets ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Witness:
    element: Fraction
    distance: int
    verified: bool


@dataclass(frozen=True)
class DeltaReport:
    delta_of_samples: frozenset
    lower_family: frozenset
    interval: tuple[int, int]
    min_attained_at: Optional[Witness]
    max_attained_at: Optional[Witness]
    elements_examined: int
    truncated_elements: int

    @property
    def sandwich_ok(self) -> bool:
        lo, hi = self.interval
        return all(lo <= v <= hi for v in self.delta_of_samples)

    @property
    def lower_family_observed(self) -> bool:
        return self.lower_family <= self.delta_of_samples


def window_distances(S: Semiring, x, span: int, budget: int) -> tuple[set[int], bool]:
    """Distances of L(x) among its lengths up to ``min L(x) + span`` that are proven exhaustive.

    Returns the distances and whether the whole window was certified.  For
    r > 1 a full enumeration is tried first, since Z(x) is finite.
    """
    if S.above_one:
        fs = sr_factorizations(S, x, budget=budget * 10)
        if fs.complete:
            return inv_delta_element(fs.lengths), True
    fs = sr_length_window(S, x, span, budget)
    ls = fs.lengths
    if not fs.complete:
        ls = [l for l in ls if l <= fs.complete_upto]
    certified = fs.complete or (ls and fs.complete_upto >= ls[0] + span)
    return inv_delta_element(ls), bool(certified)


def _random_element(S: Semiring, rng: random.Random, index_cap: int) -> Fraction:
    size = rng.randint(1, 3)
    top = min(index_cap, S.N.conductor_index + 4)
    z = {}
    for _ in range(size):
        k = rng.randint(0, top)
        z[k] = z.get(k, 0) + rng.randint(1, max(S.n, S.d))
    return sr_pi(S, Factorization(z))


def inv_delta_semiring(
    S: Semiring,
    index_cap: int = 8,
    sample_budget: int = 50,
    budget: int = 500,
    span: Optional[int] = None,
    seed: int = 0,
) -> DeltaReport:
    """Distances observed on Betti elements plus random samples, next to the bounding interval.

    Each element contributes only distances between lengths that are provably
    consecutive, so every reported distance is a genuine member of the set.
    """
    _require_atomic(S)
    if S.cls is SemiringClass.TRIVIAL:
        return DeltaReport(frozenset(), frozenset(), (0, 0), None, None, 0, 0)
    lo, hi = S.step, S.move_delta(0)
    if span is None:
        span = hi + S.step
    lower = frozenset(S.move_delta(k) for k in range(index_cap + 1))
    elements = [x for _, x in inv_betti(S, index_cap + 1)]
    rng = random.Random(seed)
    elements += [_random_element(S, rng, index_cap) for _ in range(sample_budget)]
    observed: set[int] = set()
    truncated = 0
    for x in elements:
        ds, ok = window_distances(S, x, span, budget)
        observed |= ds
        truncated += not ok
    m = S.N.conductor_index
    w_min = S.n * sr_atom(S, m)
    w_max = S.up_cost(0) * sr_atom(S, 0)
    wit = []
    for x, target in ((w_min, lo), (w_max, hi)):
        ds, _ = window_distances(S, x, span, budget)
        observed |= ds
        wit.append(Witness(x, target, target in ds))
    return DeltaReport(
        frozenset(observed), lower, (lo, hi), wit[0], wit[1], len(elements) + 2, truncated,
    )


# -- unions of sets of lengths ---------------------------------------------------------------


@dataclass(frozen=True)
class UnionWindow:
    k: int
    lengths: tuple[int, ...]
    difference: int
    # every length congruent to k mod difference inside [lo, hi] must appear
    complete_lo: int
    complete_hi: int

    def gaps_inside(self) -> list[int]:
        """Progression values inside the complete portion that are missing."""
        have = set(self.lengths)
        step = self.difference or 1
        return [v for v in range(self.complete_lo, self.complete_hi + 1, step) if v not in have]

    def off_residue(self) -> list[int]:
        if self.difference == 0:
            return [l for l in self.lengths if l != self.k]
        return [l for l in self.lengths if (l - self.k) % self.difference]


def _shift(S: Semiring, z: Factorization) -> Factorization:
    """Multiply by r^(F+1): exponents move past the conductor."""
    c = S.N.conductor
    return Factorization({S.N.index_of(S.s(k) + c): v for k, v in z.items})


def inv_union_k(S: Semiring, k: int, atom_index_cap: int = 4, span: int = 64, budget: int = 20000) -> UnionWindow:
    """Lengths of every element with a length-k factorization over atoms <= atom_index_cap.

    Each such x is paired with x * r^(F+1), whose length set covers the
    progression from min L(x) to max L(x); the complete portion is the union
    of those covered stretches that could be certified within the budget.
    """
    _require_atomic(S)
    if k < 1:
        raise ValueError("k must be >= 1")
    if S.cls is SemiringClass.TRIVIAL:
        return UnionWindow(k, (k,), 0, k, k)
    found: set[int] = set()
    lo = hi = None
    for combo in combinations_with_replacement(range(atom_index_cap + 1), k):
        z = Factorization({i: combo.count(i) for i in set(combo)})
        x = sr_pi(S, z)
        fx = sr_length_window(S, x, span, budget)
        fy = sr_length_window(S, sr_pi(S, _shift(S, z)), span + S.step * k, budget)
        found.update(fx.lengths)
        found.update(fy.lengths)
        lx = fx.lengths
        top_x = lx[-1] if fx.complete else min(fx.complete_upto, lx[-1])
        reach_y = None if fy.complete else fy.complete_upto
        seg_hi = top_x if reach_y is None else min(top_x, reach_y)
        if seg_hi < k:
            continue
        lo = lx[0] if lo is None else min(lo, lx[0])
        hi = seg_hi if hi is None else max(hi, seg_hi)
    if lo is None:
        lo = hi = k
    # snap to the progression through k
    step = S.step
    hi -= (hi - k) % step
    return UnionWindow(k, tuple(sorted(found)), step, lo, hi)


# -- elasticity ---------------------------------------------------------------------------------


def inv_elasticity(S: Semiring, x=None):
    _require_atomic(S)
    if x is None:
        return Fraction(1) if S.cls is SemiringClass.TRIVIAL else UNBOUNDED
    x = Fraction(x)
    zmin = sr_member(S, x)
    if zmin is None:
        raise NotMember(f"{x} is not an element of {S}")
    if x == 0 or S.cls is SemiringClass.TRIVIAL:
        return Fraction(1)
    zmax = sr_extremal(S, zmin, Extremal.MAX)
    if zmax is None:
        return UNBOUNDED
    lo, hi = sorted((zmin.length, zmax.length))
    return Fraction(hi, lo)


# -- omega primality -------------------------------------------------------------------------------


class OmegaStatus(enum.Enum):
    FINITE = "Finite"
    INFINITE = "Infinite"
    BOUNDED_ESTIMATE = "BoundedEstimate"


@dataclass(frozen=True)
class OmegaResult:
    status: OmegaStatus
    lower: Optional[int]
    upper: Optional[int]
    exp_cap: int
    size_cap: int
    bouquets: tuple[Factorization, ...] = field(default=(), compare=False)

    @property
    def value(self) -> Optional[int]:
        return self.lower if self.status is OmegaStatus.FINITE else None


def omega_upper_bound(S: Semiring, k: int) -> Optional[int]:
    """max(d, sum over j < k of n^(s_k - s_j)); valid for atoms at or past the conductor."""
    if not S.above_one or k < S.N.conductor_index:
        return None
    sk = S.s(k)
    return max(S.d, sum(S.n ** (sk - S.s(j)) for j in range(k)))


def _is_minimal_bouquet(S, a, z: Factorization) -> bool:
    total = sr_pi(S, z)
    if not sr_divides(S, a, total):
        return False
    return all(not sr_divides(S, a, total - sr_atom(S, j)) for j in z.support)


def _prefix_bouquets(S: Semiring, k: int, budget: int) -> list[Factorization]:
    """Minimal bouquets on atoms below k.

    If some coefficient reaches the smallest multiple c*_j of atom j divisible
    by the atom, the bouquet is that single multiple; the rest have every
    c_j < c*_j, a finite box.
    """
    a = sr_atom(S, k)
    stars = []
    for j in range(k):
        aj = sr_atom(S, j)
        c = 1
        while not sr_divides(S, a, c * aj):
            c += 1
        stars.append(c)
    out = [Factorization({j: c}) for j, c in enumerate(stars)]
    checked = 0
    for vec in product(*(range(c) for c in stars)):
        if sum(1 for v in vec if v) < 2:
            continue
        checked += 1
        if checked > budget:
            raise BudgetExceeded("omega prefix search budget exhausted", partial=out)
        z = Factorization.from_dense(list(vec))
        if _is_minimal_bouquet(S, a, z):
            out.append(z)
    return out


def _suffix_search(S: Semiring, k: int, exp_cap: int, size_cap: int, budget: int) -> list[Factorization]:
    a = sr_atom(S, k)
    idx = range(k + 1, max(exp_cap, k + 1) + 1)
    out = []
    checked = 0
    for size in range(1, size_cap + 1):
        for combo in combinations_with_replacement(idx, size):
            checked += 1
            if checked > budget:
                raise BudgetExceeded("omega suffix search budget exhausted", partial=out)
            z = Factorization({i: combo.count(i) for i in set(combo)})
            if _is_minimal_bouquet(S, a, z):
                out.append(z)
    return out


def inv_omega(S: Semiring, atom_index: int, exp_cap: int = 64, size_cap: int = 16, budget: int = DEFAULT_BUDGET) -> OmegaResult:
    """Omega primality of atom ``atom_index``.

    A minimal bouquet lives entirely below the atom, entirely above it, or is
    the atom itself.  Below is a finite box search.  Above, once past the
    conductor, the minimal bouquets are exactly d copies of one atom; before
    the conductor the suffix is searched within the caps only.
    """
    _require_atomic(S)
    if S.cls is SemiringClass.TRIVIAL:
        return OmegaResult(OmegaStatus.FINITE, 1, 1, exp_cap, size_cap, (Factorization({0: 1}),))
    if S.below_one:
        return OmegaResult(OmegaStatus.INFINITE, None, None, exp_cap, size_cap)
    k = atom_index
    bouquets = [Factorization({k: 1})] + _prefix_bouquets(S, k, budget)
    if k >= S.N.conductor_index:
        bouquets += [Factorization({j: S.d}) for j in range(k + 1, max(exp_cap, k + 1) + 1)]
        status = OmegaStatus.FINITE
    else:
        bouquets += _suffix_search(S, k, exp_cap, size_cap, budget)
        status = OmegaStatus.BOUNDED_ESTIMATE
    lower = max(z.length for z in bouquets)
    return OmegaResult(status, lower, omega_upper_bound(S, k), exp_cap, size_cap, tuple(sorted(bouquets)))


# -- classification --------------------------------------------------------------------------------


def inv_classify(S: Semiring) -> dict:
    atomic = S.is_atomic
    trivial = S.cls is SemiringClass.TRIVIAL
    accp = atomic and S.r >= 1
    return {
        "class": S.cls.value,
        "atomic": atomic,
        "accp": accp,
        "ffm_known": trivial or S.above_one,
        "omega_finite": accp if atomic else None,
        "locally_tame": trivial if atomic else None,
        "globally_tame": trivial if atomic else None,
        "accp_presentable": accp if atomic else None,
    }
