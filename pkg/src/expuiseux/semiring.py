"""Exponential Puiseux semirings ``S_{r,N} = <r^k : k in N>``.

Atoms are indexed by position in ``N``: atom ``k`` is ``r ** N.element(k)``.
Two factorizations of the same element are linked by the rewrite

    n(r)**gap(k) copies of atom k  ==  d(r)**gap(k) copies of atom k+1

("up" reads it left to right, "down" right to left).  For r < 1 an up-move
lengthens a factorization, for r > 1 it shortens it.  The canonical forms:

* *low form*  -- no down-move applies: ``c_i < d**gap(i-1)`` for i >= 1.
* *high form* -- no up-move applies:   ``c_i < n**gap(i)`` for all i.

For r < 1 the low form is the minimum-length factorization and the high form
(when it exists) the maximum-length one; for r > 1 the roles swap.
"""

from __future__ import annotations

import enum
import heapq
import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Optional

from .errors import BudgetExceeded, InsufficientCoefficient, NotAtomic
from .numonoid import NumericalMonoid

DEFAULT_BUDGET = 10**7


class SemiringClass(enum.Enum):
    TRIVIAL = "Trivial"
    ATOMIC_BELOW_ONE = "AtomicBelowOne"
    ATOMIC_ABOVE_ONE = "AtomicAboveOne"
    NON_ATOMIC = "NonAtomic"


class Direction(enum.Enum):
    UP = "up"
    DOWN = "down"


class Extremal(enum.Enum):
    MIN = "min"
    MAX = "max"


class Factorization:
    """Finite multiset of atom indices, stored sparsely as sorted (index, count) pairs.

    Instances are immutable and hashable; ordering is lexicographic on the pairs.
    """

    __slots__ = ("items", "_len")

    def __init__(self, coeffs: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        if isinstance(coeffs, Mapping):
            coeffs = coeffs.items()
        items = []
        for k, c in sorted(coeffs):
            if c < 0 or k < 0:
                raise ValueError("indices and multiplicities must be nonnegative")
            if c:
                if items and items[-1][0] == k:
                    raise ValueError(f"duplicate index {k}")
                items.append((int(k), int(c)))
        self.items = tuple(items)
        self._len = sum(c for _, c in items)

    @classmethod
    def _raw(cls, items):
        z = object.__new__(cls)
        z.items = items
        z._len = sum(c for _, c in items)
        return z

    @classmethod
    def from_dense(cls, coeffs):
        return cls._raw(tuple((i, c) for i, c in enumerate(coeffs) if c))

    @property
    def length(self) -> int:
        return self._len

    def __len__(self):
        return self._len

    @property
    def top(self) -> int:
        """Largest atom index used (-1 for the empty factorization)."""
        return self.items[-1][0] if self.items else -1

    @property
    def support(self):
        return tuple(k for k, _ in self.items)

    def as_dict(self) -> dict[int, int]:
        return dict(self.items)

    def dense(self, size=None):
        out = [0] * (size if size is not None else self.top + 1)
        for k, c in self.items:
            out[k] = c
        return out

    def __getitem__(self, k):
        for i, c in self.items:
            if i == k:
                return c
        return 0

    def __bool__(self):
        return bool(self.items)

    def __eq__(self, other):
        return isinstance(other, Factorization) and self.items == other.items

    def __lt__(self, other):
        return self.items < other.items

    def __hash__(self):
        return hash(self.items)

    def __add__(self, other):
        d = self.as_dict()
        for k, c in other.items:
            d[k] = d.get(k, 0) + c
        return Factorization(d)

    def __sub__(self, other):
        d = self.as_dict()
        for k, c in other.items:
            left = d.get(k, 0) - c
            if left < 0:
                raise ValueError("cannot subtract a factorization that is not a sub-multiset")
            d[k] = left
        return Factorization(d)

    def gcd(self, other: "Factorization") -> "Factorization":
        mine = dict(self.items)
        return Factorization._raw(tuple((k, min(c, mine[k])) for k, c in other.items if k in mine))

    def distance(self, other: "Factorization") -> int:
        return max(self._len, other._len) - self.gcd(other)._len

    def __repr__(self):
        return "{" + ", ".join(f"{k}:{c}" for k, c in self.items) + "}"


EMPTY = Factorization()


@dataclass(frozen=True)
class Semiring:
    r: Fraction
    N: NumericalMonoid
    cls: SemiringClass

    @property
    def n(self) -> int:
        return self.r.numerator

    @property
    def d(self) -> int:
        return self.r.denominator

    @property
    def is_atomic(self) -> bool:
        return self.cls is not SemiringClass.NON_ATOMIC

    @property
    def below_one(self) -> bool:
        return self.cls is SemiringClass.ATOMIC_BELOW_ONE

    @property
    def above_one(self) -> bool:
        return self.cls is SemiringClass.ATOMIC_ABOVE_ONE

    @property
    def nontrivial_atomic(self) -> bool:
        return self.cls in (SemiringClass.ATOMIC_BELOW_ONE, SemiringClass.ATOMIC_ABOVE_ONE)

    @property
    def step(self) -> int:
        """|n(r) - d(r)|: the common difference of length sets."""
        return abs(self.n - self.d)

    def s(self, k: int) -> int:
        return self.N.element(k)

    def gap(self, k: int) -> int:
        return self.N.gap(k)

    def up_cost(self, k: int) -> int:
        """Copies of atom k consumed by an up-move at k."""
        return self.r.numerator ** self.N.gap(k)

    def up_gain(self, k: int) -> int:
        """Copies of atom k+1 produced by an up-move at k."""
        return self.r.denominator ** self.N.gap(k)

    def move_delta(self, k: int) -> int:
        """|n**gap(k) - d**gap(k)|: length change of a rewrite at k."""
        g = self.gap(k)
        return abs(self.n**g - self.d**g)

    def __str__(self):
        return f"S({self.r}, {self.N})"


def parse_rational(text: str) -> Fraction:
    m = re.fullmatch(r"\s*(\d+)\s*(?:/\s*(\d+)\s*)?", text)
    if not m:
        raise ValueError(f"cannot parse rational {text!r}: expected 'a' or 'a/b'")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def sr_new(r: Fraction, N: NumericalMonoid) -> Semiring:
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    if r.denominator == 1:
        cls = SemiringClass.TRIVIAL
    elif r.numerator == 1:
        cls = SemiringClass.NON_ATOMIC
    elif r < 1:
        cls = SemiringClass.ATOMIC_BELOW_ONE
    else:
        cls = SemiringClass.ATOMIC_ABOVE_ONE
    return Semiring(r, N, cls)


def _require_atomic(S: Semiring):
    if not S.is_atomic:
        raise NotAtomic(f"{S} has no atoms (n(r) = 1, d(r) > 1)")


def sr_atom(S: Semiring, k: int) -> Fraction:
    _require_atomic(S)
    if S.cls is SemiringClass.TRIVIAL:
        if k != 0:
            raise IndexError("the trivial semiring has the single atom 1 (index 0)")
        return Fraction(1)
    return S.r ** S.s(k)


def sr_pi(S: Semiring, z: Factorization) -> Fraction:
    _require_atomic(S)
    return sum((c * sr_atom(S, k) for k, c in z.items), Fraction(0))


def sr_rewrite(S: Semiring, z: Factorization, k: int, direction: Direction) -> Factorization:
    if not S.nontrivial_atomic:
        raise NotAtomic(f"rewrites need a nontrivial atomic semiring, got {S}")
    coeffs = z.as_dict()
    cost, gain = S.up_cost(k), S.up_gain(k)
    if direction is Direction.UP:
        if coeffs.get(k, 0) < cost:
            raise InsufficientCoefficient(f"up-move at {k} needs {cost} copies of atom {k}")
        coeffs[k] -= cost
        coeffs[k + 1] = coeffs.get(k + 1, 0) + gain
    else:
        if coeffs.get(k + 1, 0) < gain:
            raise InsufficientCoefficient(f"down-move at {k} needs {gain} copies of atom {k + 1}")
        coeffs[k + 1] -= gain
        coeffs[k] = coeffs.get(k, 0) + cost
    return Factorization(coeffs)


# -- canonical forms ---------------------------------------------------------


def is_low_form(S: Semiring, z: Factorization) -> bool:
    return all(c < S.d ** S.gap(k - 1) for k, c in z.items if k >= 1)


def is_high_form(S: Semiring, z: Factorization) -> bool:
    return all(c < S.up_cost(k) for k, c in z.items)


def _to_low_form(S: Semiring, z: Factorization) -> Factorization:
    c = z.dense()
    for i in range(len(c) - 1, 0, -1):
        g = S.gap(i - 1)
        q, c[i] = divmod(c[i], S.d**g)
        c[i - 1] += q * S.n**g
    return Factorization.from_dense(c)


def _to_high_form(S: Semiring, z: Factorization) -> Optional[Factorization]:
    """Saturate up-moves bottom-up; None when they never stop (r < 1 only)."""
    c = z.dense()
    m = S.N.conductor_index
    i = 0
    while i < len(c):
        q, c[i] = divmod(c[i], S.up_cost(i))
        if q:
            if S.below_one and i >= m:
                # past the conductor every up-move leaves >= d > n copies behind
                return None
            if i + 1 == len(c):
                c.append(0)
            c[i + 1] += q * S.up_gain(i)
        i += 1
    return Factorization.from_dense(c)


def sr_is_extremal(S: Semiring, z: Factorization, which: Extremal) -> bool:
    _require_atomic(S)
    if S.cls is SemiringClass.TRIVIAL:
        return True
    low_is_min = S.below_one
    if (which is Extremal.MIN) == low_is_min:
        return is_low_form(S, z)
    return is_high_form(S, z)


def sr_extremal(S: Semiring, z: Factorization, which: Extremal) -> Optional[Factorization]:
    _require_atomic(S)
    if S.cls is SemiringClass.TRIVIAL:
        return z
    if (which is Extremal.MIN) == S.below_one:
        return _to_low_form(S, z)
    return _to_high_form(S, z)


# -- membership ---------------------------------------------------------------


def _integer_scale(x: Fraction, d: int, E: int) -> Optional[int]:
    num = x.numerator * d**E
    if num % x.denominator:
        return None
    return num // x.denominator


def low_form_of(S: Semiring, x: Fraction, top: int) -> Optional[Factorization]:
    """The unique low-form representation of ``x`` on atoms ``0..top``, if any.

    Clearing denominators by ``d**s_top``, the coefficient of atom i is fixed
    modulo ``d**gap(i-1)`` (n is invertible there), and the low-form bound
    makes that residue the coefficient itself.  Working from the top index
    down therefore decides existence and yields the representation.
    """
    n, d = S.n, S.d
    E = S.s(top)
    R = _integer_scale(x, d, E)
    if R is None or R < 0:
        return None
    coeffs = [0] * (top + 1)
    for i in range(top, 0, -1):
        si = S.s(i)
        mod = d ** S.gap(i - 1)
        scale = d ** (E - si)
        v = R // scale
        c = (v * pow(n, -si, mod)) % mod
        R -= c * n**si * scale
        if R < 0:
            return None
        coeffs[i] = c
    coeffs[0] = R // d**E
    return Factorization.from_dense(coeffs)


def denominator_exponent(q: int, d: int) -> Optional[int]:
    """Smallest t with q | d**t, or None when q has a prime factor not dividing d."""
    rest = q
    while rest > 1:
        h = gcd(rest, d)
        if h == 1:
            return None
        rest //= h
    t, p = 0, 1
    while p % q:
        t += 1
        p *= d
    return t


def membership_bound(S: Semiring, x: Fraction) -> Optional[int]:
    """Exponent bound E for r < 1: the minimum-length factorization uses only r^s with s <= E."""
    t = denominator_exponent(x.denominator, S.d)
    if t is None:
        return None
    return max(t, S.N.conductor)


def top_atom_index(S: Semiring, x: Fraction) -> int:
    """For r > 1: largest k with r**s_k <= x (-1 if x < 1)."""
    if x < 1:
        return -1
    k = 0
    while S.r ** S.s(k + 1) <= x:
        k += 1
    return k


def sr_member(S: Semiring, x: Fraction) -> Optional[Factorization]:
    """Minimum-length factorization of ``x`` or None when ``x`` is not in ``S``."""
    _require_atomic(S)
    x = Fraction(x)
    if x < 0:
        return None
    if x == 0:
        return EMPTY
    if S.cls is SemiringClass.TRIVIAL:
        return Factorization({0: x.numerator}) if x.denominator == 1 else None
    if S.below_one:
        E = membership_bound(S, x)
        if E is None:
            return None
        return low_form_of(S, x, S.N.index_of(E))
    K = top_atom_index(S, x)
    if K < 0:
        return None
    zmax = low_form_of(S, x, K)
    return None if zmax is None else _to_high_form(S, zmax)


def sr_divides(S: Semiring, x: Fraction, y: Fraction) -> bool:
    diff = Fraction(y) - Fraction(x)
    return diff >= 0 and sr_member(S, diff) is not None


# -- enumeration ----------------------------------------------------------------


@dataclass(frozen=True)
class FactorizationSet:
    items: tuple
    complete: bool
    exp_cap: Optional[int] = None
    len_cap: Optional[int] = None
    # every factorization of length <= complete_upto is in items (None: no limit)
    complete_upto: Optional[int] = None
    cap_too_small: bool = False
    budget_exhausted: bool = False

    @property
    def lengths(self):
        return sorted({z.length for z in self.items})

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


def _enumerate_above_one(S: Semiring, x: Fraction, budget: int):
    """All factorizations of x for r > 1, by descending atom index.

    Each coefficient is pinned to a residue class modulo d**gap(i-1) (see
    :func:`low_form_of`), so only value-feasible members of that class are tried.
    """
    K = top_atom_index(S, x)
    if K < 0:
        return [], True
    n, d = S.n, S.d
    E = S.s(K)
    X = _integer_scale(x, d, E)
    if X is None:
        return [], True
    out = []
    nodes = 0
    coeffs = [0] * (K + 1)

    def rec(i, R):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded("factorization enumeration budget exhausted")
        if i == 0:
            coeffs[0] = R // d**E
            out.append(Factorization.from_dense(coeffs))
            coeffs[0] = 0
            return
        si = S.s(i)
        mod = d ** S.gap(i - 1)
        scale = d ** (E - si)
        w = n**si * scale
        c = ((R // scale) * pow(n, -si, mod)) % mod
        while c * w <= R:
            coeffs[i] = c
            rec(i - 1, R - c * w)
            c += mod
        coeffs[i] = 0

    try:
        rec(K, X)
    except BudgetExceeded:
        return out, False
    return out, True


def _exact_length_bound(S: Semiring, zmin: Factorization, exp_cap: int) -> int:
    # any factorization reaching index exp_cap+1 needs a down-move at every level
    # between its top and zmin's top on the way back to zmin
    total = zmin.length
    start = max(zmin.top, 0)
    m = S.N.conductor_index
    for j in range(start, min(exp_cap + 1, m)):
        total += S.move_delta(j)
    total += max(0, exp_cap + 1 - max(start, m)) * S.step
    return total - 1


def _lengthening_moves(S: Semiring, z: Factorization):
    """Factorizations one length-increasing rewrite away from z."""
    m = S.N.conductor_index
    if S.below_one:
        n = S.n
        for k, c in z.items:
            if c >= (n if k >= m else S.up_cost(k)):
                yield sr_rewrite(S, z, k, Direction.UP)
    else:
        d = S.d
        for k, c in z.items:
            if k >= 1 and c >= (d if k > m else S.up_gain(k - 1)):
                yield sr_rewrite(S, z, k - 1, Direction.DOWN)


def _closure_from_min(S, zmin, exp_cap, len_cap, budget):
    """Closure of the minimum-length factorization under lengthening rewrites.

    Every factorization rewrites down to the minimum by length-decreasing
    moves, so the closure is all of Z(x).  Lengthening moves never lower the
    top index (r < 1) and never raise the length back, so everything inside
    the caps is reached through factorizations also inside the caps.  The heap
    pops in length order: on budget exhaustion every factorization shorter
    than the next pending one has been seen.
    """
    seen = {zmin}
    heap = [(zmin.length, zmin)]
    out = []
    closed = True
    heap_bound = None
    while heap:
        if len(out) >= budget:
            heap_bound = heap[0][0] - 1
            closed = False
            break
        _, z = heapq.heappop(heap)
        out.append(z)
        for nxt in _lengthening_moves(S, z):
            if nxt.top > exp_cap or (len_cap is not None and nxt.length > len_cap):
                closed = False
                continue
            if nxt not in seen:
                seen.add(nxt)
                heapq.heappush(heap, (nxt.length, nxt))
    if closed:
        return out, True, None, False
    bounds = []
    if S.below_one:
        bounds.append(_exact_length_bound(S, zmin, exp_cap))
    if len_cap is not None:
        bounds.append(len_cap)
    if heap_bound is not None:
        bounds.append(heap_bound)
    return out, False, min(bounds), heap_bound is not None


def sr_length_window(
    S: Semiring,
    x: Fraction,
    span: int,
    budget: int = DEFAULT_BUDGET,
) -> FactorizationSet:
    """Factorizations of x of length at most ``min L(x) + span``, found from the bottom up.

    Works for both r < 1 and r > 1; ``complete_upto`` says how far the
    returned lengths are exhaustive.  For r < 1 the index cap is chosen so
    that it never limits the window.
    """
    _require_atomic(S)
    x = Fraction(x)
    zmin = sr_member(S, x)
    if zmin is None:
        return FactorizationSet((), True)
    if not S.nontrivial_atomic or x == 0:
        return FactorizationSet((zmin,), True)
    len_cap = zmin.length + span
    exp_cap = max(zmin.top, 0)
    if S.below_one:
        total = zmin.length
        m = S.N.conductor_index
        while total <= len_cap and exp_cap < m:
            total += S.move_delta(exp_cap)
            exp_cap += 1
        if total <= len_cap:
            # past the conductor every move changes the length by exactly |n - d|
            exp_cap += -(-(len_cap - total + 1) // S.step)
    else:
        exp_cap = zmin.top
    items, complete, upto, exhausted = _closure_from_min(S, zmin, exp_cap, len_cap, budget)
    return FactorizationSet(
        tuple(sorted(items)), complete, exp_cap, len_cap,
        complete_upto=upto, budget_exhausted=exhausted,
    )


def sr_factorizations(
    S: Semiring,
    x: Fraction,
    exp_cap: int = 64,
    len_cap: Optional[int] = 512,
    budget: int = DEFAULT_BUDGET,
) -> FactorizationSet:
    _require_atomic(S)
    x = Fraction(x)
    zmin = sr_member(S, x)
    if zmin is None:
        return FactorizationSet((), True, exp_cap, len_cap)
    if S.cls is SemiringClass.TRIVIAL or x == 0:
        return FactorizationSet((zmin,), True, exp_cap, len_cap)
    if S.above_one:
        items, complete = _enumerate_above_one(S, x, budget)
        return FactorizationSet(
            tuple(sorted(items)), complete, exp_cap, len_cap,
            complete_upto=None if complete else -1, budget_exhausted=not complete,
        )
    if zmin.top > exp_cap or (len_cap is not None and zmin.length > len_cap):
        return FactorizationSet((), False, exp_cap, len_cap, complete_upto=-1, cap_too_small=True)
    items, complete, upto, exhausted = _closure_from_min(S, zmin, exp_cap, len_cap, budget)
    return FactorizationSet(
        tuple(sorted(items)), complete, exp_cap, len_cap,
        complete_upto=upto, budget_exhausted=exhausted,
    )


# -- element expressions ----------------------------------------------------------


class ExpressionError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


_TERM_RE = re.compile(r"\s*(?:(\d+)\s*\*\s*)?r\s*(?:\^\s*(\d+))?\s*|\s*(\d+)\s*")


def parse_element(text: str, S: Semiring) -> tuple[Fraction, Optional[Factorization]]:
    """Parse ``2*r^18+4*r^25`` (a factorization) or a plain rational ``a/b``.

    Returns the value and, for term sums, the factorization the terms spell out.
    Exponents must be elements of N.
    """
    if "r" not in text:
        return parse_rational(text), None
    coeffs: dict[int, int] = {}
    pos = 0
    for chunk in text.split("+"):
        m = _TERM_RE.fullmatch(chunk)
        if not m:
            raise ExpressionError(f"bad term {chunk.strip()!r}", pos)
        if m.group(3) is not None:
            c, e = int(m.group(3)), 0
        else:
            c = int(m.group(1)) if m.group(1) is not None else 1
            e = int(m.group(2)) if m.group(2) is not None else 1
        if e not in S.N:
            raise ExpressionError(f"exponent {e} is not an element of {S.N}", pos)
        if S.cls is SemiringClass.TRIVIAL:
            if c:
                coeffs[0] = coeffs.get(0, 0) + c * S.n**e
        else:
            k = S.N.index_of(e)
            coeffs[k] = coeffs.get(k, 0) + c
        pos += len(chunk) + 1
    z = Factorization(coeffs)
    return sr_pi(S, z), z
