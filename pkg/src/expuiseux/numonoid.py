"""Numerical monoids: cofinite submonoids of the naturals.

A monoid is stored as its elements below the conductor plus the conductor
itself; everything at or above the conductor is a member.  Element ``n``
(0-indexed, so ``element(0) == 0``) and gap ``n`` follow the usual
``s_n`` / ``s_{n+1} - s_n`` convention.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass, field
from functools import reduce
from math import gcd

from .errors import NotAMonoid, NotClosed, NotCofinite


@dataclass(frozen=True)
class NumericalMonoid:
    min_generators: tuple[int, ...]
    frobenius: int
    small_elements: tuple[int, ...]  # every element <= frobenius + 1
    _members: frozenset = field(repr=False, compare=False)

    @property
    def conductor(self) -> int:
        return self.frobenius + 1

    @property
    def multiplicity(self) -> int:
        return self.min_generators[0]

    def __contains__(self, k: int) -> bool:
        if k < 0:
            return False
        return k >= self.conductor or k in self._members

    def element(self, n: int) -> int:
        """The (n+1)-th smallest element ``s_n``."""
        if n < 0:
            raise ValueError("element index must be >= 0")
        below = len(self.small_elements) - 1  # elements strictly below the conductor
        if n < below:
            return self.small_elements[n]
        return self.conductor + (n - below)

    def gap(self, n: int) -> int:
        if n >= len(self.small_elements) - 1:
            return 1
        return self.element(n + 1) - self.element(n)

    def index_of(self, s: int) -> int:
        """Inverse of :meth:`element`; raises ValueError if ``s`` is not a member."""
        if s not in self:
            raise ValueError(f"{s} is not an element of the monoid")
        below = len(self.small_elements) - 1
        if s >= self.conductor:
            return below + (s - self.conductor)
        return bisect.bisect_left(self.small_elements, s)

    @property
    def conductor_index(self) -> int:
        """Index ``m`` with ``s_m = F(N) + 1``."""
        return len(self.small_elements) - 1

    def index_floor(self, s: int) -> int:
        """Largest index ``k`` with ``element(k) <= s`` (requires ``s >= 0``)."""
        if s >= self.conductor:
            return self.index_of(s)
        return bisect.bisect_right(self.small_elements, s) - 1

    def spec(self) -> str:
        return "gens:" + ",".join(map(str, self.min_generators))

    def __str__(self) -> str:
        if self.frobenius == -1:
            return "N"
        return f"<{', '.join(map(str, self.min_generators))}>"


def _sieve(gens, limit):
    member = bytearray(limit + 1)
    member[0] = 1
    for k in range(1, limit + 1):
        for g in gens:
            if g <= k and member[k - g]:
                member[k] = 1
                break
    return member


def _minimal_generators(is_member, conductor, multiplicity):
    # minimal generators all lie below conductor + multiplicity
    elems = [k for k in range(1, conductor + multiplicity) if is_member(k)]
    gens = []
    for k in elems:
        if not any(is_member(k - g) for g in gens if g < k):
            gens.append(k)
    return tuple(gens)


def _build(members_below, conductor):
    # the stated conductor may overshoot; the true one sits just above the largest gap
    present = set(members_below)
    frob = next((k for k in range(conductor - 1, -1, -1) if k not in present), -1)
    if frob == -1:
        return NumericalMonoid((1,), -1, (0,), frozenset())
    conductor = frob + 1
    members = frozenset(e for e in present if e < conductor)
    small = tuple(sorted(members)) + (conductor,)

    def is_member(k):
        return k >= conductor or k in members

    mult = next(k for k in range(1, conductor + 1) if is_member(k))
    gens = _minimal_generators(is_member, conductor, mult)
    return NumericalMonoid(gens, frob, small, members)


def nm_from_generators(gens) -> NumericalMonoid:
    gens = sorted(set(int(g) for g in gens))
    if not gens or gens[0] < 1:
        raise ValueError("generators must be a nonempty list of positive integers")
    if reduce(gcd, gens) != 1:
        raise NotCofinite(f"gcd{tuple(gens)} = {reduce(gcd, gens)} != 1")
    if gens[0] == 1:
        return NumericalMonoid((1,), -1, (0,), frozenset())
    a = gens[0]
    # the sieve stops once `a` consecutive members appear
    member = [1]
    run = 0
    k = 0
    while run < a:
        k += 1
        hit = any(g <= k and member[k - g] for g in gens)
        member.append(1 if hit else 0)
        run = run + 1 if hit else 0
    conductor = k - a + 1
    below = [j for j in range(conductor) if member[j]]
    return _build(below, conductor)


def nm_from_small_elements(elements, conductor: int) -> NumericalMonoid:
    elems = sorted(set(int(e) for e in elements))
    if not elems or elems[0] != 0:
        raise NotAMonoid("0 must be an element")
    if conductor < 0 or any(e >= conductor for e in elems if e != 0) or (conductor == 0 and elems != [0]):
        raise ValueError("every listed element must be below the conductor")
    present = set(elems)
    for i, a in enumerate(elems):
        for b in elems[i:]:
            if a + b < conductor and a + b not in present:
                raise NotClosed(f"{a} + {b} = {a + b} is missing")
    if conductor == 0:
        return NumericalMonoid((1,), -1, (0,), frozenset())
    return _build(elems, conductor)


_GENS_RE = re.compile(r"^gens:(\d+(?:,\d+)*)$")
_ELEMS_RE = re.compile(r"^elems:(\d+(?:,\d+)*);cond:(\d+)$")


def parse_monoid(text: str) -> NumericalMonoid:
    """Parse ``gens:2,3`` or ``elems:0,18,19,25,27;cond:36``."""
    t = text.strip().replace(" ", "")
    m = _GENS_RE.match(t)
    if m:
        return nm_from_generators(int(g) for g in m.group(1).split(","))
    m = _ELEMS_RE.match(t)
    if m:
        return nm_from_small_elements([int(e) for e in m.group(1).split(",")], int(m.group(2)))
    raise ValueError(f"cannot parse monoid spec {text!r}: expected 'gens:a,b,...' or 'elems:0,...;cond:c'")


NATURALS = nm_from_generators([1])
