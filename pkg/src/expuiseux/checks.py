"""The verify suite: property checks run over a pool of semirings.

Each check returns a :class:`CheckResult`; running out of budget turns a
check into a skip, never a failure.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import BudgetExceeded
from .invariants import (
    OmegaStatus,
    inv_aap_decompose,
    inv_betti,
    inv_catenary_element,
    inv_catenary_semiring,
    inv_classify,
    inv_delta_semiring,
    inv_omega,
    inv_union_k,
    catenary_of,
    rclasses_of,
)
from .numonoid import parse_monoid
from .oracle import (
    exponent_window,
    low_form_bounds,
    oracle_minimal_bouquets,
    oracle_representations,
    value_window,
)
from .semiring import (
    Direction,
    Extremal,
    Factorization,
    Semiring,
    membership_bound,
    parse_rational,
    sr_atom,
    sr_extremal,
    sr_factorizations,
    sr_is_extremal,
    sr_member,
    sr_new,
    sr_pi,
    sr_rewrite,
)

PASS, FAIL, SKIP = "pass", "fail", "skip"


@dataclass
class CheckResult:
    name: str
    instance: str
    status: str
    detail: str = ""
    witnesses: list = field(default_factory=list)
    seconds: float = 0.0


@dataclass(frozen=True)
class VerifyConfig:
    samples: int = 200
    oracle_samples: int = 100
    aap_samples: int = 60
    index_cap: int = 8
    betti_count: int = 5
    value_cap: Fraction = Fraction(30)
    union_k_max: int = 4
    union_index_cap: int = 4
    seed: int = 20240601
    budget: int = 200_000


def parse_pool_entry(text: str) -> Semiring:
    """``r@monoid``, e.g. ``2/3@gens:1`` or ``2/3@elems:0;cond:2``."""
    if "@" not in text:
        raise ValueError(f"pool entry {text!r} must look like 'r@monoid-spec'")
    r_text, n_text = text.split("@", 1)
    return sr_new(parse_rational(r_text), parse_monoid(n_text))


DEFAULT_POOL_SPECS = (
    "2/3@gens:1",
    "5/2@gens:1",
    "2/3@elems:0;cond:2",
    "2/3@elems:0,18,19,25,27;cond:36",
    "3/5@gens:2,3",
    "7/3@gens:3,4,5",
)


def default_pool() -> list[Semiring]:
    return [parse_pool_entry(s) for s in DEFAULT_POOL_SPECS]


def label(S: Semiring) -> str:
    return f"r={S.r} N={S.N}"


# -- sampling helpers ------------------------------------------------------------------


def random_factorization(S: Semiring, rng: random.Random, max_index: Optional[int] = None, max_coeff: int = 4) -> Factorization:
    if max_index is None:
        max_index = S.N.conductor_index + 4
    z = {}
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(0, max_index)
        z[k] = z.get(k, 0) + rng.randint(1, max_coeff)
    return Factorization(z)


def _caps_for(S: Semiring, zmin: Factorization):
    """Truncation caps for r < 1 that keep each set small but nontrivial."""
    return zmin.top + 6, zmin.length + 4 * max(S.step, 1) + 12


def capped_factorizations(S, x, budget):
    if S.above_one:
        return sr_factorizations(S, x, budget=budget)
    zmin = sr_member(S, x)
    exp_cap, len_cap = _caps_for(S, zmin)
    return sr_factorizations(S, x, exp_cap=exp_cap, len_cap=len_cap, budget=budget)


def members_up_to(S: Semiring, cap: Fraction) -> list[Fraction]:
    """Every element of S (r > 1) not exceeding ``cap``."""
    atoms = [sr_atom(S, k) for k in value_window(S, cap)]
    seen = {Fraction(0)}
    frontier = [Fraction(0)]
    while frontier:
        nxt = []
        for v in frontier:
            for a in atoms:
                w = v + a
                if w <= cap and w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(seen - {Fraction(0)})


# -- individual checks -----------------------------------------------------------------------


def check_rewrite_invariance(S, cfg, rng):
    bad = []
    for _ in range(cfg.samples):
        z = random_factorization(S, rng)
        k = rng.randint(0, S.N.conductor_index + 3)
        direction = rng.choice([Direction.UP, Direction.DOWN])
        need = S.up_cost(k) if direction is Direction.UP else S.up_gain(k)
        at = k if direction is Direction.UP else k + 1
        z = z + Factorization({at: need})
        z2 = sr_rewrite(S, z, k, direction)
        expected = z.length + (1 if direction is Direction.UP else -1) * (S.up_gain(k) - S.up_cost(k))
        if sr_pi(S, z2) != sr_pi(S, z) or z2.length != expected:
            bad.append((z, k, direction.value))
    return (FAIL if bad else PASS), f"{cfg.samples} rewrites", bad[:3]


def check_extremal_uniqueness(S, cfg, rng):
    bad, skipped, lengths_bad = [], 0, []
    for _ in range(cfg.samples):
        z = random_factorization(S, rng)
        x = sr_pi(S, z)
        zmin = sr_extremal(S, z, Extremal.MIN)
        if not sr_is_extremal(S, zmin, Extremal.MIN) or sr_pi(S, zmin) != x:
            bad.append(("min form", z))
            continue
        fs = capped_factorizations(S, x, cfg.budget)
        if S.above_one and not fs.complete:
            skipped += 1
            continue
        mins = [w for w in fs if sr_is_extremal(S, w, Extremal.MIN)]
        maxs = [w for w in fs if sr_is_extremal(S, w, Extremal.MAX)]
        if len(mins) != 1 or mins[0] != zmin:
            bad.append(("min count", z, len(mins)))
        if S.above_one and (len(maxs) != 1 or maxs[0] != sr_extremal(S, z, Extremal.MAX)):
            bad.append(("max count", z, len(maxs)))
        if S.below_one and len(maxs) > 1:
            bad.append(("max count", z, len(maxs)))
        if S.step and len({l % S.step for l in fs.lengths}) > 1:
            lengths_bad.append((z, fs.lengths))
    detail = f"{cfg.samples - skipped} elements, {skipped} skipped (budget)"
    if lengths_bad:
        bad.append(("length residues", lengths_bad[0]))
    return (FAIL if bad else PASS), detail, bad[:3]


def check_unique_chains(S, cfg, rng):
    bad = []
    for n in range(1, 7):
        z = Factorization({i: 1 for i in range(1, n + 1)})
        fs = sr_factorizations(S, sr_pi(S, z), exp_cap=n + 8, len_cap=None, budget=cfg.budget)
        if not fs.complete or list(fs) != [z]:
            bad.append((n, list(fs)[:3]))
    return (FAIL if bad else PASS), "chains n <= 6", bad


def nonmember_candidates(S: Semiring, rng: random.Random):
    """Rationals near members, most of which are not members."""
    z = random_factorization(S, rng)
    x = sr_pi(S, z)
    t = rng.randint(0, S.N.conductor + 3)
    eps = Fraction(rng.randint(1, 3), S.d**t * rng.choice([1, 1, 2, 5]))
    return x + eps if rng.random() < 0.5 or x <= eps else x - eps


def oracle_member_decision(S: Semiring, x: Fraction, budget: int) -> bool:
    """Membership by brute force.

    r > 1: every atom up to x with value bounds.  r < 1: atoms with exponent
    up to E + 3 under the low-form caps; a hit above E would refute the bound.
    """
    if S.above_one:
        if x < 1:
            return x == 0
        return bool(oracle_representations(S, x, value_window(S, x), budget=budget))
    E = membership_bound(S, x)
    if E is None:
        # the denominator has a prime outside d: no window can produce it
        return False
    window = exponent_window(S, E + 3)
    reps = oracle_representations(S, x, window, low_form_bounds(S, window), budget=budget)
    top = S.N.index_floor(E)
    if any(z.top > top for z in reps):
        raise AssertionError(f"low-form representation of {x} above the exponent bound {E}")
    return bool(reps)


def check_oracle_membership(S, cfg, rng):
    bad, skipped, members, non = [], 0, 0, 0
    for i in range(cfg.samples):
        x = sr_pi(S, random_factorization(S, rng)) if i % 2 == 0 else nonmember_candidates(S, rng)
        mine = sr_member(S, x) is not None
        try:
            theirs = oracle_member_decision(S, x, cfg.budget)
        except BudgetExceeded:
            skipped += 1
            continue
        except AssertionError as exc:
            bad.append(str(exc))
            continue
        members += mine
        non += not mine
        if mine != theirs:
            bad.append((x, mine, theirs))
    detail = f"{members} members, {non} non-members, {skipped} skipped"
    return (FAIL if bad else PASS), detail, bad[:3]


def check_oracle_factorizations(S, cfg, rng):
    if not S.above_one:
        return SKIP, "finite enumeration only for r > 1", []
    bad, skipped = [], 0
    for _ in range(cfg.oracle_samples):
        x = sr_pi(S, random_factorization(S, rng))
        fs = sr_factorizations(S, x, budget=cfg.budget)
        try:
            ref = oracle_representations(S, x, value_window(S, x), budget=cfg.budget)
        except BudgetExceeded:
            skipped += 1
            continue
        if not fs.complete:
            skipped += 1
            continue
        if list(fs) != ref:
            bad.append((x, len(fs), len(ref)))
    return (FAIL if bad else PASS), f"{cfg.oracle_samples - skipped} members, {skipped} skipped", bad[:3]


def check_aap(S, cfg, rng):
    """One bound B per semiring covering every sampled complete length set."""
    if not S.above_one:
        return SKIP, "complete length sets only for r > 1", []
    bs, bad, decomps = [], [], []
    tries = 0
    while len(bs) < cfg.aap_samples and tries < 4 * cfg.aap_samples:
        tries += 1
        x = sr_pi(S, random_factorization(S, rng, max_coeff=6))
        fs = sr_factorizations(S, x, budget=cfg.budget)
        if not fs.complete:
            continue
        try:
            aap = inv_aap_decompose(fs.lengths, S.step)
        except Exception as exc:  # MixedResidues is the failure being tested for
            bad.append((x, repr(exc)))
            continue
        if aap.reassemble() != fs.lengths or not aap.core:
            bad.append((x, aap))
        bs.append(aap.B)
        decomps.append((x, aap))
    if len(bs) < 50:
        return SKIP, f"only {len(bs)} complete length sets", []
    # per-element minimal bounds vary; one bound must cover every sample
    B = max(bs)
    for x, aap in decomps:
        top = aap.core[-1]
        if any(not -B <= h <= -1 for h in aap.head) or any(not top + 1 <= t <= top + B for t in aap.tail):
            bad.append((x, aap, B))
    status = FAIL if bad else PASS
    return status, f"{len(bs)} elements decompose with difference {S.step} and common bound B = {B}", bad[:3]


def betti_rclass_table(S: Semiring, cap: Fraction, budget: int):
    """(x, number of R-classes, is a Betti element) for every member up to cap."""
    betti = set()
    k = 0
    while True:
        b = S.up_cost(k) * sr_atom(S, k)
        if b > cap and sr_atom(S, k) > cap:
            break
        if b <= cap:
            betti.add(b)
        k += 1
    rows = []
    for x in members_up_to(S, cap):
        reps = oracle_representations(S, x, value_window(S, x), budget=budget)
        rows.append((x, len(rclasses_of(reps)), x in betti))
    return rows


def check_betti_characterization(S, cfg, rng):
    if not S.above_one:
        return SKIP, "needs complete factorization sets (r > 1)", []
    rows = betti_rclass_table(S, cfg.value_cap, cfg.budget)
    bad = [(x, n) for x, n, b in rows if (n > 1) != b]
    nb = sum(b for _, _, b in rows)
    return (FAIL if bad else PASS), f"{len(rows)} members <= {cfg.value_cap}, {nb} Betti", bad[:3]


def check_two_classes(S, cfg, rng):
    bad = []
    for k, x in inv_betti(S, cfg.betti_count):
        if S.above_one:
            fs = sr_factorizations(S, x, budget=cfg.budget)
        else:
            # the window must reach past the first move at k
            far = max(S.up_cost(k), S.up_gain(k))
            fs = sr_factorizations(S, x, exp_cap=k + 4, len_cap=far + 4 * S.step, budget=cfg.budget)
        classes = rclasses_of(fs.items)
        if len(classes) != 2:
            bad.append((k, len(classes)))
            continue
        sides = sorted((max(z.top for z in c), min(min(z.support) for z in c)) for c in classes)
        (low_top, _), (_, high_bottom) = sides
        if low_top > k or high_bottom < k + 1:
            bad.append((k, "classes not split at", k))
    return (FAIL if bad else PASS), f"Betti k < {cfg.betti_count}", bad


def check_catenary(S, cfg, rng):
    closed = inv_catenary_semiring(S)
    values = []
    for k, x in inv_betti(S, cfg.betti_count):
        if S.above_one:
            v, exact = inv_catenary_element(S, x, budget=cfg.budget)
            if not exact:
                return SKIP, f"Betti element {k} not enumerated", []
        else:
            v = catenary_of(capped_factorizations(S, x, cfg.budget).items)
        values.append(v)
    if S.above_one:
        ok = max(values) == closed
    else:
        ok = max(values) <= closed
    return (PASS if ok else FAIL), f"closed form {closed}, Betti values {values}", [] if ok else values


def check_delta(S, cfg, rng):
    rep = inv_delta_semiring(S, index_cap=cfg.index_cap, seed=cfg.seed)
    ok = rep.sandwich_ok and rep.min_attained_at.verified and rep.max_attained_at.verified
    detail = f"observed {sorted(rep.delta_of_samples)} within {list(rep.interval)}"
    wit = [] if ok else [rep.min_attained_at, rep.max_attained_at]
    return (PASS if ok else FAIL), detail, wit


def check_omega(S, cfg, rng):
    m = S.N.conductor_index
    res = inv_omega(S, m)
    if S.below_one:
        ok = res.status is OmegaStatus.INFINITE
        return (PASS if ok else FAIL), f"status {res.status.value}", []
    ok = res.status is OmegaStatus.FINITE and res.lower <= res.upper
    # cross-check the small bouquets against brute force
    size_cap, exp_cap = 3, m + 2
    ref = set(oracle_minimal_bouquets(S, m, size_cap, exp_cap, budget=cfg.budget))
    mine = {z for z in res.bouquets if z.length <= size_cap and z.top <= exp_cap}
    ok = ok and ref == mine
    return (PASS if ok else FAIL), f"omega(atom {m}) = {res.lower}, bound {res.upper}", [] if ok else sorted(ref ^ mine)[:3]


def check_unions(S, cfg, rng):
    bad = []
    sizes = []
    for k in range(1, cfg.union_k_max + 1):
        u = inv_union_k(S, k, cfg.union_index_cap, span=32, budget=2000)
        sizes.append(f"U_{k}: [{u.complete_lo}, {u.complete_hi}]")
        if u.gaps_inside() or u.off_residue():
            bad.append((k, u.gaps_inside()[:3], u.off_residue()[:3]))
    return (FAIL if bad else PASS), ", ".join(sizes), bad


def check_classify(S, cfg, rng):
    flags = inv_classify(S)
    ok = flags["accp"] == (S.r >= 1)
    if not S.is_atomic:
        ok = ok and flags["atomic"] is False and flags["omega_finite"] is None
        return (PASS if ok else FAIL), str(flags), []
    omega_infinite = inv_omega(S, 0, exp_cap=2, size_cap=2).status is OmegaStatus.INFINITE
    ok = ok and flags["omega_finite"] == (not omega_infinite)
    ok = ok and flags["locally_tame"] == (S.r.denominator == 1)
    return (PASS if ok else FAIL), str(flags), []


CHECKS: list[tuple[str, Callable]] = [
    ("rewrite_invariance", check_rewrite_invariance),
    ("extremal_uniqueness", check_extremal_uniqueness),
    ("unique_chains", check_unique_chains),
    ("oracle_membership", check_oracle_membership),
    ("oracle_factorizations", check_oracle_factorizations),
    ("aap_structure", check_aap),
    ("betti_rclasses", check_betti_characterization),
    ("betti_two_classes", check_two_classes),
    ("catenary", check_catenary),
    ("delta", check_delta),
    ("omega", check_omega),
    ("unions", check_unions),
    ("classify", check_classify),
]


def run_check(name, fn, S, cfg) -> CheckResult:
    rng = random.Random(f"{cfg.seed}:{name}:{S.r}:{S.N.spec()}")
    t0 = time.perf_counter()
    try:
        status, detail, wit = fn(S, cfg, rng)
    except BudgetExceeded as exc:
        status, detail, wit = SKIP, f"budget exhausted: {exc}", []
    return CheckResult(name, label(S), status, detail, list(wit), time.perf_counter() - t0)


def verify(pool=None, cfg: VerifyConfig = VerifyConfig(), only=None) -> list[CheckResult]:
    pool = default_pool() if pool is None else pool
    out = []
    for S in pool:
        if not S.nontrivial_atomic:
            out.append(CheckResult("classify", label(S), *check_classify(S, cfg, None)[:2]))
            continue
        for name, fn in CHECKS:
            if only and name not in only:
                continue
            out.append(run_check(name, fn, S, cfg))
    return out
