"""Command-line front end: ``expuiseux <command> --r 2/3 --N gens:1 ...``.

Exit codes: 0 success, 1 unparseable input, 2 domain error (not atomic, not
a member, budget exhausted, ...).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import __version__
from .checks import FAIL, PASS, SKIP, VerifyConfig, default_pool, parse_pool_entry, verify
from .errors import NotMember, PuiseuxError
from .invariants import (
    UNBOUNDED,
    inv_aap_decompose,
    inv_betti,
    inv_catenary_element,
    inv_catenary_semiring,
    inv_classify,
    inv_delta_element,
    inv_delta_semiring,
    inv_elasticity,
    inv_length_set,
    inv_omega,
    inv_rclasses,
    inv_union_k,
)
from .numonoid import parse_monoid
from .semiring import (
    Extremal,
    ExpressionError,
    SemiringClass,
    parse_element,
    parse_rational,
    sr_atom,
    sr_extremal,
    sr_factorizations,
    sr_member,
    sr_new,
)
from .serialize import SCHEMA, canonical, render

COMMANDS = ("info", "member", "factorize", "lengths", "delta", "catenary", "betti", "uk", "omega", "classify", "verify")
ELEMENT_COMMANDS = ("member", "factorize", "lengths")
CACHE_ENV = "PUISEUX_CACHE"


class UsageError(Exception):
    """Bad flags or unparseable values; exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="expuiseux", description="Factorization invariants of exponential Puiseux semirings.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--r", help="rational base a/b")
    p.add_argument("--N", dest="monoid", default="gens:1", help="gens:a,b,... or elems:0,...;cond:c")
    p.add_argument("--element", help="rational a/b or a sum like 2*r^18+4*r^25")
    p.add_argument("--exp-cap", type=int, default=64)
    p.add_argument("--len-cap", type=int, default=512)
    p.add_argument("--index-cap", type=int, default=16)
    p.add_argument("--size-cap", type=int, default=16)
    p.add_argument("--budget", type=int, default=10**7)
    p.add_argument("--k", type=int, default=2, help="factorization length for uk")
    p.add_argument("--atom-index", type=int, default=None, help="atom for omega (default: first past the conductor)")
    p.add_argument("--count", type=int, default=5, help="number of Betti elements / atoms to list")
    p.add_argument("--pool", action="append", help="verify pool entry r@monoid (repeatable)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--cache", help="cache file (overridden by $PUISEUX_CACHE)")
    return p


# -- command handlers ---------------------------------------------------------------------
# each returns (result dict, text lines)


def _element(args, S):
    if args.element is None:
        raise UsageError(f"--element is required for {args.command}")
    try:
        return parse_element(args.element, S)
    except ExpressionError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _fmt(q) -> str:
    return str(q) if not isinstance(q, Fraction) or q.denominator != 1 else str(q.numerator)


def cmd_info(args, S):
    res = {"class": S.cls.value, "n": S.n, "d": S.d, "frobenius": S.N.frobenius,
           "min_generators": list(S.N.min_generators), "small_elements": list(S.N.small_elements)}
    lines = [f"{S}: {S.cls.value}", f"N: generators {list(S.N.min_generators)}, Frobenius number {S.N.frobenius}"]
    if S.is_atomic:
        count = args.count if S.cls is not SemiringClass.TRIVIAL else 1
        atoms = [sr_atom(S, k) for k in range(count)]
        res["atoms"] = atoms
        res["catenary"] = inv_catenary_semiring(S)
        el = inv_elasticity(S)
        res["elasticity"] = "unbounded" if el is UNBOUNDED else el
        lines.append("atoms: " + ", ".join(_fmt(a) for a in atoms) + (", ..." if S.nontrivial_atomic else ""))
        lines.append(f"catenary degree: {res['catenary']}")
        lines.append(f"elasticity: {res['elasticity']}")
        if S.nontrivial_atomic:
            res["delta_interval"] = [S.step, S.move_delta(0)]
            lines.append(f"delta set inside [{S.step}, {S.move_delta(0)}]")
    else:
        lines.append("no atoms")
    return res, lines


def cmd_member(args, S):
    x, _ = _element(args, S)
    z = sr_member(S, x)
    res = {"element": x, "member": z is not None, "min_factorization": z}
    if z is None:
        return res, [f"{_fmt(x)} is not in {S}"]
    zmax = sr_extremal(S, z, Extremal.MAX)
    res["max_factorization"] = zmax
    lines = [f"{_fmt(x)} is in {S}", f"min-length factorization: {z} (length {z.length})"]
    lines.append(f"max-length factorization: {zmax} (length {zmax.length})" if zmax is not None else "no max-length factorization")
    return res, lines


def _require_member(S, x):
    if sr_member(S, x) is None:
        raise NotMember(f"{_fmt(x)} is not an element of {S}")


def cmd_factorize(args, S):
    x, _ = _element(args, S)
    _require_member(S, x)
    fs = sr_factorizations(S, x, args.exp_cap, args.len_cap, args.budget)
    res = {"element": x, "factorizations": list(fs.items), "count": len(fs), "complete": fs.complete,
           "complete_upto": fs.complete_upto, "cap_too_small": fs.cap_too_small,
           "budget_exhausted": fs.budget_exhausted}
    lines = [f"{z}  length {z.length}" for z in fs]
    lines.append(f"{len(fs)} factorizations, complete={fs.complete}")
    if not fs.complete and fs.complete_upto is not None:
        lines.append(f"every factorization of length <= {fs.complete_upto} is listed")
    return res, lines


def cmd_lengths(args, S):
    x, _ = _element(args, S)
    _require_member(S, x)
    L = inv_length_set(S, x, args.exp_cap, args.len_cap, args.budget)
    res = {"element": x, "lengths": list(L.lengths), "complete": L.complete,
           "complete_upto": L.complete_upto, "delta": sorted(inv_delta_element(L.exact_lengths))}
    lines = [f"L({_fmt(x)}) = {{{', '.join(map(str, L.lengths))}}}" + ("" if L.complete else "  (truncated)")]
    if not L.complete and L.complete_upto is not None:
        lines.append(f"exhaustive up to length {L.complete_upto}")
    lines.append(f"delta: {res['delta']}")
    if L.complete and S.nontrivial_atomic:
        aap = inv_aap_decompose(L.lengths, S.step)
        res["aap"] = {"y": aap.y, "d": aap.d, "core": list(aap.core), "head": list(aap.head),
                      "tail": list(aap.tail), "B": aap.B}
        lines.append(f"AAP: y={aap.y}, core {list(aap.core)}, head {list(aap.head)}, tail {list(aap.tail)}, B={aap.B}")
        res["elasticity"] = Fraction(L.lengths[-1], L.lengths[0]) if L.lengths[0] else Fraction(1)
    return res, lines


def cmd_delta(args, S):
    if args.element is not None:
        x, _ = _element(args, S)
        _require_member(S, x)
        L = inv_length_set(S, x, args.exp_cap, args.len_cap, args.budget)
        ds = sorted(inv_delta_element(L.exact_lengths))
        return {"element": x, "delta": ds, "complete": L.complete}, [f"delta({_fmt(x)}) = {ds}"]
    rep = inv_delta_semiring(S, index_cap=args.index_cap)
    wit = {}
    for key, w in (("min_attained_at", rep.min_attained_at), ("max_attained_at", rep.max_attained_at)):
        wit[key] = None if w is None else {"element": w.element, "distance": w.distance, "verified": w.verified}
    res = {"delta_of_samples": sorted(rep.delta_of_samples), "lower_family": sorted(rep.lower_family),
           "interval": list(rep.interval), "witnesses": wit, "elements_examined": rep.elements_examined,
           "truncated_elements": rep.truncated_elements}
    lines = [f"observed distances: {sorted(rep.delta_of_samples)}",
             f"lower family: {sorted(rep.lower_family)}",
             f"interval: [{rep.interval[0]}, {rep.interval[1]}]"]
    for key, w in wit.items():
        if w:
            lines.append(f"{key}: {_fmt(w['element'])} distance {w['distance']} verified={w['verified']}")
    return res, lines


def cmd_catenary(args, S):
    if args.element is not None:
        x, _ = _element(args, S)
        _require_member(S, x)
        v, exact = inv_catenary_element(S, x, args.exp_cap, args.len_cap, args.budget)
        return {"element": x, "catenary": v, "exact": exact}, [f"c({_fmt(x)}) = {v}" + ("" if exact else " (truncated set)")]
    v = inv_catenary_semiring(S)
    return {"catenary": v, "exact": True}, [str(v)]


def cmd_betti(args, S):
    rows = []
    lines = []
    for k, x in inv_betti(S, args.count):
        part = inv_rclasses(S, x, exp_cap=min(args.exp_cap, k + 4),
                            len_cap=max(S.up_cost(k), S.up_gain(k)) + 4 * S.step, budget=args.budget)
        rows.append({"index": k, "element": x, "rclasses": len(part), "complete": part.complete})
        lines.append(f"k={k}: {_fmt(x)}  ({len(part)} R-classes{'' if part.complete else ', truncated'})")
    return {"betti": rows}, lines


def cmd_uk(args, S):
    u = inv_union_k(S, args.k, min(args.index_cap, 4))
    res = {"k": args.k, "lengths": list(u.lengths), "difference": u.difference,
           "complete_portion": [u.complete_lo, u.complete_hi],
           "gaps_inside": u.gaps_inside(), "off_residue": u.off_residue()}
    lines = [f"U_{args.k} window: {list(u.lengths)}", f"difference {u.difference}; complete on [{u.complete_lo}, {u.complete_hi}]"]
    return res, lines


def cmd_omega(args, S):
    k = args.atom_index if args.atom_index is not None else S.N.conductor_index
    res_o = inv_omega(S, k, args.exp_cap, args.size_cap, args.budget)
    res = {"atom_index": k, "status": res_o.status.value, "lower": res_o.lower, "upper": res_o.upper,
           "value": res_o.value, "caps": {"exp_cap": res_o.exp_cap, "size_cap": res_o.size_cap}}
    if res_o.value is not None:
        line = f"omega(atom {k}) = {res_o.value}"
    elif res_o.lower is None:
        line = f"omega(atom {k}) is infinite"
    else:
        line = f"omega(atom {k}) >= {res_o.lower} (search within caps)"
    if res_o.upper is not None:
        line += f", bound {res_o.upper}"
    return res, [line]


def cmd_classify(args, S):
    flags = inv_classify(S)
    return flags, [f"{k}: {v}" for k, v in flags.items()]


HANDLERS = {
    "info": cmd_info, "member": cmd_member, "factorize": cmd_factorize, "lengths": cmd_lengths,
    "delta": cmd_delta, "catenary": cmd_catenary, "betti": cmd_betti, "uk": cmd_uk,
    "omega": cmd_omega, "classify": cmd_classify,
}


# -- cache -------------------------------------------------------------------------------------


def _cache_path(args):
    return os.environ.get(CACHE_ENV) or args.cache


def _load_cache(path, err):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("not a JSON object")
        return data
    except FileNotFoundError:
        return {}
    except (OSError, ValueError) as exc:
        err.write(f"warning: ignoring unreadable cache {path}: {exc}\n")
        return {}


def _store_cache(path, data, err):
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".puiseux-", dir=folder)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(data, fh, sort_keys=True)
        os.replace(tmp, path)
    except OSError as exc:
        err.write(f"warning: could not write cache {path}: {exc}\n")
        if os.path.exists(tmp):
            os.unlink(tmp)


def _cache_key(args, S):
    return canonical({
        "command": args.command, "r": S.r, "N": list(S.N.min_generators), "element": args.element,
        "caps": [args.exp_cap, args.len_cap, args.index_cap, args.size_cap, args.budget],
        "k": args.k, "atom_index": args.atom_index, "count": args.count, "json": args.json,
        "version": __version__,
    })


# -- entry points --------------------------------------------------------------------------------


def _run_verify(args, out):
    pool = [parse_pool_entry(p) for p in args.pool] if args.pool else default_pool()
    results = verify(pool, VerifyConfig(index_cap=min(args.index_cap, 8)))
    failed = any(r.status == FAIL for r in results)
    if args.json:
        recs = [{"check": r.name, "instance": r.instance, "status": r.status, "detail": r.detail,
                 "witnesses": [repr(w) for w in r.witnesses]} for r in results]
        out.write(render({"schema": SCHEMA, "op": "verify", "result": recs, "ok": not failed}) + "\n")
    else:
        for r in results:
            out.write(f"{r.status.upper():4}  {r.instance:<40} {r.name:<22} {r.detail}\n")
            for w in r.witnesses:
                out.write(f"      witness: {w!r}\n")
        counts = {s: sum(r.status == s for r in results) for s in (PASS, FAIL, SKIP)}
        out.write(f"{counts[PASS]} passed, {counts[FAIL]} failed, {counts[SKIP]} skipped\n")
    return 1 if failed else 0


def run(argv, out=sys.stdout, err=sys.stderr) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            return _run_verify(args, out)
        if args.r is None:
            raise UsageError("--r is required")
        r = parse_rational(args.r)
        S = sr_new(r, parse_monoid(args.monoid))
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except ExpressionError as exc:
        err.write(f"parse error: {exc}\n")
        return 1
    except PuiseuxError as exc:
        return _domain_error(args, exc, out, err)
    except ValueError as exc:
        err.write(f"parse error: {exc}\n")
        return 1

    path = _cache_path(args)
    key = _cache_key(args, S) if path else None
    if path:
        cache = _load_cache(path, err)
        if key in cache:
            out.write(cache[key])
            return 0
    try:
        result, lines = HANDLERS[args.command](args, S)
    except (UsageError, ExpressionError) as exc:
        err.write(f"parse error: {exc}\n")
        return 1
    except PuiseuxError as exc:
        return _domain_error(args, exc, out, err)
    if args.json:
        record = {
            "schema": SCHEMA, "op": args.command,
            "inputs": {"r": S.r, "N": S.N.spec(), "element": args.element},
            "caps": {"exp_cap": args.exp_cap, "len_cap": args.len_cap, "index_cap": args.index_cap,
                     "size_cap": args.size_cap, "budget": args.budget},
            "result": result,
            "witnesses": result.pop("witnesses", {}),
        }
        for flag in ("complete", "exact"):
            if flag in result:
                record[flag] = result[flag]
        text = render(record) + "\n"
    else:
        text = "\n".join(lines) + "\n"
    out.write(text)
    if path:
        cache[key] = text
        _store_cache(path, cache, err)
    return 0


def _domain_error(args, exc, out, err):
    if getattr(args, "json", False):
        out.write(render({"schema": SCHEMA, "op": args.command, "error": type(exc).__name__, "message": str(exc)}) + "\n")
    else:
        err.write(f"{type(exc).__name__}: {exc}\n")
    return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
