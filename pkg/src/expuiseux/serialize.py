"""Stable JSON encoding of result records.

Rationals become ``{"num": "2", "den": "3"}`` with decimal strings and
factorizations become ``{"factorization": [[index, count], ...]}``; decoding
reverses both, so ``decode(json.loads(render(rec))) == rec`` for records built
from dicts, lists, strings, ints, bools, None, Fractions and Factorizations.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .semiring import Factorization

SCHEMA = "1"


def encode(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return {"num": str(obj.numerator), "den": str(obj.denominator)}
    if isinstance(obj, Factorization):
        return {"factorization": [[k, c] for k, c in obj.items]}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return [encode(v) for v in sorted(obj)]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def decode(obj):
    if isinstance(obj, dict):
        if set(obj) == {"num", "den"} and all(isinstance(v, str) for v in obj.values()):
            return Fraction(int(obj["num"]), int(obj["den"]))
        if set(obj) == {"factorization"}:
            return Factorization((k, c) for k, c in obj["factorization"])
        return {k: decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    return obj


def render(record) -> str:
    return json.dumps(encode(record), sort_keys=True, indent=2)


def canonical(record) -> str:
    """Compact, key-sorted form used for cache keys."""
    return json.dumps(encode(record), sort_keys=True, separators=(",", ":"))
