"""Bhargava factorials l!_S for subsets S of the integers.

For each prime p a p-ordering of S is built greedily: after a_0, each a_n
minimises v_p(prod_{k<n} (a_n - a_k)) over S, and these minima form the
p-sequence v_p(n; S).  Then l!_S = prod_p p^{v_p(l; S)}.

S is infinite, so the greedy step runs over a finite window of the
elements of smallest absolute value.  Each run is repeated on a window twice
as large; an index whose minimum does not move is reported as stable, the
others are upper bounds and flagged.

Set descriptors::

    Z                   all integers
    AP a b              {a n + b}
    POLY c_d ... c_0    {f(n)} for an integer polynomial of degree 1..3
    WINDOW path         an explicit finite set, one integer per line
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .arith import factorize, is_prime, primes_up_to, valuation
from .formclass import Unsupported
from .genfact import FactorizationVector, legendre

__all__ = [
    "BhargavaSet",
    "PSequence",
    "BhargavaRHS",
    "window_size",
    "p_ordering",
    "p_sequence_of",
    "bhargava_profile",
    "quad_image_valuation",
    "cube_image_count",
    "radical_growth_report",
]

_INT64_SAFE = 1 << 61


@dataclass(frozen=True)
class BhargavaSet:
    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind == "AP":
            if len(self.params) != 2 or self.params[0] == 0:
                raise ValueError("AP needs a != 0 and b")
        elif self.kind == "POLY":
            coeffs = list(self.params)
            while len(coeffs) > 1 and coeffs[0] == 0:
                coeffs.pop(0)
            if len(coeffs) < 2 or len(coeffs) > 4:
                raise ValueError("POLY needs a non-constant polynomial of degree <= 3")
            object.__setattr__(self, "params", tuple(coeffs))
        elif self.kind == "WINDOW":
            if len(set(self.params)) != len(self.params):
                raise ValueError("window elements must be distinct")
        elif self.kind != "Z":
            raise ValueError(f"unknown set kind {self.kind!r}")

    @classmethod
    def parse(cls, text: str) -> BhargavaSet:
        tokens = text.split()
        if not tokens:
            raise ValueError("empty set descriptor")
        kind = tokens[0].upper()
        if kind == "Z":
            return cls("Z")
        if kind == "WINDOW":
            values = [int(t) for t in Path(tokens[1]).read_text().split()]
            return cls("WINDOW", tuple(values))
        return cls(kind, tuple(int(t) for t in tokens[1:]))

    def __str__(self):
        return " ".join([self.kind, *map(str, self.params)]) if self.kind != "WINDOW" else "WINDOW"

    def _value(self, n: int) -> int:
        if self.kind == "Z":
            return n
        if self.kind == "AP":
            return self.params[0] * n + self.params[1]
        acc = 0
        for c in self.params:
            acc = acc * n + c
        return acc

    def elements(self, count: int) -> list[int]:
        """The ``count`` elements of smallest |x| (positive first on ties)."""
        if self.kind == "WINDOW":
            return sorted(self.params, key=lambda x: (abs(x), x < 0))[:count]
        if self.kind == "AP":
            a, b = self.params
            centre = -b // a
            span = range(centre - count - 1, centre + count + 2)
        else:
            span = range(-2 * count - 2, 2 * count + 3)
        values = {self._value(n) for n in span}
        return sorted(values, key=lambda x: (abs(x), x < 0))[:count]

    def closed_form(self, l: int, p: int) -> int | None:
        """v_p(l!_S) when a closed form is known: l! for Z, |a|^l l! for AP."""
        if self.kind == "Z":
            return legendre(l, p)
        if self.kind == "AP":
            return l * valuation(p, abs(self.params[0])) + legendre(l, p)
        return None


@dataclass(frozen=True)
class PSequence:
    prime: int
    values: tuple
    ordering: tuple
    stable: tuple

    @property
    def all_stable(self) -> bool:
        return all(self.stable)


def window_size(L: int, p: int, multiplier: int = 8) -> int:
    return max(64, multiplier * (L + 1) * p)


def _greedy(elements: list[int], p: int, L: int, start: int | None) -> tuple[list[int], list[int]]:
    if L + 1 > len(elements):
        raise ValueError("window smaller than the requested ordering length")
    first = 0 if start is None else elements.index(start)
    if max(abs(elements[0]), abs(elements[-1]), abs(start or 0)) * 2 < _INT64_SAFE:
        return _greedy_numpy(np.array(elements, dtype=np.int64), p, L, first)
    return _greedy_python(elements, p, L, first)


def _greedy_numpy(arr: np.ndarray, p: int, L: int, first: int):
    big = np.iinfo(np.int64).max // 2
    vals = np.zeros(len(arr), dtype=np.int64)
    order, seq = [], []
    pick = first
    for n in range(L + 1):
        if n:
            pick = int(np.argmin(vals))
        seq.append(int(vals[pick]) if n else 0)
        a = arr[pick]
        order.append(int(a))
        vals[pick] = big
        d = np.abs(arr - a)
        live = (d != 0) & (vals < big)
        mask = live & (d % p == 0)
        while mask.any():
            vals[mask] += 1
            d[mask] //= p
            mask &= d % p == 0
    return order, seq


def _greedy_python(elements: list[int], p: int, L: int, first: int):
    vals: list[int | None] = [0] * len(elements)
    order, seq = [], []
    pick = first
    for n in range(L + 1):
        if n:
            pick = min((v, i) for i, v in enumerate(vals) if v is not None)[1]
        seq.append(vals[pick] if n else 0)
        a = elements[pick]
        order.append(a)
        vals[pick] = None
        for i, x in enumerate(elements):
            if vals[i] is not None:
                vals[i] += valuation(p, x - a)
    return order, seq


def p_ordering(S: BhargavaSet, p: int, L: int, start: int | None = None, multiplier: int = 8) -> PSequence:
    """Greedy p-ordering a_0..a_L with its p-sequence and stability flags."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if S.kind == "WINDOW":
        order, seq = _greedy(S.elements(len(S.params)), p, L, start)
        return PSequence(p, tuple(seq), tuple(order), (True,) * (L + 1))
    W = window_size(L, p, multiplier)
    small = S.elements(W)
    large = S.elements(2 * W)
    if start is not None and start not in small:
        raise ValueError(f"start element {start} is not in the window")
    _, seq_w = _greedy(small, p, L, start)
    order, seq = _greedy(large, p, L, start)
    stable = tuple(a == b for a, b in zip(seq_w, seq))
    return PSequence(p, tuple(seq), tuple(order), stable)


def p_sequence_of(ordering, p: int) -> list[int]:
    """v_p(prod_{k<n}(a_n - a_k)) for a given sequence (no optimality check)."""
    return [sum(valuation(p, a - b) for b in ordering[:n]) for n, a in enumerate(ordering)]


def bhargava_profile(S: BhargavaSet, l: int, B: int, multiplier: int = 8) -> FactorizationVector:
    """Exponents of l!_S over primes <= B.

    Z and AP use their closed forms and are complete whenever B covers every
    prime that can occur (those <= l and those dividing a).  Other sets go
    through the greedy ordering and are always flagged ``truncated_at=B``.
    """
    if l < 0:
        raise ValueError("l must be non-negative")
    if S.kind in ("Z", "AP"):
        needed = max([l] + (_prime_divisors(S.params[0]) if S.kind == "AP" else []))
        primes = primes_up_to(min(B, needed)).tolist()
        out = {p: S.closed_form(l, p) for p in primes}
        return FactorizationVector(out, truncated_at=B if B < needed else None)
    out, unstable = {}, set()
    for p in primes_up_to(B).tolist():
        seq = p_ordering(S, p, l, multiplier=multiplier)
        out[p] = seq.values[l]
        if not seq.stable[l]:
            unstable.add(p)
    return FactorizationVector(out, truncated_at=B, unstable=frozenset(unstable))


def _prime_divisors(n: int) -> list[int]:
    return list(factorize(abs(n)).factors) if abs(n) > 1 else []


def quad_image_valuation(p: int, l: int, f=(1, 0, 0)) -> int:
    """v_p(l!_S) for S = f(Z), f = ax^2+bx+c, p odd with p not dividing a, l <= p."""
    a = f[0]
    if p == 2 or not is_prime(p):
        raise ValueError("odd prime expected")
    if a % p == 0:
        raise ValueError("p must not divide the leading coefficient")
    if l < 0:
        raise ValueError("l must be non-negative")
    if l > p:
        raise Unsupported("closed form known only for l <= p")
    if l <= (p - 1) // 2:
        return 0
    return 1 if l < p else 2


def cube_image_count(p: int) -> int:
    """Number of cubes modulo p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return (p + 2) // 3 if p % 3 == 1 else p


class BhargavaRHS:
    """Right-hand side l!_S with primes truncated at B."""

    def __init__(self, S: BhargavaSet, B: int, multiplier: int = 8):
        self.S, self.B, self.multiplier = S, B, multiplier

    def profile(self, l: int) -> FactorizationVector:
        return bhargava_profile(self.S, l, self.B, self.multiplier)

    def exponent_direct(self, l: int, p: int) -> int:
        """Greedy value from a different starting element (closed forms: greedy itself)."""
        if self.S.kind in ("Z", "AP"):
            return p_ordering(self.S, p, l, multiplier=self.multiplier).values[l]
        window = self.S.elements(window_size(l, p, self.multiplier))
        return p_ordering(self.S, p, l, start=window[1], multiplier=self.multiplier).values[l]

    def __str__(self):
        return f"bharg:{self.S}@{self.B}"


def radical_growth_report(S: BhargavaSet, ls, B: int) -> list[dict]:
    """Rows (l, log rad(l!_S), log l!_S, ratio) over primes <= B."""
    rows = []
    for l in ls:
        v = bhargava_profile(S, l, B)
        log_rad = math.fsum(math.log(p) for p in v.factors)
        log_val = v.log_value
        rows.append(
            {
                "l": l,
                "log_rad": log_rad,
                "log_value": log_val,
                "ratio": log_rad / log_val if log_val > 0 else None,
                "truncated_at": v.truncated_at,
            }
        )
    return rows
