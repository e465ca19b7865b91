"""Desk-scale searches and per-l certificates.

* :func:`brocard_search` finds every (x, l) with P(x) = l! up to a bound;
* :func:`certificate_search` decides, for each l in a range, whether a binary
  form can represent a factorial-like right-hand side, and records a
  re-checkable witness for every verdict;
* :func:`family_check`, :func:`bertrand_gap_check` and :func:`parity_blocker`
  cover the remaining empirical checks.

Reports serialize to JSON as::

    {"equation": str, "range": {"lo": int, "hi": int},
     "entries": [{"l", "verdict", "prime"?, "exponent"?, "witness"?, "rule"}],
     "solutions"?: [{"x", "l"}],
     "meta": {"runtime_ms": int, "truncation": [...]}}
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from .arith import LIMITS, check_digits, integer_nth_root, is_prime, kronecker, primes_in, primes_up_to
from .formclass import BinaryForm, PSet, Unsupported, format_poly, in_pset
from .genfact import FactorizationVector, HSeq, PiK
from .quadrep import (
    CLASS_NUMBER_ONE,
    QuadForm,
    blocking_primes,
    representable_bruteforce,
    representable_criterion,
)

__all__ = [
    "Entry",
    "SearchReport",
    "SearchUnknown",
    "SIEVE_MODULI",
    "integer_roots",
    "brocard_search",
    "certificate_search",
    "verify_entry",
    "family_check",
    "bertrand_gap_check",
    "parity_blocker",
    "parse_rhs",
]

BRUTE_LIMIT = 10**12  # largest value handed to the exhaustive search


class SearchUnknown(Exception):
    """The search cannot decide the instance within its bounds."""


@dataclass
class Entry:
    l: int
    verdict: str  # Representable | Blocked | Unknown
    rule: str
    prime: int | None = None
    exponent: int | None = None
    witness: tuple | None = None

    def to_dict(self) -> dict:
        out = {"l": self.l, "verdict": self.verdict}
        for key in ("prime", "exponent"):
            if getattr(self, key) is not None:
                out[key] = getattr(self, key)
        if self.witness is not None:
            out["witness"] = list(self.witness)
        out["rule"] = self.rule
        return out


@dataclass
class SearchReport:
    equation: str
    lo: int
    hi: int
    entries: list = field(default_factory=list)
    solutions: list | None = None
    runtime_ms: int = 0
    truncation: list = field(default_factory=list)

    def counts(self) -> dict:
        out = {"Representable": 0, "Blocked": 0, "Unknown": 0}
        for e in self.entries:
            out[e.verdict] += 1
        return out

    @property
    def unknown_dominated(self) -> bool:
        c = self.counts()
        return c["Unknown"] * 2 > len(self.entries)

    def to_dict(self, meta: bool = True) -> dict:
        out = {
            "equation": self.equation,
            "range": {"lo": self.lo, "hi": self.hi},
            "entries": [e.to_dict() for e in self.entries],
        }
        if self.solutions is not None:
            out["solutions"] = [{"x": x, "l": l} for x, l in self.solutions]
        if meta:
            out["meta"] = {"runtime_ms": self.runtime_ms, "truncation": list(self.truncation)}
        return out

    def to_json(self, meta: bool = True) -> str:
        return json.dumps(self.to_dict(meta), indent=1)


# ---------------------------------------------------------------------------
# P(x) = N
# ---------------------------------------------------------------------------


def _peval(coeffs, x: int) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _cauchy(coeffs) -> int:
    """Integer bound beyond which all real roots of the polynomial lie inside."""
    lead = abs(coeffs[0])
    return 1 + max((-(-abs(c) // lead) for c in coeffs[1:]), default=0)


def _monotone_root(Q, lo: int, sign_inf: int, guess: int) -> int | None:
    """Integer root of Q on [lo, inf), where Q is strictly monotone with limit sign_inf."""
    hi = max(lo + 1, guess + 2)
    while _sign(_peval(Q, hi)) != sign_inf and _peval(Q, hi) != 0:
        hi = 2 * hi
    if _peval(Q, hi) == 0:
        return hi
    if _sign(_peval(Q, lo)) == sign_inf:
        return lo if _peval(Q, lo) == 0 else None
    while hi - lo > 1:
        mid = (lo + hi) // 2
        v = _peval(Q, mid)
        if v == 0:
            return mid
        if _sign(v) == sign_inf:
            hi = mid
        else:
            lo = mid
    return lo if _peval(Q, lo) == 0 else None


def _sign(v: int) -> int:
    return (v > 0) - (v < 0)


def integer_roots(P, N) -> list[int]:
    """All integers x with P(x) = N (P given high -> low).

    Outside the Cauchy bound of P' the polynomial P - N is monotone, so each
    side holds at most one root, found by exact bisection from an n-th root
    estimate; the bounded middle is scanned directly.
    """
    P = list(P)
    while len(P) > 1 and P[0] == 0:
        P.pop(0)
    n = len(P) - 1
    if n < 1:
        raise ValueError("P must have degree >= 1")
    if isinstance(N, FactorizationVector):
        try:
            N = N.value()
        except OverflowError as exc:
            raise SearchUnknown(str(exc)) from None
    check_digits(N)
    Q = P[:-1] + [P[-1] - N]
    deriv = [c * (n - i) for i, c in enumerate(P[:-1])]
    C = _cauchy(deriv) if n > 1 else 0
    roots = {x for x in range(-C, C + 1) if _peval(Q, x) == 0}
    guess = integer_nth_root(abs(N) // abs(P[0]), n)[0]
    lead = _sign(P[0])
    r = _monotone_root(Q, C + 1, lead, guess)
    if r is not None:
        roots.add(r)
    # x -> -x turns the left tail into a right tail
    Qneg = [c * (-1) ** (n - i) for i, c in enumerate(Q)]
    r = _monotone_root(Qneg, C + 1, lead * (-1) ** n, guess)
    if r is not None:
        roots.add(-r)
    return sorted(roots, key=lambda x: (abs(x), x < 0))


SIEVE_MODULI = tuple(
    q for q in range(2, 65) if any(q == p**k for p in (2, 3, 5, 7) for k in range(1, 7)) or is_prime(q)
)


def brocard_search(P, l_max: int, l_min: int = 1) -> SearchReport:
    """Every (x, l) with P(x) = l! for l_min <= l <= l_max.

    l! mod m is compared against the image of P mod m for each sieve modulus
    before the factorial is handed to the exact root finder.
    """
    P = list(P)
    if len(P) - 1 < 2:
        raise ValueError("P must have degree >= 2")
    if l_max > 2000:
        raise ValueError("l_max must be at most 2000")
    start = time.perf_counter()
    images = {m: {_peval(P, x) % m for x in range(m)} for m in SIEVE_MODULI}
    report = SearchReport(f"{format_poly(P)} = l!", l_min, l_max, solutions=[])
    fact = factorial(l_min - 1) if l_min > 1 else 1
    for l in range(l_min, l_max + 1):
        fact *= l
        excluded = next((m for m in SIEVE_MODULI if fact % m not in images[m]), None)
        if excluded is not None:
            report.entries.append(Entry(l, "Blocked", f"residue mod {excluded}"))
            continue
        xs = integer_roots(P, fact)
        if xs:
            report.entries.append(Entry(l, "Representable", "exact root", witness=tuple(xs)))
            report.solutions.extend((x, l) for x in xs)
        else:
            report.entries.append(Entry(l, "Blocked", "exact root test"))
    report.runtime_ms = int(1000 * (time.perf_counter() - start))
    return report


def brocard_naive(P, l_max: int, l_min: int = 1) -> list[tuple[int, int]]:
    """Materialize-and-root reference: same answer as brocard_search, no sieve."""
    out = []
    for l in range(l_min, l_max + 1):
        out.extend((x, l) for x in integer_roots(P, factorial(l)))
    return out


# ---------------------------------------------------------------------------
# right-hand sides
# ---------------------------------------------------------------------------


def parse_rhs(text: str, multiplier: int = 8):
    """``factorial | lcm | primorial | multinomial:a | pik:D | pik-table:path | bharg:<set>@B``."""
    head, _, arg = text.partition(":")
    head = head.strip().lower()
    if head in ("factorial", "lcm", "primorial", "multinomial"):
        return HSeq.parse(text)
    if head == "pik":
        return PiK.quadratic(int(arg))
    if head == "pik-table":
        from .genfact import load_splitting_table

        return PiK(load_splitting_table(arg))
    if head == "bharg":
        from .bhargava import BhargavaRHS, BhargavaSet

        desc, _, bound = arg.rpartition("@")
        if not desc:
            raise ValueError("bharg descriptor needs '@B' (prime bound)")
        return BhargavaRHS(BhargavaSet.parse(desc), int(bound), multiplier)
    raise ValueError(f"unknown right-hand side {text!r}")


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------


def _principal_mul(u, v, b: int, c: int):
    # (x1 + y1 w)(x2 + y2 w) with w^2 = b w - c
    x1, y1 = u
    x2, y2 = v
    return x1 * x2 - c * y1 * y2, x1 * y2 + x2 * y1 + b * y1 * y2


def _principal_pow(u, e: int, b: int, c: int):
    result = (1, 0)
    while e:
        if e & 1:
            result = _principal_mul(result, u, b, c)
        u = _principal_mul(u, u, b, c)
        e >>= 1
    return result


def _construct_witness(Q: QuadForm, v: FactorizationVector):
    """Representation of the profile's value by a principal form x^2 + bxy + cy^2.

    Norm-p elements are found by search, inert primes contribute p^(e/2), and
    the pieces are multiplied in Z[w].  Requires the parity conditions.
    """
    if Q.a != 1:
        return None
    d = Q.disc
    elem = (1, 0)
    for p, e in v.factors.items():
        if kronecker(d, p) == -1:
            if e % 2:
                return None
            elem = _principal_mul(elem, (p ** (e // 2), 0), Q.b, Q.c)
            continue
        base = representable_bruteforce(Q, p)
        if base is None:
            return None
        elem = _principal_mul(elem, _principal_pow(base, e, Q.b, Q.c), Q.b, Q.c)
    return elem


def _choose_blocker(violators: list[tuple[int, int]]) -> tuple[int, int]:
    ones = [ve for ve in violators if ve[1] == 1]
    return min(ones or violators)


def _usable(v: FactorizationVector, q: int) -> bool:
    return (v.truncated_at is None or q <= v.truncated_at) and q not in v.unstable


def _eligible_norm(F: BinaryForm, q: int) -> bool:
    return in_pset(F, q) is PSet.IN and (F.const * F.disc) % q != 0


def _decide(F: BinaryForm, rhs, l: int, mode: str) -> Entry:
    v = rhs.profile(l)
    if mode == "norm":
        cands = [(q, e) for q, e in v.factors.items() if e == 1 and _usable(v, q) and _eligible_norm(F, q)]
        if cands:
            q, e = min(cands)
            return Entry(l, "Blocked", "norm-form", q, e)
        return Entry(l, "Unknown", "norm-form restriction passes")
    violators = [(q, e) for q, e in blocking_primes(F, v) if _usable(v, q)]
    if violators:
        q, e = _choose_blocker(violators)
        return Entry(l, "Blocked", "exponent-criterion", q, e)
    if v.truncated_at is not None or v.unstable:
        return Entry(l, "Unknown", f"profile truncated at {v.truncated_at}")
    if F.degree != 2:
        return Entry(l, "Unknown", "exponent criterion passes")
    Q = QuadForm.from_binary(F)
    if not Q.positive_definite:
        return Entry(l, "Unknown", "indefinite form; necessary conditions pass")
    small = v.log_value < math.log(BRUTE_LIMIT)
    try:
        dec = representable_criterion(Q, v)
    except Unsupported:
        if not small:
            return Entry(l, "Unknown", "criterion unsupported; value too large to search")
        w = representable_bruteforce(Q, v.value())
        if w is None:
            return Entry(l, "Blocked", "exhaustive-search")
        return Entry(l, "Representable", "exhaustive-search", witness=w)
    if not dec.representable:
        return Entry(l, "Blocked", dec.reason, dec.prime, dec.exponent)
    if small:
        w = representable_bruteforce(Q, v.value())
    else:
        w = _construct_witness(Q, v)
    return Entry(l, "Representable", "class-number-one-criterion", witness=w)


def _decide_block(F, rhs, ls, mode):
    return [_decide(F, rhs, l, mode) for l in ls]


def certificate_search(F, rhs, lo: int, hi: int, mode: str = "auto", workers: int = 1) -> SearchReport:
    """One verdict per l in [lo, hi] for F(x, y) = RHS(l).

    mode "auto" applies the exponent criterion and, for positive definite
    quadratic forms, the exact class-number-one criterion; mode "norm"
    treats F as the two-variable restriction of a norm form, where only
    exponent 1 at an eligible prime blocks.
    """
    if isinstance(F, QuadForm):
        F = F.binary
    if mode not in ("auto", "norm"):
        raise ValueError(f"unknown mode {mode!r}")
    if lo > hi:
        raise ValueError("empty range")
    start = time.perf_counter()
    ls = list(range(lo, hi + 1))
    if workers > 1 and len(ls) > 1:
        chunk = -(-len(ls) // (4 * workers))
        blocks = [ls[i : i + chunk] for i in range(0, len(ls), chunk)]
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_decide_block, [F] * len(blocks), [rhs] * len(blocks), blocks, [mode] * len(blocks))
            entries = [e for part in parts for e in part]
    else:
        entries = _decide_block(F, rhs, ls, mode)
    report = SearchReport(f"{F} = {rhs}(l)", lo, hi, entries)
    bound = getattr(rhs, "B", None)
    if bound is not None and getattr(rhs, "S", None) is not None and rhs.S.kind not in ("Z", "AP"):
        report.truncation.append(f"primes > {bound} not examined")
    if isinstance(rhs, PiK) and rhs.splitting.disc is None:
        report.truncation.append("splitting data from a user table; exact only for the primes it lists")
    report.runtime_ms = int(1000 * (time.perf_counter() - start))
    return report


def _eligible_bruteforce(F: BinaryForm, q: int) -> bool:
    """q is good for F and F has no nontrivial zero mod q, by exhaustion."""
    bad = F.disc_mod % q == 0 or (F.lead % q == 0 and F.const % q == 0)
    if bad or F.lead % q == 0:
        return False
    return all(_peval(F.coeffs, x) % q for x in range(q))


def _is_inert_bruteforce(d: int, q: int) -> bool:
    if d % q == 0:
        return False
    if q == 2:
        return d % 8 == 5
    return all((x * x - d) % q for x in range(q))


def verify_entry(F, rhs, entry: Entry, mode: str = "auto") -> bool:
    """Re-derive a verdict from raw inputs, independently of the search path."""
    if isinstance(F, QuadForm):
        F = F.binary
    l, q, e = entry.l, entry.prime, entry.exponent
    if entry.verdict == "Unknown":
        return True
    if entry.verdict == "Representable":
        if entry.witness is None:
            dec = representable_criterion(QuadForm.from_binary(F), rhs.profile(l))
            return dec.representable
        return F(*entry.witness) == rhs.profile(l).value()
    if entry.rule == "exhaustive-search":
        return representable_bruteforce(QuadForm.from_binary(F), rhs.profile(l).value()) is None
    if e != rhs.exponent_direct(l, q):
        return False
    if entry.rule == "exponent-criterion":
        return e % F.degree != 0 and _eligible_bruteforce(F, q)
    if entry.rule == "norm-form":
        return e == 1 and _eligible_bruteforce(F, q) and (F.const * F.disc) % q != 0
    Q = QuadForm.from_binary(F)
    g = Q.content
    d = Q.disc // (g * g)
    a = Q.a // g if Q.a // g == 1 or is_prime(Q.a // g) else Q.c // g
    adjusted = e - _vp(g, q) + _vp(a, q)
    if entry.rule == "inert-parity":
        return q != 2 and adjusted % 2 == 1 and _is_inert_bruteforce(d, q)
    if entry.rule == "two-adic-parity":
        return q == 2 and d % 8 == 5 and adjusted % 2 == 1
    if entry.rule == "content":
        return e < _vp(g, q)
    return False


def _vp(n: int, p: int) -> int:
    e = 0
    while n and n % p == 0:
        n //= p
        e += 1
    return e


# ---------------------------------------------------------------------------
# other checks
# ---------------------------------------------------------------------------


def family_check(lo: int, hi: int) -> list[dict]:
    """Check (a!/4 + 1)^2 - (a!/4 - 1)^2 = a! for lo <= a <= hi."""
    if lo < 4:
        raise ValueError("a must be at least 4 (a!/4 must be an integer)")
    rows = []
    f = factorial(lo - 1)
    for a in range(lo, hi + 1):
        f *= a
        check_digits(f)
        x, y = f // 4 + 1, f // 4 - 1
        rows.append({"a": a, "x": x, "y": y, "ok": f % 4 == 0 and x * x - y * y == f})
    return rows


def bertrand_gap_check(eligible, lo: int, hi: int, ratio=2) -> list[tuple[int, int | None]]:
    """Eligible primes p in [lo, hi] with no eligible prime in (p, ratio*p).

    ``eligible`` is a residue class (a, b) or a BinaryForm (primes where the
    form has no nontrivial zero).  Returns (p, next eligible prime or None).
    """
    A = Fraction(str(ratio)) if isinstance(ratio, float) else Fraction(ratio)
    if A <= 1:
        raise ValueError("ratio must exceed 1")
    top = math.ceil(A * hi)
    if isinstance(eligible, BinaryForm):
        ps = np.array([p for p in primes_in(lo, top) if in_pset(eligible, p) is PSet.IN], dtype=np.int64)
    else:
        ps = np.array(primes_in(lo, top, tuple(eligible)), dtype=np.int64)
    inside = ps[ps <= hi]
    nxt = ps[1 : len(inside) + 1]
    out = []
    if len(nxt) < len(inside):
        out.append((int(inside[-1]), None))
        inside = inside[: len(nxt)]
    # q >= A p  <=>  q * den >= num * p
    bad = nxt[: len(inside)] * A.denominator >= inside * A.numerator
    out = [(int(p), int(q)) for p, q in zip(inside[bad], nxt[: len(inside)][bad])] + out
    return sorted(out, key=lambda t: t[0])


def parity_blocker(disc: int, rhs, lo: int, hi: int) -> list[dict]:
    """Per l: do the 2-adic and inert-prime parity conditions hold for RHS(l)?

    When disc is in the class-number-one table, passing both conditions
    means the principal form of discriminant disc represents RHS(l).
    """
    full = disc in CLASS_NUMBER_ONE
    rows = []
    for l in range(lo, hi + 1):
        v = rhs.profile(l)
        row = {"l": l, "passes": True, "condition": None, "prime": None, "exponent": None, "full_criterion": full}
        if disc % 8 == 5 and v.exponent(2) % 2:
            row.update(passes=False, condition="two-adic-parity", prime=2, exponent=v.exponent(2))
        else:
            for p, e in v.factors.items():
                if p != 2 and e % 2 and kronecker(disc, p) == -1:
                    row.update(passes=False, condition="inert-parity", prime=p, exponent=e)
                    break
        if v.truncated_at is not None:
            row["truncated_at"] = v.truncated_at
        rows.append(row)
    return rows
