"""Exponent profiles of factorial-like sequences.

Covers l!, lcm(1..l), the primorial of the first l primes, central
multinomials (al)!/(l!)^a, and the ideal-norm factorial
``Pi_K(l) = prod_{N(a) <= l} N(a)`` of a number field K.  Everything is
returned as a sparse prime -> exponent map; the value itself is only built on
request and under the digit bound.

For K quadratic the splitting data come from the Kronecker symbol.  Other
fields are described by a splitting table, one prime per line::

    # p  residue degrees of the primes above p
    2 1,1,1
    3 3
    5 1,2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np

from .arith import LIMITS, check_digits, factorize, is_prime, kronecker, primes_up_to
from .quadrep import is_fundamental

__all__ = [
    "FactorizationVector",
    "HSeq",
    "SplittingProfile",
    "PiK",
    "L_BOUND",
    "PIK_BOUND",
    "legendre",
    "hseq_profile",
    "ideal_count_prime_power",
    "ideal_count",
    "ideal_count_multiplicative",
    "ideal_counts_upto",
    "pi_K_profile",
    "min_exponent_prime",
    "load_splitting_table",
]

L_BOUND = 1_000_000
PIK_BOUND = 100_000


@dataclass(frozen=True)
class FactorizationVector:
    """Sparse exponent vector of a positive integer.

    ``truncated_at`` is set when exponents of primes above that bound are
    unknown; ``unstable`` lists primes whose exponent is only an upper bound.
    """

    factors: dict = field(default_factory=dict)
    truncated_at: int | None = None
    unstable: frozenset = frozenset()

    def __post_init__(self):
        items = sorted((int(p), int(e)) for p, e in self.factors.items() if e)
        if any(e < 0 for _, e in items):
            raise ValueError("negative exponent")
        object.__setattr__(self, "factors", dict(items))

    complete = True

    @classmethod
    def of(cls, n: int) -> FactorizationVector:
        f = factorize(n)
        if not f.complete or f.sign < 0:
            raise ValueError(f"cannot build a vector for {n}")
        return cls(f.factors)

    def exponent(self, p: int) -> int:
        return self.factors.get(p, 0)

    @property
    def log_value(self) -> float:
        """Natural log of the value (reporting only, ~1e-9 relative)."""
        return math.fsum(e * math.log(p) for p, e in self.factors.items())

    @property
    def digits(self) -> int:
        return int(self.log_value / math.log(10)) + 1

    def value(self) -> int:
        if self.log_value / math.log(10) > LIMITS.digit_bound + 1:
            raise OverflowError(f"value exceeds the digit bound of {LIMITS.digit_bound}")
        n = math.prod(p**e for p, e in self.factors.items())
        check_digits(n)
        return n

    def radical(self) -> int:
        return math.prod(self.factors)

    def __add__(self, other: FactorizationVector) -> FactorizationVector:
        out = dict(self.factors)
        for p, e in other.factors.items():
            out[p] = out.get(p, 0) + e
        return FactorizationVector(out)

    def __sub__(self, other: FactorizationVector) -> FactorizationVector:
        out = dict(self.factors)
        for p, e in other.factors.items():
            out[p] = out.get(p, 0) - e
        return FactorizationVector(out)

    def scaled(self, k: int) -> FactorizationVector:
        return FactorizationVector({p: k * e for p, e in self.factors.items()})

    def __repr__(self):
        body = ", ".join(f"{p}: {e}" for p, e in self.factors.items())
        return f"FactorizationVector({{{body}}})"


def legendre(l: int, p: int) -> int:
    """v_p(l!)."""
    e, q = 0, p
    while q <= l:
        e += l // q
        q *= p
    return e


@dataclass(frozen=True)
class HSeq:
    """A highly divisible sequence: factorial, lcm, primorial or multinomial:a."""

    kind: str = "factorial"
    a: int | None = None

    def __post_init__(self):
        if self.kind not in ("factorial", "lcm", "primorial", "multinomial"):
            raise ValueError(f"unknown sequence {self.kind!r}")
        if self.kind == "multinomial" and (self.a is None or self.a < 2):
            raise ValueError("multinomial needs a >= 2")

    @classmethod
    def parse(cls, text: str) -> HSeq:
        kind, _, arg = text.strip().lower().partition(":")
        return cls(kind, int(arg) if arg else None)

    def profile(self, l: int) -> FactorizationVector:
        return hseq_profile(self, l)

    def exponent_direct(self, l: int, p: int) -> int:
        """v_p(H_l) by an independent route (for certificate re-checks)."""
        if self.kind == "factorial":
            return sum(_vp(k, p) for k in range(1, l + 1))
        if self.kind == "lcm":
            return max((_vp(k, p) for k in range(1, l + 1)), default=0)
        if self.kind == "primorial":
            return int(p in _first_primes(l))
        top = sum(_vp(k, p) for k in range(1, self.a * l + 1))
        return top - self.a * sum(_vp(k, p) for k in range(1, l + 1))

    def __str__(self):
        return self.kind if self.a is None else f"{self.kind}:{self.a}"


def _vp(n: int, p: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


@lru_cache(maxsize=64)
def _first_primes(l: int) -> tuple:
    bound = 16
    while True:
        ps = primes_up_to(bound)
        if len(ps) >= l:
            return tuple(ps[:l].tolist())
        bound *= 2


def hseq_profile(kind: HSeq, l: int) -> FactorizationVector:
    if l < 1:
        raise ValueError("l must be positive")
    if l > L_BOUND:
        raise ValueError(f"l exceeds the bound {L_BOUND}")
    if kind.kind == "primorial":
        return FactorizationVector({p: 1 for p in _first_primes(l)})
    top = l * kind.a if kind.kind == "multinomial" else l
    out = {}
    for p in primes_up_to(top).tolist():
        if kind.kind == "factorial":
            out[p] = legendre(l, p)
        elif kind.kind == "lcm":
            out[p] = int(math.log(l, p))
            while p ** out[p] > l:
                out[p] -= 1
            while p ** (out[p] + 1) <= l:
                out[p] += 1
        else:
            out[p] = legendre(top, p) - kind.a * legendre(l, p)
    return FactorizationVector(out)


# ---------------------------------------------------------------------------
# splitting data and ideal counts
# ---------------------------------------------------------------------------


class SplittingProfile:
    """Per-prime counts G_p(i; K) of primes above p with residue degree i."""

    def __init__(self, degree: int, disc: int | None = None, table: dict | None = None, name: str = ""):
        self.degree = degree
        self.disc = disc
        self.table = table or {}
        self.name = name or (f"Q(sqrt({disc}))" if disc is not None else "table")

    @classmethod
    def quadratic(cls, disc: int) -> SplittingProfile:
        if not is_fundamental(disc):
            raise ValueError(f"{disc} is not a fundamental discriminant")
        return cls(2, disc=disc)

    def ramified(self, p: int) -> bool:
        if self.disc is not None:
            return self.disc % p == 0
        return False

    def G(self, p: int) -> dict[int, int]:
        """Map residue degree -> number of primes above p with that degree."""
        if self.disc is not None:
            k = kronecker(self.disc, p)
            return {1: 2} if k == 1 else {2: 1} if k == -1 else {1: 1}
        try:
            parts = self.table[p]
        except KeyError:
            raise LookupError(f"prime {p} is missing from the splitting table") from None
        G: dict[int, int] = {}
        for f in parts:
            G[f] = G.get(f, 0) + 1
        return G

    def __repr__(self):
        return f"SplittingProfile({self.name}, degree={self.degree})"


def load_splitting_table(path, degree: int | None = None) -> SplittingProfile:
    """Read lines ``p f_1,f_2,...`` listing the residue degrees of the primes above p.

    A ramified prime is written ``f^e``; it counts once in G_p(f) and e*f
    towards the field degree.  ``#`` starts a comment.
    """
    table: dict[int, tuple] = {}
    sums: set[int] = set()
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            p_text, parts_text = line.split(None, 1)
            p = int(p_text)
            parts = []
            for tok in parts_text.replace(" ", "").split(","):
                f, _, e = tok.partition("^")
                parts.append((int(f), int(e) if e else 1))
        except ValueError:
            raise ValueError(f"{path}:{lineno}: expected 'p f_1,f_2,...'") from None
        if not is_prime(p) or any(f < 1 or e < 1 for f, e in parts):
            raise ValueError(f"{path}:{lineno}: bad entry {line!r}")
        table[p] = tuple(sorted(f for f, _ in parts))
        sums.add(sum(f * e for f, e in parts))
    degrees = sums
    if len(degrees) > 1:
        raise ValueError(f"{path}: inconsistent field degree {sorted(degrees)}")
    k = degree or (degrees.pop() if degrees else 1)
    return SplittingProfile(k, table=table, name=str(path))


def _binom_rep(g: int, a: int) -> int:
    """Multisets of size a from g kinds: C(g + a - 1, a)."""
    if a == 0:
        return 1
    if g == 0:
        return 0
    return math.comb(g + a - 1, a)


def ideal_count_prime_power(G: dict[int, int], m: int) -> int:
    """a(p^m) = sum over a_1 + 2a_2 + ... + m a_m = m of prod_i C(G(i)+a_i-1, a_i).

    The sum is organized as a product over residue degrees i of the series
    sum_a C(G(i)+a-1, a) t^(i a), truncated at t^m.
    """
    if m < 0:
        raise ValueError("m must be non-negative")
    series = [1] + [0] * m
    for i, g in G.items():
        if g < 0 or i < 1:
            raise ValueError("bad splitting data")
        if i > m or g == 0:
            continue
        nxt = [0] * (m + 1)
        for k, c in enumerate(series):
            if c:
                for a in range((m - k) // i + 1):
                    nxt[k + i * a] += c * _binom_rep(g, a)
        series = nxt
    return series[m]


def ideal_count(disc: int, n: int) -> int:
    """a(n) for Q(sqrt(disc)) as the divisor sum of the Kronecker character."""
    if n < 1:
        raise ValueError("n must be positive")
    total = 0
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            total += kronecker(disc, d)
            if d * d != n:
                total += kronecker(disc, n // d)
    return total


def ideal_count_multiplicative(profile: SplittingProfile, n: int) -> int:
    """a(n) as the product of a(p^m) over the factorization of n."""
    out = 1
    for p, m in factorize(n).factors.items():
        out *= ideal_count_prime_power(profile.G(p), m)
        if not out:
            break
    return out


def ideal_counts_upto(profile: SplittingProfile, l: int) -> np.ndarray:
    """Array a[0..l] of ideal counts (a[0] unused), built multiplicatively."""
    a = np.zeros(l + 1, dtype=object)
    a[1:] = 1
    for p in primes_up_to(l).tolist():
        G = profile.G(p)
        pk, m = p, 1
        while pk <= l:
            ratio = ideal_count_prime_power(G, m)
            # multiply exact p^m parts: positions divisible by p^m but not p^(m+1)
            idx = np.arange(pk, l + 1, pk)
            idx = idx[idx % (pk * p) != 0]
            a[idx] = a[idx] * ratio
            pk *= p
            m += 1
    return a


class PiK:
    """Right-hand side Pi_K(l) for a quadratic field or a splitting table."""

    def __init__(self, splitting: SplittingProfile):
        self.splitting = splitting

    @classmethod
    def quadratic(cls, disc: int) -> PiK:
        return cls(SplittingProfile.quadratic(disc))

    def profile(self, l: int) -> FactorizationVector:
        return pi_K_profile(self.splitting, l)

    def exponent_direct(self, l: int, p: int) -> int:
        """sum_{n <= l} a(n) v_p(n), with a(n) from the divisor sum when quadratic."""
        sp = self.splitting
        total = 0
        for n in range(p, l + 1, p):
            if sp.disc is not None:
                a = ideal_count(sp.disc, n)
            else:
                a = ideal_count_multiplicative(sp, n)
            total += a * _vp(n, p)
        return total

    def __str__(self):
        sp = self.splitting
        return f"pik:{sp.disc}" if sp.disc is not None else f"pik-table:{sp.name}"


def pi_K_profile(profile, l: int) -> FactorizationVector:
    """Exponents of Pi_K(l): v_p = sum_{n <= l} a(n) v_p(n)."""
    if isinstance(profile, int):
        profile = SplittingProfile.quadratic(profile)
    if l < 1:
        raise ValueError("l must be positive")
    if l > PIK_BOUND:
        raise ValueError(f"l exceeds the bound {PIK_BOUND}")
    a = ideal_counts_upto(profile, l)
    out = {}
    for p in primes_up_to(l).tolist():
        e = 0
        pk = p
        while pk <= l:
            # each multiple of p^k contributes one to v_p(n)
            e += int(sum(a[pk::pk]))
            pk *= p
        out[p] = e
    return FactorizationVector(out)


def min_exponent_prime(v: FactorizationVector, eligible) -> tuple[int, int] | None:
    """Eligible prime of smallest exponent in v (ties go to the smaller prime)."""
    best = None
    for p, e in v.factors.items():
        if eligible(p) and (best is None or e < best[1]):
            best = (p, e)
    return best
