"""Exact integer primitives: sieves, primality, factorization, valuations,
integer roots and the Kronecker symbol.

Factorizations are carried as prime -> exponent maps so that callers can read
exponents without ever rebuilding the (possibly enormous) integer.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from math import gcd, isqrt

import numpy as np

__all__ = [
    "LIMITS",
    "Limits",
    "Effort",
    "PrimeFactorization",
    "is_prime",
    "factorize",
    "radical",
    "p_valuation",
    "valuation",
    "integer_nth_root",
    "kronecker",
    "primes_in",
    "primes_up_to",
    "check_digits",
]


@dataclass
class Limits:
    """Process-wide resource bounds.  The CLI overrides these from its config."""

    digit_bound: int = 100_000
    sieve_budget: int = 50_000_000


LIMITS = Limits()


def check_digits(n: int, what: str = "integer") -> None:
    """Raise OverflowError if |n| has more decimal digits than the digit bound."""
    # bit_length * log10(2) is an upper bound that avoids a str() conversion
    if n and (abs(n).bit_length() * 0.30103) > LIMITS.digit_bound + 1:
        if len(str(abs(n))) > LIMITS.digit_bound:
            raise OverflowError(f"{what} exceeds the digit bound of {LIMITS.digit_bound}")


# ---------------------------------------------------------------------------
# primality
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# the first 13 prime bases are a deterministic witness set below this bound
_DETERMINISTIC_BOUND = 3_317_044_064_679_887_385_961_981
_EXTRA_ROUNDS = 16


def _is_sprp(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Miller-Rabin; deterministic below 3.3e24, fixed extra rounds above."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if not all(_is_sprp(n, a, d, s) for a in _SMALL_PRIMES):
        return False
    if n < _DETERMINISTIC_BOUND:
        return True
    rng = random.Random(n)
    return all(_is_sprp(n, rng.randrange(2, n - 1), d, s) for _ in range(_EXTRA_ROUNDS))


# ---------------------------------------------------------------------------
# factorization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Effort:
    """Work budget for :func:`factorize`."""

    trial_bound: int = 10_000
    rho_iterations: int = 2_000_000


@dataclass(frozen=True)
class PrimeFactorization:
    """Factored view ``sign * prod(p**e) * residual`` of a nonzero integer.

    ``residual`` is 1 for a complete factorization; otherwise it is the
    composite cofactor the effort budget could not split.
    """

    factors: dict = field(default_factory=dict)
    sign: int = 1
    residual: int = 1

    def __post_init__(self):
        items = sorted((int(p), int(e)) for p, e in self.factors.items() if e)
        for p, e in items:
            if e < 0:
                raise ValueError(f"negative exponent for {p}")
        object.__setattr__(self, "factors", dict(items))
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")

    @property
    def complete(self) -> bool:
        return self.residual == 1

    def exponent(self, p: int) -> int:
        return self.factors.get(p, 0)

    def value(self) -> int:
        n = self.sign * self.residual
        for p, e in self.factors.items():
            n *= p**e
        check_digits(n)
        return n

    def __mul__(self, other: PrimeFactorization) -> PrimeFactorization:
        merged = dict(self.factors)
        for p, e in other.factors.items():
            merged[p] = merged.get(p, 0) + e
        return PrimeFactorization(merged, self.sign * other.sign, self.residual * other.residual)

    def __repr__(self):
        body = " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors.items())
        tail = "" if self.complete else f" [residual {self.residual}]"
        return f"PrimeFactorization({'-' if self.sign < 0 else ''}{body or '1'}{tail})"


def _brent(n: int, budget: int, seed: int) -> int | None:
    """Pollard-Brent; returns a nontrivial factor of composite n or None."""
    rng = random.Random(seed)
    y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
    g = r = q = 1
    spent = 0
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
        spent += r
        if spent > budget:
            return None
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    return g if g != n else None


def _split(n: int, effort: Effort, out: dict, leftovers: list) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    root, exact = integer_nth_root(n, 2)
    if exact:
        _split(root, effort, out, leftovers)
        _split(root, effort, out, leftovers)
        return
    for attempt in range(8):
        d = _brent(n, effort.rho_iterations, seed=n + attempt)
        if d:
            _split(d, effort, out, leftovers)
            _split(n // d, effort, out, leftovers)
            return
    leftovers.append(n)


def factorize(n: int, effort: Effort | None = None) -> PrimeFactorization:
    """Factor a nonzero integer: trial division, then Pollard-Brent.

    When the budget runs out the unsplit cofactor is kept in ``residual`` and
    the result reports ``complete == False``.
    """
    if n == 0:
        raise ValueError("cannot factorize 0")
    check_digits(n)
    effort = effort or Effort()
    sign = -1 if n < 0 else 1
    n = abs(n)
    out: dict = {}
    for p in primes_up_to(effort.trial_bound).tolist():
        if p * p > n:
            break
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
    leftovers: list = []
    if n > 1:
        if n < effort.trial_bound**2:
            out[n] = out.get(n, 0) + 1
        else:
            _split(n, effort, out, leftovers)
    return PrimeFactorization(out, sign, math.prod(leftovers))


def radical(f: PrimeFactorization) -> int:
    """Product of the distinct primes of a complete factorization."""
    if not f.complete:
        raise ValueError("radical of an incomplete factorization")
    return math.prod(f.factors)


def p_valuation(p: int, f) -> int:
    """Exponent of the prime p in a factorization (anything with ``.factors``)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return f.factors.get(p, 0)


def valuation(p: int, n: int) -> int:
    """v_p(n) for a nonzero integer n."""
    if n == 0:
        raise ValueError("valuation of 0")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def integer_nth_root(n: int, k: int) -> tuple[int, bool]:
    """Return (floor(n**(1/k)), exact)."""
    if n < 0 or k < 1:
        raise ValueError("need n >= 0 and k >= 1")
    if n < 2 or k == 1:
        return n, True
    if k == 2:
        r = isqrt(n)
    else:
        # Newton from above converges to the floor
        r = 1 << -(-n.bit_length() // k)
        while True:
            s = ((k - 1) * r + n // r ** (k - 1)) // k
            if s >= r:
                break
            r = s
    return r, r**k == n


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        return int(abs(a) == 1)
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    v = (n & -n).bit_length() - 1
    if v:
        if a % 2 == 0:
            return 0
        n >>= v
        if v % 2 and a % 8 in (3, 5):
            result = -result
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


# ---------------------------------------------------------------------------
# sieving
# ---------------------------------------------------------------------------

_BASE = np.array([2, 3, 5, 7], dtype=np.int64)


def _base_primes(limit: int) -> np.ndarray:
    global _BASE
    if _BASE[-1] < limit:
        size = max(limit, 2 * int(_BASE[-1])) + 1
        mask = np.ones(size, dtype=bool)
        mask[:2] = False
        for p in range(2, isqrt(size - 1) + 1):
            if mask[p]:
                mask[p * p :: p] = False
        base = np.flatnonzero(mask).astype(np.int64)
        base.setflags(write=False)
        _BASE = base
    return _BASE[: np.searchsorted(_BASE, limit, side="right")]


def _segment(lo: int, hi: int) -> np.ndarray:
    """Primes in [lo, hi] by a segmented sieve of Eratosthenes."""
    lo = max(lo, 2)
    if hi < lo:
        return np.empty(0, dtype=np.int64)
    if hi - lo + 1 > LIMITS.sieve_budget:
        raise MemoryError(f"sieve window {hi - lo + 1} exceeds budget {LIMITS.sieve_budget}")
    mask = np.ones(hi - lo + 1, dtype=bool)
    for p in _base_primes(isqrt(hi)).tolist():
        start = max(p * p, -(-lo // p) * p)
        mask[start - lo :: p] = False
    return np.flatnonzero(mask).astype(np.int64) + lo


def primes_up_to(n: int) -> np.ndarray:
    """Ascending array of primes <= n."""
    if n <= 10 * 1024 * 1024:
        return _base_primes(n)
    return _segment(2, n)


def primes_in(lo: int, hi: int, residue: tuple[int, int] | None = None) -> list[int]:
    """Primes in [lo, hi], optionally restricted to p = a (mod b)."""
    ps = _segment(lo, hi)
    if residue is not None:
        a, b = residue
        if b < 1:
            raise ValueError("modulus must be positive")
        if gcd(a, b) > 1 and a != b:
            raise ValueError(f"residue class {a} mod {b} contains at most one prime")
        ps = ps[ps % b == a % b]
    return ps.tolist()
