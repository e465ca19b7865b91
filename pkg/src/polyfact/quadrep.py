"""Representation of integers by binary quadratic forms.

Three levels of answer are offered:

* :func:`exponent_criterion` -- a necessary condition for any binary form,
  read off the exponents of N at primes where the form has no nontrivial
  zero;
* :func:`representable_criterion` -- an exact decision for positive definite
  forms with fundamental discriminant, restricted to the nine imaginary
  quadratic fields of class number one;
* :func:`representable_bruteforce` -- a complete search, used as the oracle.

Representations with ``x == 0`` or ``y == 0`` count.  N = 0 is not handled.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from math import isqrt

from .arith import PrimeFactorization, factorize, is_prime, kronecker
from .formclass import BinaryForm, PSet, Unsupported, in_pset

__all__ = [
    "QuadForm",
    "SplitTag",
    "Blocked",
    "Decision",
    "CLASS_NUMBER_ONE",
    "split_tag",
    "is_fundamental",
    "blocking_primes",
    "exponent_criterion",
    "representable_bruteforce",
    "representable_criterion",
    "is_sum_three_squares",
    "norm_form_restriction",
    "norm_form_from_minpoly",
]

# imaginary quadratic fundamental discriminants with class number 1
CLASS_NUMBER_ONE = frozenset({-3, -4, -7, -8, -11, -19, -43, -67, -163})


class SplitTag(enum.Enum):
    SPLIT = "Split"
    INERT = "Inert"
    RAMIFIED = "Ramified"


def split_tag(disc: int, p: int) -> SplitTag:
    k = kronecker(disc, p)
    return {1: SplitTag.SPLIT, -1: SplitTag.INERT, 0: SplitTag.RAMIFIED}[k]


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not (self.a or self.b or self.c):
            raise ValueError("zero form")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return math.gcd(self.a, self.b, self.c)

    @property
    def positive_definite(self) -> bool:
        return self.disc < 0 and self.a > 0

    @property
    def binary(self) -> BinaryForm:
        return BinaryForm((self.a, self.b, self.c))

    @classmethod
    def from_binary(cls, F: BinaryForm) -> QuadForm:
        if F.degree != 2:
            raise ValueError("quadratic form expected")
        return cls(*F.coeffs)

    def swapped(self) -> QuadForm:
        return QuadForm(self.c, self.b, self.a)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self):
        return str(self.binary)


@dataclass(frozen=True)
class Blocked:
    """N fails a necessary condition at ``prime`` (which divides N to ``exponent``)."""

    prime: int
    exponent: int
    rule: str


@dataclass(frozen=True)
class Decision:
    representable: bool
    reason: str
    prime: int | None = None
    exponent: int | None = None


def is_fundamental(disc: int) -> bool:
    if disc == 0:
        raise ValueError("0 is not a discriminant")
    if disc % 4 in (2, 3):
        raise ValueError(f"{disc} is not a discriminant (must be 0 or 1 mod 4)")

    def squarefree(m: int) -> bool:
        return m in (1, -1) or all(e == 1 for e in factorize(m).factors.values())

    if disc % 4 == 1:
        return squarefree(disc)
    m = disc // 4
    return m % 4 in (2, 3) and squarefree(m)


def _as_factorization(N) -> PrimeFactorization:
    if isinstance(N, int):
        if N <= 0:
            raise ValueError("N must be a positive integer")
        return factorize(N)
    if not getattr(N, "complete", True):
        raise ValueError("incomplete factorization of N")
    return N


def blocking_primes(F: BinaryForm, N):
    """Yield every (q, e) where q is eligible for F and deg F does not divide e."""
    N = _as_factorization(N)
    n = F.degree
    for q, e in N.factors.items():
        if e % n and in_pset(F, q) is PSet.IN:
            yield q, e


def exponent_criterion(F: BinaryForm, N) -> Blocked | None:
    """Smallest blocking prime of N for F, or None when N passes.

    Passing is necessary, not sufficient, for N = F(x, y).  Eligible primes
    never divide the content of F, so exponents of N and N/g agree there.
    """
    for q, e in blocking_primes(F, N):
        return Blocked(q, e, "exponent-criterion")
    return None


def _solve_rows(F: QuadForm, N: int, y: int):
    a, b, c, d = F.a, F.b, F.c, F.disc
    disc = d * y * y + 4 * a * N
    if disc < 0:
        return
    s = isqrt(disc)
    if s * s != disc:
        return
    for num in (-b * y + s, -b * y - s):
        if num % (2 * a) == 0:
            yield num // (2 * a)


def representable_bruteforce(F: QuadForm, N: int) -> tuple[int, int] | None:
    """Complete search for F(x, y) = N over a positive definite form.

    Rows are scanned y = 0, 1, -1, 2, -2, ...; within a row x >= 0 comes
    first.  From 4aF = (2ax + by)^2 - disc*y^2 the scan stops at
    |y| <= sqrt(4aN/|disc|).
    """
    if not F.positive_definite:
        raise ValueError("brute-force search needs a positive definite form")
    if N < 0:
        return None
    bound = isqrt(4 * F.a * N // -F.disc)
    for y0 in range(bound + 1):
        for y in (y0, -y0) if y0 else (0,):
            xs = sorted(set(_solve_rows(F, N, y)), key=lambda x: (x < 0, abs(x)))
            if xs:
                return xs[0], y
    return None


def count_representations(F: QuadForm, N: int) -> int:
    """Number of (x, y) with F(x, y) = N (positive definite F)."""
    if not F.positive_definite:
        raise ValueError("positive definite form expected")
    if N == 0:
        return 1
    bound = isqrt(4 * F.a * N // -F.disc)
    return sum(len(set(_solve_rows(F, N, y))) for y in range(-bound, bound + 1))


def _check_supported(F: QuadForm) -> None:
    if not F.positive_definite:
        raise Unsupported("exact criterion needs a positive definite form")
    g = F.content
    d = F.disc // (g * g)
    if not is_fundamental(d):
        raise Unsupported(f"modified discriminant {d} is not fundamental")
    if d not in CLASS_NUMBER_ONE:
        raise Unsupported(f"class number of Q(sqrt({d})) is not 1")
    if not any(k == g or is_prime(k // g) for k in (F.a, F.c)):
        raise Unsupported("neither a nor c is a prime or 1 (after removing the content)")


def representable_criterion(F: QuadForm, N) -> Decision:
    """Exact decision of N = F(x, y) from the factorization of N.

    The content g is removed first (N must be divisible by g); the
    conditions are then read on a'N' for the primitive form: an even power
    of 2 when the discriminant is 5 mod 8 and even exponents at every odd
    inert prime.  Principality holds automatically in class number one.
    """
    _check_supported(F)
    N = _as_factorization(N)
    if getattr(N, "sign", 1) < 0:
        return Decision(False, "negative N")
    g = F.content
    for p, e in factorize(g).factors.items() if g > 1 else ():
        if N.exponent(p) < e:
            return Decision(False, "content", p, N.exponent(p))
    d = F.disc // (g * g)
    a = F.a // g if F.a // g == 1 or is_prime(F.a // g) else F.c // g
    aN = dict(N.factors)
    if g > 1:
        for p, e in factorize(g).factors.items():
            aN[p] -= e
    if a > 1:
        aN[a] = aN.get(a, 0) + 1
    if d % 8 == 5 and aN.get(2, 0) % 2:
        return Decision(False, "two-adic-parity", 2, aN[2])
    for p in sorted(aN):
        e = aN[p]
        if p != 2 and e % 2 and kronecker(d, p) == -1:
            return Decision(False, "inert-parity", p, e)
    return Decision(True, "parity conditions hold; class number one")


def is_sum_three_squares(N: int) -> bool:
    if N < 0:
        raise ValueError("N must be non-negative")
    if N == 0:
        return True
    while N % 4 == 0:
        N //= 4
    return N % 8 != 7


def norm_form_restriction(disc: int) -> QuadForm:
    """Principal form of discriminant disc: the norm form on the basis {1, w}."""
    if disc % 4 == 0:
        return QuadForm(1, 0, -disc // 4)
    if disc % 4 == 1:
        return QuadForm(1, 1, (1 - disc) // 4)
    raise ValueError(f"{disc} is not a discriminant")


def norm_form_from_minpoly(minpoly) -> BinaryForm:
    """N(x + a*y) restricted to the basis elements {1, a} of Z[a].

    ``minpoly`` is the monic minimal polynomial of a (high -> low).  The
    result is the two-variable form obtained by setting the remaining
    coordinates of the full norm form to zero.
    """
    coeffs = list(minpoly)
    if coeffs[0] != 1:
        raise ValueError("monic minimal polynomial expected")
    n = len(coeffs) - 1
    # prod (x + r_i y) = (-y)^n f(-x/y): coefficient of x^(n-k) y^k is (-1)^k c_k
    return BinaryForm(tuple((-1) ** k * c for k, c in enumerate(coeffs)))
