"""Slow, obviously-correct reference implementations used only by the tests."""

from __future__ import annotations

from itertools import product
from math import isqrt


def naive_factor(n: int) -> dict:
    n = abs(n)
    out, d = {}, 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def naive_primes(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, isqrt(p) + 1))]


def _divmod_fp(f, g, p):
    """Remainder of f by monic g over F_p (coefficients high -> low)."""
    f = list(f)
    while len(f) >= len(g):
        c = f[0] % p
        if c:
            for i in range(len(g)):
                f[i] = (f[i] - c * g[i]) % p
        f.pop(0)
    return f, not any(x % p for x in f)


def _quotient_fp(f, g, p):
    f = list(f)
    q = []
    while len(f) >= len(g):
        c = f[0] % p
        q.append(c)
        for i in range(len(g)):
            f[i] = (f[i] - c * g[i]) % p
        f.pop(0)
    return q


def fp_factor_degrees(coeffs_high, p: int) -> list[int]:
    """Degrees of the irreducible factors of a polynomial mod p, by trial division."""
    f = [c % p for c in coeffs_high]
    while f and f[0] == 0:
        f.pop(0)
    inv = pow(f[0], -1, p)
    f = [c * inv % p for c in f]
    degrees = []
    d = 1
    while len(f) - 1 >= d:
        if 2 * d > len(f) - 1:
            degrees.append(len(f) - 1)
            break
        found = False
        for tail in product(range(p), repeat=d):
            g = [1, *tail]
            _, divides = _divmod_fp(f, g, p)
            if divides:
                degrees.append(d)
                f = _quotient_fp(f, g, p)
                found = True
                break
        if not found:
            d += 1
    return sorted(degrees)


def count_reps(a: int, b: int, c: int, n: int) -> int:
    """#{(x, y) : ax^2 + bxy + cy^2 = n}, positive definite.

    Row by row: for fixed y, a x^2 + (b y) x + (c y^2 - n) = 0 must have a
    square discriminant and an integral root.
    """
    disc = b * b - 4 * a * c
    ybound = isqrt(4 * a * n // -disc) + 1
    total = 0
    for y in range(-ybound, ybound + 1):
        d = b * b * y * y - 4 * a * (c * y * y - n)
        if d < 0:
            continue
        s = isqrt(d)
        if s * s != d:
            continue
        roots = {num // (2 * a) for num in (-b * y + s, -b * y - s) if num % (2 * a) == 0}
        total += sum(1 for x in roots if a * x * x + b * x * y + c * y * y == n)
    return total


UNITS = {-4: 4, -3: 6, -8: 2, -7: 2, -11: 2}
PRINCIPAL = {-4: (1, 0, 1), -3: (1, 1, 1), -8: (1, 0, 2), -7: (1, 1, 2), -11: (1, 1, 3)}


def ideal_count_brute(disc: int, n: int) -> int:
    """Ideals of norm n in a class-number-one imaginary quadratic order: r(n) / #units."""
    return count_reps(*PRINCIPAL[disc], n) // UNITS[disc]


def gaussian_norm_product(l: int) -> int:
    """Product of the norms of all nonzero ideals of Z[i] with norm <= l.

    One generator a + bi per ideal: a > 0, b >= 0 picks a unique associate.
    """
    out = 1
    for a in range(1, l + 1):
        for b in range(0, l + 1):
            if 0 < a * a + b * b <= l:
                out *= a * a + b * b
    return out


def valuation(p: int, n: int) -> int:
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e
