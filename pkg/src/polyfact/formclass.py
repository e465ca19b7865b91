"""Binary forms, their discriminants, and their behaviour modulo primes.

A form ``F(x, y) = a_n x^n + a_{n-1} x^{n-1} y + ... + a_0 y^n`` is stored
with coefficients listed from ``a_n`` down to ``a_0``.  Its reduction modulo
a good prime factors into irreducible binary forms whose degrees are the
cycle type of Frobenius; only those degrees are ever computed.

Text grammar (shared with the CLI)::

    form    := coeffs | poly
    coeffs  := int ("," int)+              # a_n, ..., a_0
    poly    := term (("+" | "-") term)*
    term    := [int] ["*"] ["x" ["^" int]] ["*"] ["y" ["^" int]]

``"x^2+y^2"``, ``"1,0,1"`` and ``"x^2 + x*y + y^2"`` are all accepted.
"""

from __future__ import annotations

import enum
import math
import re
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product

from .arith import factorize, is_prime, primes_in, primes_up_to

__all__ = [
    "BinaryForm",
    "PSet",
    "PrimeStatus",
    "Unsupported",
    "make_form",
    "parse_form",
    "parse_poly",
    "format_poly",
    "prime_status",
    "cycle_type",
    "in_pset",
    "has_root_mod",
    "root_density",
    "residue_class_check",
    "factor_over_Z",
    "verify_factorization",
    "is_irreducible",
    "poly_discriminant",
]


class Unsupported(Exception):
    """Raised when an input falls outside what the library decides exactly."""


# ---------------------------------------------------------------------------
# integer polynomial helpers (coefficients high -> low)
# ---------------------------------------------------------------------------


def _det(m: list[list[int]]) -> int:
    """Bareiss fraction-free determinant."""
    m = [row[:] for row in m]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[-1][-1]


def _resultant(f: list[int], g: list[int]) -> int:
    m, k = len(f) - 1, len(g) - 1
    size = m + k
    rows = []
    for i in range(k):
        rows.append([0] * i + f + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + g + [0] * (size - k - 1 - i))
    return _det(rows)


def poly_discriminant(coeffs: list[int]) -> int:
    """Discriminant of a univariate integer polynomial (high -> low, lead != 0)."""
    n = len(coeffs) - 1
    if n < 1:
        raise ValueError("discriminant of a constant")
    if n == 1:
        return 1
    deriv = [c * (n - i) for i, c in enumerate(coeffs[:-1])]
    res = _resultant(list(coeffs), deriv)
    q, r = divmod(res, coeffs[0])
    assert r == 0
    return q if (n * (n - 1) // 2) % 2 == 0 else -q


def _zmul(f: list[int], g: list[int]) -> list[int]:
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return out


def _zdivexact(num: list[int], den: list[int]) -> list[int] | None:
    """Exact quotient num/den over Z, or None."""
    num = list(num)
    if len(den) > len(num):
        return None
    q = []
    for i in range(len(num) - len(den) + 1):
        c, r = divmod(num[i], den[0])
        if r:
            return None
        q.append(c)
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[len(q):]):
        return None
    return q


def _divisors(n: int) -> list[int]:
    n = abs(n)
    divs = [1]
    for p, e in factorize(n).factors.items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _eval(coeffs, x) -> int:
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# F_p[x] helpers (coefficients low -> high, trimmed)
# ---------------------------------------------------------------------------


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _pmod(f: list[int], g: list[int], p: int) -> list[int]:
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * inv % p
        if c:
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % p
    return _trim(f[:dg])


def _pdiv(f: list[int], g: list[int], p: int) -> list[int]:
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * inv % p
        q[i - dg] = c
        if c:
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % p
    return _trim(q)


def _pmulmod(a: list[int], b: list[int], f: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _pmod([c % p for c in out], f, p)


def _ppowx(e: int, f: list[int], p: int) -> list[int]:
    """x**e mod (f, p)."""
    result = [1]
    base = _pmod([0, 1], f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _psub(a: list[int], b: list[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return _trim([(x - y) % p for x, y in zip(a, b)])


def _monic_mod(coeffs_low: list[int], p: int) -> list[int]:
    f = _trim([c % p for c in coeffs_low])
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def _ddf_degrees(f: list[int], p: int) -> list[int]:
    """Degrees of the irreducible factors of a squarefree monic f over F_p."""
    parts: list[int] = []
    h = [0, 1]
    d = 0
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = _ppowx_from(h, p, f)
        g = _pgcd(f, _psub(h, [0, 1], p), p)
        if len(g) > 1:
            parts.extend([d] * ((len(g) - 1) // d))
            f = _pdiv(f, g, p)
            h = _pmod(h, f, p)
    if len(f) > 1:
        parts.append(len(f) - 1)
    return sorted(parts)


def _ppowx_from(h: list[int], p: int, f: list[int]) -> list[int]:
    """h**p mod (f, p)."""
    result = [1]
    base = _pmod(h, f, p)
    e = p
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous integer form with coefficients ``(a_n, ..., a_0)``."""

    coeffs: tuple
    content: int = field(init=False, compare=False)
    disc: int = field(init=False, compare=False)
    disc_mod: int = field(init=False, compare=False)

    def __post_init__(self):
        coeffs = tuple(int(c) for c in self.coeffs)
        if len(coeffs) < 2:
            raise ValueError("a binary form needs degree >= 1")
        if not any(coeffs):
            raise ValueError("zero form")
        object.__setattr__(self, "coeffs", coeffs)
        g = reduce(math.gcd, coeffs)
        object.__setattr__(self, "content", g)
        n = self.degree
        if coeffs[0]:
            d = poly_discriminant(list(coeffs))
        elif coeffs[-1]:
            d = poly_discriminant(list(reversed(coeffs)))
        else:
            d = 0
        object.__setattr__(self, "disc", d)
        q, r = divmod(d, g ** (2 * n - 2))
        assert r == 0, "content power must divide the discriminant"
        object.__setattr__(self, "disc_mod", q)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[0]

    @property
    def const(self) -> int:
        return self.coeffs[-1]

    def __call__(self, x: int, y: int) -> int:
        n = self.degree
        return sum(c * x ** (n - i) * y**i for i, c in enumerate(self.coeffs))

    def primitive(self) -> BinaryForm:
        return BinaryForm(tuple(c // self.content for c in self.coeffs))

    def scaled(self, k: int) -> BinaryForm:
        return BinaryForm(tuple(k * c for c in self.coeffs))

    def __str__(self):
        return _format(self.coeffs, homogeneous=True)


def make_form(coeffs) -> BinaryForm:
    return BinaryForm(tuple(coeffs))


_TERM = re.compile(r"^(\d*)\*?(?:(x)(?:\^(\d+))?)?\*?(?:(y)(?:\^(\d+))?)?$")


def _parse_terms(text: str) -> dict[tuple[int, int], int]:
    s = re.sub(r"\s+", "", text)
    if not s:
        raise ValueError("empty polynomial")
    terms: dict[tuple[int, int], int] = {}
    for sign, body in re.findall(r"([+-]?)([^+-]+)", s):
        m = _TERM.match(body)
        if not m or not body:
            raise ValueError(f"cannot parse term {body!r}")
        num, x, xe, y, ye = m.groups()
        if not (num or x or y):
            raise ValueError(f"cannot parse term {body!r}")
        c = int(num) if num else 1
        i = (int(xe) if xe else 1) if x else 0
        j = (int(ye) if ye else 1) if y else 0
        key = (i, j)
        terms[key] = terms.get(key, 0) + (-c if sign == "-" else c)
    if re.sub(r"([+-]?)([^+-]+)", "", s):
        raise ValueError(f"cannot parse {text!r}")
    return terms


def _coeff_list(text: str) -> list[int] | None:
    if "," not in text:
        return None
    return [int(t) for t in text.split(",")]


def parse_form(text: str) -> BinaryForm:
    """Parse ``"a_n,...,a_0"`` or a homogeneous polynomial in x and y."""
    coeffs = _coeff_list(text)
    if coeffs is not None:
        return BinaryForm(tuple(coeffs))
    terms = {k: v for k, v in _parse_terms(text).items() if v}
    if not terms:
        raise ValueError("zero form")
    degrees = {i + j for i, j in terms}
    if len(degrees) != 1:
        raise ValueError(f"{text!r} is not homogeneous")
    n = degrees.pop()
    return BinaryForm(tuple(terms.get((n - k, k), 0) for k in range(n + 1)))


def parse_poly(text: str) -> list[int]:
    """Parse a univariate polynomial in x; returns coefficients high -> low."""
    coeffs = _coeff_list(text)
    if coeffs is not None:
        while len(coeffs) > 1 and coeffs[0] == 0:
            coeffs.pop(0)
        return coeffs
    terms = _parse_terms(text)
    if any(j for _, j in terms):
        raise ValueError("univariate polynomial expected (variable x)")
    n = max(i for i, _ in terms)
    coeffs = [terms.get((n - k, 0), 0) for k in range(n + 1)]
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs.pop(0)
    return coeffs


def _monomial(c: int, i: int, j: int) -> str:
    body = ""
    if i:
        body += "x" + (f"^{i}" if i > 1 else "")
    if j:
        body += "y" + (f"^{j}" if j > 1 else "")
    if not body:
        return str(abs(c))
    return (str(abs(c)) if abs(c) != 1 else "") + body


def _format(coeffs, homogeneous: bool) -> str:
    n = len(coeffs) - 1
    out = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        term = _monomial(c, n - k, k if homogeneous else 0)
        if not out:
            out.append(("-" if c < 0 else "") + term)
        else:
            out.append(("- " if c < 0 else "+ ") + term)
    return " ".join(out) or "0"


def format_poly(coeffs) -> str:
    return _format(list(coeffs), homogeneous=False)


# ---------------------------------------------------------------------------
# behaviour at a prime
# ---------------------------------------------------------------------------


class PSet(enum.Enum):
    IN = "InPSet"
    NOT_IN = "NotInPSet"
    BAD = "Bad"


@dataclass(frozen=True)
class PrimeStatus:
    prime: int
    bad: bool
    divides_disc: bool
    divides_lead: bool
    divides_const: bool
    cycle: tuple | None = None


def _is_bad(F: BinaryForm, p: int) -> bool:
    # complement of: p coprime to lead*disc_mod, or p coprime to const*disc_mod
    return F.disc_mod % p == 0 or (F.lead % p == 0 and F.const % p == 0)


def prime_status(F: BinaryForm, p: int) -> PrimeStatus:
    bad = _is_bad(F, p)
    return PrimeStatus(
        prime=p,
        bad=bad,
        divides_disc=F.disc_mod % p == 0,
        divides_lead=F.lead % p == 0,
        divides_const=F.const % p == 0,
        cycle=None if bad else cycle_type(F, p),
    )


def _dehomogenize(F: BinaryForm, p: int) -> list[int]:
    """F(x,1) mod p (low -> high), or F(1,y) when p divides the lead."""
    if F.lead % p:
        return _monic_mod(list(reversed(F.coeffs)), p)
    return _monic_mod(list(F.coeffs), p)


@lru_cache(maxsize=1 << 16)
def cycle_type(F: BinaryForm, p: int) -> tuple:
    """Ascending degrees of the irreducible factors of F mod a good prime p."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if _is_bad(F, p):
        why = [f"p | disc_mod={F.disc_mod}"] if F.disc_mod % p == 0 else []
        if F.lead % p == 0 and F.const % p == 0:
            why.append("p divides both a_n and a_0")
        raise ValueError(f"{p} is a bad prime for {F}: " + ", ".join(why))
    return tuple(_ddf_degrees(_dehomogenize(F, p), p))


def has_root_mod(coeffs_low: list[int], p: int) -> bool:
    """Whether a polynomial (low -> high, nonzero mod p) has a root in F_p."""
    f = _monic_mod(coeffs_low, p)
    if len(f) == 1:
        return False
    if f[0] == 0:
        return True
    h = _ppowx(p, f, p)
    return len(_pgcd(f, _psub(h, [0, 1], p), p)) > 1


@lru_cache(maxsize=1 << 18)
def in_pset(F: BinaryForm, p: int) -> PSet:
    """Whether p lies in the prime set where F has no nontrivial zero mod p."""
    if _is_bad(F, p):
        return PSet.BAD
    if F.lead % p == 0:
        return PSet.NOT_IN  # zero at the point (1 : 0)
    return PSet.NOT_IN if has_root_mod(list(reversed(F.coeffs)), p) else PSet.IN


def _count_block(F: BinaryForm, primes: list[int]) -> tuple[int, int]:
    good = rooted = 0
    for p in primes:
        s = in_pset(F, p)
        if s is PSet.BAD:
            continue
        good += 1
        rooted += s is PSet.NOT_IN
    return rooted, good


def root_density(F: BinaryForm, prime_bound: int, workers: int = 1) -> tuple[Fraction, int]:
    """Fraction of good primes <= prime_bound at which F has a zero mod p."""
    if prime_bound < 100:
        raise ValueError("prime_bound must be at least 100")
    if F.degree == 1:
        ps = primes_up_to(prime_bound).tolist()
        good = sum(not _is_bad(F, p) for p in ps)
        return Fraction(1), good
    ps = primes_up_to(prime_bound).tolist()
    if workers > 1:
        chunk = -(-len(ps) // (4 * workers))
        blocks = [ps[i : i + chunk] for i in range(0, len(ps), chunk)]
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_count_block, [F] * len(blocks), blocks))
    else:
        results = [_count_block(F, ps)]
    rooted = sum(r for r, _ in results)
    good = sum(g for _, g in results)
    return Fraction(rooted, good), good



def residue_class_check(F: BinaryForm, residue: tuple[int, int], prime_bound: int) -> dict:
    """Sample the primes p = a (mod b) up to prime_bound against the P-set of F.

    For a product of forms the P-set is the intersection over the factors, so
    one call on the product covers every factor.  This is evidence only: an
    empty ``outside`` list does not prove containment.
    """
    ps = primes_in(2, prime_bound, residue)
    outside, bad = [], []
    for p in ps:
        s = in_pset(F, p)
        if s is PSet.BAD:
            bad.append(p)
        elif s is PSet.NOT_IN:
            outside.append(p)
    return {"residue": tuple(residue), "checked": len(ps), "outside": outside, "bad": bad}

# ---------------------------------------------------------------------------
# factorization over Z (degree <= 4)
# ---------------------------------------------------------------------------


def _normalize(coeffs: list[int]) -> tuple:
    g = reduce(math.gcd, coeffs)
    lead = next(c for c in coeffs if c)
    if lead < 0:
        g = -g
    return tuple(c // g for c in coeffs)


def _rational_root_factor(poly: list[int]) -> list[int] | None:
    """A linear factor t*x - s*y of poly (high -> low, both ends nonzero)."""
    for t in _divisors(poly[0]):
        for s0 in _divisors(poly[-1]):
            for s in (s0, -s0):
                if math.gcd(s, t) != 1:
                    continue
                # F(s/t, 1) == 0  <=>  sum c_i s^i t^(n-i) == 0
                n = len(poly) - 1
                if sum(c * s ** (n - k) * t**k for k, c in enumerate(poly)) == 0:
                    return [t, -s]
    return None


def _quadratic_split(poly: list[int]) -> list[int] | None:
    """A quadratic factor of a quartic without rational roots (Kronecker)."""
    v0, v1, vm = poly[-1], _eval(poly, 1), _eval(poly, -1)
    for w, d1, d2 in product(_divisors(v0), _divisors(v1), _divisors(vm)):
        for s1, s2 in product((1, -1), repeat=2):
            q1, q2 = s1 * d1, s2 * d2
            if (q1 + q2) % 2:
                continue
            u = (q1 + q2) // 2 - w
            v = (q1 - q2) // 2
            if u == 0 or poly[0] % u:
                continue
            if _zdivexact(poly, [u, v, w]) is not None:
                return [u, v, w]
    return None


def _factor_primitive(poly: list[int]) -> list[tuple]:
    out: list[tuple] = []
    while len(poly) > 1 and poly[0] == 0:
        poly = poly[1:]
        out.append((0, 1))  # y
    while len(poly) > 1 and poly[-1] == 0:
        poly = poly[:-1]
        out.append((1, 0))  # x
    while len(poly) > 2:
        lin = _rational_root_factor(poly)
        if lin is None:
            break
        out.append(_normalize(lin))
        poly = _zdivexact(poly, lin)
    if len(poly) == 5:
        quad = _quadratic_split(poly)
        if quad is not None:
            out.append(_normalize(quad))
            poly = _zdivexact(poly, quad)
    if len(poly) > 1:
        out.append(_normalize(poly))
    return out


def factor_over_Z(F: BinaryForm, factors=None) -> list[tuple[BinaryForm, int]]:
    """Irreducible factors of F with multiplicities; content and sign dropped.

    Degree > 4 needs a user-supplied factorization, which is then verified.
    """
    if factors is not None:
        return verify_factorization(F, factors)
    if F.degree > 4:
        raise Unsupported("factorization over Z is implemented for degree <= 4 only")
    prim = [c // F.content for c in F.coeffs]
    counts = Counter(_factor_primitive(prim))
    items = sorted(counts.items(), key=lambda kv: (len(kv[0]), kv[0]))
    return [(BinaryForm(c), m) for c, m in items]


def _certify_irreducible_mod_p(F: BinaryForm, tries: int = 60) -> bool:
    if F.degree == 1:
        return True
    for p in primes_up_to(2000).tolist()[:tries]:
        if not _is_bad(F, p) and cycle_type(F, p) == (F.degree,):
            return True
    return False


def is_irreducible(F: BinaryForm) -> bool:
    """Irreducibility over Q of the primitive part of F."""
    if _certify_irreducible_mod_p(F):
        return True
    if F.degree > 4:
        raise Unsupported("cannot decide irreducibility above degree 4")
    facs = factor_over_Z(F)
    return len(facs) == 1 and facs[0][1] == 1


def verify_factorization(F: BinaryForm, factors) -> list[tuple[BinaryForm, int]]:
    """Check a supplied factorization: product up to a constant, irreducible parts."""
    factors = [(f if isinstance(f, BinaryForm) else make_form(f), int(m)) for f, m in factors]
    prod = [1]
    for f, m in factors:
        for _ in range(m):
            prod = _zmul(prod, list(f.coeffs))
    if len(prod) != len(F.coeffs):
        raise ValueError("degrees of the supplied factors do not add up")
    k = next(Fraction(a, b) for a, b in zip(F.coeffs, prod) if b)
    if k.denominator != 1 or any(a != k * b for a, b in zip(F.coeffs, prod)):
        raise ValueError("supplied factors do not multiply to the form")
    for f, _ in factors:
        if not _certify_irreducible_mod_p(f):
            if f.degree > 4:
                raise Unsupported(f"could not certify {f} irreducible modulo small primes")
            if not is_irreducible(f):
                raise ValueError(f"supplied factor {f} is reducible")
    return factors
