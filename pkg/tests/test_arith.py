from math import factorial, prod

import pytest
from hypothesis import given, strategies as st

from polyfact import arith
from polyfact.arith import (
    Effort,
    PrimeFactorization,
    factorize,
    integer_nth_root,
    is_prime,
    kronecker,
    p_valuation,
    primes_in,
    primes_up_to,
    radical,
)

from oracles import naive_factor, naive_primes


def test_factorize_examples():
    assert factorize(360).factors == {2: 3, 3: 2, 5: 1}
    neg = factorize(-1)
    assert neg.factors == {} and neg.sign == -1
    assert factorize(5040).factors == {2: 4, 3: 2, 5: 1, 7: 1}


def test_factorize_zero_rejected():
    with pytest.raises(ValueError):
        factorize(0)


def test_factorize_large_semiprime():
    p, q = 1_000_000_007, 998_244_353
    f = factorize(p * q * 12)
    assert f.complete and f.factors == {2: 2, 3: 1, q: 1, p: 1}


def test_factorize_budget_exhausted_reports_residual():
    p, q = 1_000_000_007, 1_000_000_009
    f = factorize(p * q, Effort(trial_bound=100, rho_iterations=10))
    assert f.value() == p * q
    if not f.complete:
        assert f.residual == p * q


@given(st.integers(2, 10**9), st.integers(2, 10**9))
def test_factorize_multiplicative(m, n):
    fm, fn = factorize(m), factorize(n)
    assert factorize(m * n).factors == (fm * fn).factors


@given(st.integers(1, 10**6))
def test_factorize_matches_trial_division(n):
    assert factorize(n).factors == naive_factor(n)


def test_radical_examples():
    assert radical(PrimeFactorization({2: 3, 3: 2, 5: 1})) == 30
    assert radical(factorize(1)) == 1
    assert radical(factorize(5040)) == 210


def test_p_valuation_examples():
    f = PrimeFactorization({2: 3, 3: 2})
    assert p_valuation(2, f) == 3
    assert p_valuation(7, f) == 0
    assert p_valuation(2, factorize(factorial(10))) == 8
    with pytest.raises(ValueError):
        p_valuation(4, f)


@pytest.mark.parametrize("l", range(2, 201, 11))
def test_valuation_of_factorial_is_legendre(l):
    f = factorize(factorial(l))
    for p in naive_primes(l):
        legendre = sum(l // p**i for i in range(1, 10) if p**i <= l)
        assert p_valuation(p, f) == legendre


def test_integer_nth_root_examples():
    assert integer_nth_root(25, 2) == (5, True)
    assert integer_nth_root(26, 2) == (5, False)
    assert integer_nth_root(5041, 2) == (71, True)
    with pytest.raises(ValueError):
        integer_nth_root(-1, 2)


@given(st.integers(0, 10**60), st.integers(1, 9))
def test_integer_nth_root_brackets(n, k):
    r, exact = integer_nth_root(n, k)
    assert r**k <= n < (r + 1) ** k
    assert exact == (r**k == n)


def test_kronecker_examples():
    assert kronecker(-4, 5) == 1
    assert kronecker(-4, 3) == -1
    assert kronecker(-4, 2) == 0


def test_kronecker_exhaustive_against_squares():
    for p in naive_primes(200):
        squares = {x * x % p for x in range(p)}
        for d in range(-50, 51):
            if d % p == 0:
                assert kronecker(d, p) == 0
            elif p == 2:
                if d % 4 in (0, 1):
                    assert kronecker(d, 2) == (1 if d % 8 == 1 else -1)
            else:
                assert kronecker(d, p) == (1 if d % p in squares else -1)


def test_is_prime_against_sieve():
    ps = set(naive_primes(5000))
    assert all(is_prime(n) == (n in ps) for n in range(-5, 5001))
    assert is_prime(2**127 - 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


def test_primes_in_examples():
    assert primes_in(10, 30) == [11, 13, 17, 19, 23, 29]
    assert primes_in(10, 30, (3, 4)) == [11, 19, 23]
    assert primes_in(1, 10, (1, 4)) == [5]
    with pytest.raises(ValueError):
        primes_in(1, 100, (2, 4))


def test_segmented_sieve_matches_naive():
    assert primes_up_to(3000).tolist() == naive_primes(3000)
    lo, hi = 10**7, 10**7 + 2000
    assert primes_in(lo, hi) == [n for n in range(lo, hi + 1) if is_prime(n)]


def test_digit_bound_enforced(monkeypatch):
    monkeypatch.setattr(arith.LIMITS, "digit_bound", 50)
    with pytest.raises(OverflowError):
        arith.check_digits(10**60)
    arith.check_digits(10**40)


def test_sieve_budget_enforced(monkeypatch):
    monkeypatch.setattr(arith.LIMITS, "sieve_budget", 1000)
    with pytest.raises(MemoryError):
        primes_in(10**9, 10**9 + 10**6)


def test_factorization_value_round_trip():
    n = prod([2**5, 3**3, 101, 65537])
    assert factorize(-n).value() == -n
