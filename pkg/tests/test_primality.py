import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import eratosthenes, is_prime_trial
from weirdhunt.errors import WindowTooLarge
from weirdhunt.primality import (
    Certainty,
    PrimeWindow,
    is_prime,
    next_prime_at_most,
    primes_descending,
    primes_in,
    test_primality as primality,
)


@pytest.mark.parametrize("n,expected", [(523, True), (1, False), (3077507, True), (0, False), (2, True)])
def test_examples(n, expected):
    assert is_prime(n) is expected


def test_agrees_with_sieve_up_to_1e7():
    flags = eratosthenes(10**7)
    assert [n for n in range(10**7 + 1) if is_prime(n)] == [n for n in range(10**7 + 1) if flags[n]]


def test_strong_pseudoprimes_rejected():
    # strong pseudoprimes to several small bases
    for n in (2047, 3215031751, 3825123056546413051, 318665857834031151167461):
        assert not is_prime(n)


def test_certainty():
    assert primality(2**61 - 1) == (True, Certainty.EXACT)
    big = 2**89 - 1  # Mersenne prime
    assert primality(big) == (True, Certainty.PROBABLE)
    assert primality(big * 3).is_prime is False
    assert primality((2**89 - 1) * (2**61 - 1)).is_prime is False


def test_carmichael_beyond_64_bits():
    # Chernick form (6k+1)(12k+1)(18k+1) with all three factors prime.
    k = 10**7 + 1
    while not all(is_prime(a * k + 1) for a in (6, 12, 18)):
        k += 1
    assert not is_prime((6 * k + 1) * (12 * k + 1) * (18 * k + 1))


@pytest.mark.parametrize(
    "low,high,expected", [(83, 90, [83, 89]), (24, 28, []), (11320, 11322, [11321]), (0, 10, [2, 3, 5, 7])]
)
def test_primes_in_examples(low, high, expected):
    assert list(primes_in(PrimeWindow(low, high))) == expected


@given(st.integers(0, 10**12), st.integers(0, 10**4))
def test_primes_in_matches_filter(low, width):
    w = PrimeWindow(low, low + width)
    assert list(primes_in(w)) == [n for n in range(low, low + width + 1) if is_prime(n)]


def test_primes_in_stepping_path_beyond_64_bits():
    low = 2**64 - 200
    got = list(primes_in(PrimeWindow(low, low + 400)))
    assert got == [n for n in range(low, low + 401) if is_prime(n)]
    assert got


def test_window_cap():
    with pytest.raises(WindowTooLarge):
        primes_in(PrimeWindow(0, 10**9 + 1))


def test_window_parse():
    assert PrimeWindow.parse("80:600") == PrimeWindow(80, 600)


class TestNextPrimeAtMost:
    def test_examples(self):
        assert next_prime_at_most(10) == 7
        assert next_prime_at_most(2) == 2
        assert not is_prime_trial(3077508) and not is_prime_trial(3077509)
        assert next_prime_at_most(3077509) == 3077507

    @given(st.integers(2, 10**9))
    def test_property(self, x):
        p = next_prime_at_most(x)
        assert p <= x and is_prime_trial(p)
        assert not any(is_prime_trial(q) for q in range(p + 1, x + 1))


def test_primes_descending():
    assert list(primes_descending(20, 2)) == [19, 17, 13, 11, 7, 5, 3, 2]
    assert list(primes_descending(2, 2)) == [2]
    assert list(primes_descending(16, 14)) == []


def test_random_large_agree_with_trial():
    rng = random.Random(3)
    for _ in range(2000):
        n = rng.randrange(10**11, 10**12)
        assert is_prime(n) == is_prime_trial(n)
