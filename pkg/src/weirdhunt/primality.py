"""Primality testing and prime enumeration.

Below 2**64 answers are exact (Miller-Rabin with a known deterministic
witness set).  Above that a Baillie-PSW test is combined with 64 extra
Miller-Rabin rounds drawn from a fixed-seed generator, so a composite slips
through with probability below 2**-128 and results are reproducible.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from math import isqrt
from typing import Iterator, NamedTuple

from .errors import InvalidInput, WindowTooLarge

EXACT_LIMIT = 1 << 64
DEFAULT_WINDOW_CAP = 10**9

# Deterministic for every n < 3.1 * 10**23 (Sorenson & Webster).
_WITNESSES_64 = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_EXTRA_ROUNDS = 64
_RNG_SEED = 0x5EED_0F_3E1D

# Largest sieve base we are willing to build for segmented sieving.
_MAX_SIEVE_BASE = 1 << 26


class Certainty(str, enum.Enum):
    EXACT = "exact"
    PROBABLE = "probable"


class PrimalityResult(NamedTuple):
    is_prime: bool
    certainty: Certainty


def _small_sieve(limit: int) -> bytearray:
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytes(len(range(p * p, limit + 1, p)))
    return flags


_SMALL_LIMIT = 1 << 16
_SMALL_FLAGS = _small_sieve(_SMALL_LIMIT)
_SMALL_PRIMES = tuple(i for i in range(_SMALL_LIMIT + 1) if _SMALL_FLAGS[i])
_TRIAL_PRIMES = _SMALL_PRIMES[:168]  # primes below 1000


def _strong_probable_prime(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    a %= n
    result = 1
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


def _strong_lucas_probable_prime(n: int) -> bool:
    """Strong Lucas test with Selfridge parameters; n odd, not a square."""
    D = 5
    while True:
        j = _jacobi(D, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -D - 2 if D > 0 else -D + 2
    P, Q = 1, (1 - D) // 4

    d, s = n + 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1

    inv2 = (n + 1) // 2
    U, V, Qk = 1, P, Q % n
    for bit in bin(d)[3:]:
        U, V = U * V % n, (V * V - 2 * Qk) % n
        Qk = Qk * Qk % n
        if bit == "1":
            U, V = (P * U + V) * inv2 % n, (D * U + P * V) * inv2 % n
            Qk = Qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * Qk) % n
        if V == 0:
            return True
        Qk = Qk * Qk % n
    return False


def test_primality(n: int) -> PrimalityResult:
    """Return whether n is prime together with how sure we are."""
    if n < 2:
        return PrimalityResult(False, Certainty.EXACT)
    if n <= _SMALL_LIMIT:
        return PrimalityResult(bool(_SMALL_FLAGS[n]), Certainty.EXACT)
    for p in _TRIAL_PRIMES:
        if n % p == 0:
            return PrimalityResult(False, Certainty.EXACT)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < EXACT_LIMIT:
        ok = all(_strong_probable_prime(n, a, d, s) for a in _WITNESSES_64)
        return PrimalityResult(ok, Certainty.EXACT)

    if not _strong_probable_prime(n, 2, d, s):
        return PrimalityResult(False, Certainty.EXACT)
    r = isqrt(n)
    if r * r == n:
        return PrimalityResult(False, Certainty.EXACT)
    if not _strong_lucas_probable_prime(n):
        return PrimalityResult(False, Certainty.EXACT)
    rng = random.Random(_RNG_SEED ^ n.bit_length())
    for _ in range(_EXTRA_ROUNDS):
        if not _strong_probable_prime(n, rng.randrange(2, n - 1), d, s):
            return PrimalityResult(False, Certainty.EXACT)
    return PrimalityResult(True, Certainty.PROBABLE)


# pytest would otherwise collect the public name above as a test function.
test_primality.__test__ = False  # type: ignore[attr-defined]


def is_prime(n: int) -> bool:
    return test_primality(n).is_prime


def certainty_of(primes) -> Certainty:
    """Weakest certainty over a collection of (assumed prime) numbers."""
    if any(p >= EXACT_LIMIT for p in primes):
        return Certainty.PROBABLE
    return Certainty.EXACT


@dataclass(frozen=True)
class PrimeWindow:
    """Inclusive interval [low, high] of candidate primes."""

    low: int
    high: int

    def __post_init__(self) -> None:
        if self.low < 0 or self.low > self.high:
            raise InvalidInput(f"invalid prime window [{self.low}, {self.high}]")

    @classmethod
    def parse(cls, text: str) -> "PrimeWindow":
        lo, sep, hi = text.partition(":")
        if not sep:
            raise InvalidInput(f"window must look like LO:HI, got {text!r}")
        try:
            return cls(int(lo), int(hi))
        except ValueError as exc:
            raise InvalidInput(f"window must look like LO:HI, got {text!r}") from exc

    def __str__(self) -> str:
        return f"{self.low}:{self.high}"


def _segmented(low: int, high: int, segment: int = 1 << 18) -> Iterator[int]:
    base = [p for p in _iter_base_primes(isqrt(high))]
    start = max(low, 2)
    while start <= high:
        stop = min(start + segment - 1, high)
        flags = bytearray(b"\x01") * (stop - start + 1)
        for p in base:
            pp = p * p
            if pp > stop:
                break
            first = max(pp, -(-start // p) * p)
            if first > stop:
                continue
            flags[first - start :: p] = bytes(len(range(first, stop + 1, p)))
        for i, flag in enumerate(flags):
            if flag:
                yield start + i
        start = stop + 1


def _iter_base_primes(limit: int) -> Iterator[int]:
    if limit <= _SMALL_LIMIT:
        for p in _SMALL_PRIMES:
            if p > limit:
                return
            yield p
    else:
        flags = _small_sieve(limit)
        yield from (i for i in range(limit + 1) if flags[i])


def primes_in(window: PrimeWindow, cap: int = DEFAULT_WINDOW_CAP) -> Iterator[int]:
    """Yield all primes in the window in ascending order."""
    if window.high - window.low > cap:
        raise WindowTooLarge(
            f"window width {window.high - window.low} exceeds cap {cap}"
        )
    if window.high < 2:
        return iter(())
    if window.high < EXACT_LIMIT and isqrt(window.high) <= _MAX_SIEVE_BASE:
        return _segmented(window.low, window.high)
    return _stepping(window.low, window.high)


def _stepping(low: int, high: int) -> Iterator[int]:
    n = max(low, 2)
    if n == 2:
        yield 2
        n = 3
    if n % 2 == 0:
        n += 1
    while n <= high:
        if is_prime(n):
            yield n
        n += 2


def next_prime_at_most(x: int) -> int:
    """Largest prime not exceeding x."""
    if x < 2:
        raise InvalidInput(f"no prime is <= {x}")
    if x == 2:
        return 2
    n = x if x % 2 else x - 1
    while n > 2:
        if is_prime(n):
            return n
        n -= 2
    return 2


def primes_descending(start: int, stop: int) -> Iterator[int]:
    """Primes p with stop <= p <= start, largest first."""
    n = start if start % 2 else start - 1
    while n >= max(stop, 3):
        if is_prime(n):
            yield n
        n -= 2
    if stop <= 2 <= start:
        yield 2
