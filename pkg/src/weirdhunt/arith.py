"""Exact arithmetic over factored naturals.

Every number the search builds already knows its factorization, so the
canonical currency here is :class:`Factored`: a value plus its ascending
prime-power list.  Integers are accepted wherever a ``Factored`` is expected
and are factored on the way in (trial division, then Pollard rho).
"""

from __future__ import annotations

import enum
import random
import re
from dataclasses import dataclass
from math import gcd, isqrt, prod
from typing import Iterable, Union

from .errors import CapExceeded, FactoringBudgetExceeded, InvalidInput, ParseError
from .primality import is_prime

DEFAULT_DIVISOR_CAP = 1 << 24

_TRIAL_BOUND = 10_000
_RHO_ITERATIONS = 1 << 22


@dataclass(frozen=True)
class Factored:
    """A natural number together with its prime factorization."""

    value: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.value < 1:
            raise InvalidInput(f"Factored needs a positive value, got {self.value}")
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise InvalidInput(f"bad factor list {self.factors!r}")
            last = p
        if prod(p**e for p, e in self.factors) != self.value:
            raise InvalidInput(f"factors {self.factors!r} do not multiply to {self.value}")

    @classmethod
    def from_factors(cls, factors: Iterable[tuple[int, int]], *, check_primes: bool = True) -> "Factored":
        merged: dict[int, int] = {}
        for p, e in factors:
            if e:
                merged[p] = merged.get(p, 0) + e
        items = tuple(sorted(merged.items()))
        if check_primes:
            for p, _ in items:
                if not is_prime(p):
                    raise InvalidInput(f"{p} is not prime")
        return cls(prod(p**e for p, e in items), items)

    @classmethod
    def from_int(cls, n: int) -> "Factored":
        if n < 1:
            raise InvalidInput(f"cannot factor {n}")
        return cls(n, tuple(sorted(factorint(n).items())))

    @classmethod
    def parse(cls, text: str) -> "Factored":
        return parse_factored(text)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def num_divisors(self) -> int:
        return prod(e + 1 for _, e in self.factors)

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return format_factored(self)


FactoredLike = Union[Factored, int]


def as_factored(n: FactoredLike) -> Factored:
    if isinstance(n, Factored):
        return n
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidInput(f"expected int or Factored, got {type(n).__name__}")
    return Factored.from_int(n)


# -- text format ------------------------------------------------------------

_TERM = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_factored(text: str) -> Factored:
    """Read ``2^4*83*89`` style text (``·`` also accepted) or a bare decimal."""
    text = text.strip()
    if not text:
        raise ParseError("empty input")
    if text.isdigit():
        value = int(text)
        if value < 1:
            raise ParseError("value must be positive")
        return Factored.from_int(value)
    pairs = []
    for term in re.split(r"[*·×]", text):
        match = _TERM.match(term)
        if not match:
            raise ParseError(f"cannot parse factor {term!r} in {text!r}")
        base, exp = int(match.group(1)), int(match.group(2) or 1)
        if base < 2 or exp < 1:
            raise ParseError(f"bad factor {term.strip()!r}")
        pairs.append((base, exp))
    # Composite bases are tolerated and re-factored.
    expanded: list[tuple[int, int]] = []
    for base, exp in pairs:
        if is_prime(base):
            expanded.append((base, exp))
        else:
            expanded.extend((p, e * exp) for p, e in factorint(base).items())
    return Factored.from_factors(expanded, check_primes=False)


def format_factored(n: Factored) -> str:
    if not n.factors:
        return "1"
    return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in n.factors)


# -- factoring ---------------------------------------------------------------

def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    for _ in range(64):
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        spent = 0
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
            if spent > _RHO_ITERATIONS:
                break
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = gcd(abs(x - ys), n)
        if 1 < g < n:
            return g
    raise FactoringBudgetExceeded(f"Pollard rho failed to split {n}")


def factorint(n: int) -> dict[int, int]:
    """Prime factorization of n as {prime: exponent}."""
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f, step = 7, 4
    # wheel mod 6: 7, 11, 13, 17, ...
    while f <= _TRIAL_BOUND and f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += step
        step = 6 - step
    if n == 1:
        return out
    rng = random.Random(n)
    stack = [n]
    while stack:
        c = stack.pop()
        if c == 1:
            continue
        if is_prime(c):
            out[c] = out.get(c, 0) + 1
            continue
        r = isqrt(c)
        if r * r == c:
            stack += [r, r]
            continue
        g = _pollard_brent(c, rng)
        stack += [g, c // g]
    return dict(sorted(out.items()))


# -- arithmetic ----------------------------------------------------------------

def multiply(a: FactoredLike, b: FactoredLike) -> Factored:
    a, b = as_factored(a), as_factored(b)
    exps = dict(a.factors)
    for p, e in b.factors:
        exps[p] = exps.get(p, 0) + e
    items = tuple(sorted(exps.items()))
    return Factored(a.value * b.value, items)


def sigma(n: FactoredLike) -> int:
    """Sum of all positive divisors of n."""
    n = as_factored(n)
    return prod((p ** (e + 1) - 1) // (p - 1) for p, e in n.factors)


def sigma_prime_power(p: int, e: int) -> int:
    return (p ** (e + 1) - 1) // (p - 1)


class AbundanceClass(str, enum.Enum):
    ABUNDANT = "abundant"
    PERFECT = "perfect"
    DEFICIENT = "deficient"


@dataclass(frozen=True)
class AbundanceReport:
    sigma: int
    delta: int

    @property
    def deficience(self) -> int:
        return -self.delta

    @property
    def cls(self) -> AbundanceClass:
        if self.delta > 0:
            return AbundanceClass.ABUNDANT
        if self.delta < 0:
            return AbundanceClass.DEFICIENT
        return AbundanceClass.PERFECT

    @property
    def abundant(self) -> bool:
        return self.delta > 0

    @property
    def deficient(self) -> bool:
        return self.delta < 0


def abundance_report(n: FactoredLike) -> AbundanceReport:
    n = as_factored(n)
    s = sigma(n)
    return AbundanceReport(sigma=s, delta=s - 2 * n.value)


def abundance(n: FactoredLike) -> int:
    n = as_factored(n)
    return sigma(n) - 2 * n.value


def deficience(n: FactoredLike) -> int:
    return -abundance(n)


def divisors_up_to(n: FactoredLike, bound: int, cap: int = DEFAULT_DIVISOR_CAP) -> list[int]:
    """Divisors of n not exceeding bound, ascending.

    Walks exponent vectors depth-first and cuts a branch as soon as the
    running product passes ``bound``, so only the divisors actually returned
    are ever visited (plus one overshoot per branch).
    """
    n = as_factored(n)
    if bound < 1:
        return []
    factors = n.factors
    out: list[int] = []

    def walk(i: int, acc: int) -> None:
        if i == len(factors):
            out.append(acc)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} divisors of {n.value} are <= {bound}")
            return
        p, e = factors[i]
        for _ in range(e + 1):
            walk(i + 1, acc)
            acc *= p
            if acc > bound:
                break

    walk(0, 1)
    out.sort()
    return out


def all_divisors(n: FactoredLike, cap: int = DEFAULT_DIVISOR_CAP) -> list[int]:
    n = as_factored(n)
    if n.num_divisors > cap:
        raise CapExceeded(f"{n.value} has {n.num_divisors} divisors, cap is {cap}")
    return divisors_up_to(n, n.value, cap)


def factored_range(limit: int):
    """Yield Factored(n) for n = 1..limit using a smallest-prime-factor sieve."""
    spf = list(range(limit + 1))
    for p in range(2, isqrt(limit) + 1):
        if spf[p] == p:
            for q in range(p * p, limit + 1, p):
                if spf[q] == q:
                    spf[q] = p
    for n in range(1, limit + 1):
        factors = []
        x = n
        while x > 1:
            p, e = spf[x], 0
            while x % p == 0:
                x //= p
                e += 1
            factors.append((p, e))
        yield Factored(n, tuple(factors))
