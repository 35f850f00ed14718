"""Sufficient conditions for primitive weirdness of m * p1 * ... * pk.

Given a deficient m and primes sigma(m) + 1 < p1 < ... < pk, no integer in

    U = union over j = 0..h* of the open intervals (j*pk + sigma(m), (j+1)*p1),
    h* = floor((p1 - sigma(m)) / (pk - p1)),

is a sum of distinct divisors of m * p1 * ... * pk.  ``gate_t1`` applies
this to an abundant product directly; ``gate_t2`` starts from a deficient
product and appends one large closing prime that tips it into abundance.

All comparisons are exact (integers or ``Fraction``).  Gates never raise on
bad input: they report ``input_invalid`` instead.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Optional, Sequence

from .arith import Factored, FactoredLike, as_factored, sigma, sigma_prime_power
from .errors import InvalidInput
from .primality import is_prime


class FailureReason(str, enum.Enum):
    NOT_ABUNDANT = "not_abundant"
    DELTA_NOT_IN_U = "delta_not_in_U"
    P_NOT_GT_DELTA = "p_not_gt_delta"
    TILDE_NOT_DEFICIENT = "tilde_not_deficient"
    P_BOUND_VIOLATED = "p_bound_violated"
    INPUT_INVALID = "input_invalid"


@dataclass(frozen=True)
class GateInput:
    m: Factored
    primes: tuple[int, ...]
    closing_prime: Optional[int] = None

    @classmethod
    def make(cls, m: FactoredLike, primes: Sequence[int], closing_prime: Optional[int] = None) -> "GateInput":
        return cls(as_factored(m), tuple(primes), closing_prime)

    def problems(self) -> list[str]:
        """Violated invariants, empty when the input is well formed."""
        out = []
        m, ps = self.m, self.primes
        sm = sigma(m)
        if m.value <= 1:
            out.append("m must exceed 1")
        elif sm >= 2 * m.value:
            out.append(f"m={m.value} is not deficient")
        if len(ps) < 2:
            out.append("need at least two primes")
        if any(b <= a for a, b in zip(ps, ps[1:])):
            out.append("primes must be strictly increasing")
        if ps and ps[0] < sm + 2:
            out.append(f"p1={ps[0]} must exceed sigma(m)+1={sm + 1}")
        bad = [p for p in ps if not is_prime(p)]
        if bad:
            out.append(f"not prime: {bad}")
        q = self.closing_prime
        if q is not None:
            if ps and q <= ps[-1]:
                out.append(f"closing prime {q} must exceed pk={ps[-1]}")
            if not is_prime(q):
                out.append(f"closing prime {q} is not prime")
        return out

    @property
    def tilde(self) -> Factored:
        """m * p1 * ... * pk with its factorization."""
        return Factored(self.m.value * prod(self.primes), self.m.factors + tuple((p, 1) for p in self.primes))


@dataclass(frozen=True)
class UInterval:
    """Open interval (lower, upper) of U with index j."""

    j: int
    lower: int
    upper: int


@dataclass(frozen=True)
class GateVerdict:
    passed: bool
    h_star: int
    delta: int
    u_interval: Optional[UInterval] = None
    failure_reason: Optional[FailureReason] = None
    detail: str = ""
    # Closing-prime diagnostics, filled only by gate_t2.
    p_ceiling: Optional[Fraction] = None
    p_lower_bound: Optional[Fraction] = None

    @property
    def u_j(self) -> Optional[int]:
        return self.u_interval.j if self.u_interval else None


def h_star(m: FactoredLike, p1: int, pk: int) -> int:
    if pk <= p1:
        raise InvalidInput(f"need p1 < pk, got {p1}, {pk}")
    return (p1 - sigma(as_factored(m))) // (pk - p1)


def _u_lookup(sm: int, p1: int, pk: int, x: int) -> Optional[UInterval]:
    hs = (p1 - sm) // (pk - p1)
    if hs < 0 or x <= sm:
        return None
    # Intervals are disjoint and ordered, so only j = floor(x / p1) can hold x.
    j = x // p1
    if j > hs:
        return None
    lo, hi = j * pk + sm, (j + 1) * p1
    if lo < x < hi:
        return UInterval(j, lo, hi)
    return None


def u_contains(m: FactoredLike, p1: int, pk: int, x: int) -> Optional[UInterval]:
    """The interval of U holding x, or None."""
    if pk <= p1:
        raise InvalidInput(f"need p1 < pk, got {p1}, {pk}")
    return _u_lookup(sigma(as_factored(m)), p1, pk, x)


def u_intervals(m: FactoredLike, p1: int, pk: int) -> list[UInterval]:
    sm = sigma(as_factored(m))
    hs = h_star(m, p1, pk)
    return [UInterval(j, j * pk + sm, (j + 1) * p1) for j in range(hs + 1)]


def _invalid(problems: list[str]) -> GateVerdict:
    return GateVerdict(False, 0, 0, failure_reason=FailureReason.INPUT_INVALID, detail="; ".join(problems))


def gate_t1(gi: GateInput) -> GateVerdict:
    """Pass iff m*p1*...*pk is abundant with abundance in U."""
    problems = gi.problems()
    if problems:
        return _invalid(problems)
    m, ps = gi.m, gi.primes
    sm = sigma(m)
    w = m.value * prod(ps)
    delta = sm * prod(p + 1 for p in ps) - 2 * w
    hs = (ps[0] - sm) // (ps[-1] - ps[0])
    hit = _u_lookup(sm, ps[0], ps[-1], delta)
    if delta <= 0:
        return GateVerdict(False, hs, delta, hit, FailureReason.NOT_ABUNDANT)
    if hit is None:
        return GateVerdict(False, hs, delta, None, FailureReason.DELTA_NOT_IN_U)
    return GateVerdict(True, hs, delta, hit)


def gate_t2(gi: GateInput) -> GateVerdict:
    """Pass iff the closing prime turns a deficient m*p1*...*pk weird.

    Clauses are checked in order: the product is deficient, the closing prime
    p lies below 2*w/d(w) - 1 (so w*p is abundant), the abundance of w*p is
    in U, and p exceeds that abundance.
    """
    if gi.closing_prime is None:
        return _invalid(["gate_t2 needs a closing prime"])
    problems = gi.problems()
    if problems:
        return _invalid(problems)
    m, ps, p = gi.m, gi.primes, gi.closing_prime
    sm = sigma(m)
    wt = m.value * prod(ps)
    st = sm * prod(q + 1 for q in ps)
    d = 2 * wt - st
    hs = (ps[0] - sm) // (ps[-1] - ps[0])
    if d <= 0:
        return GateVerdict(False, hs, st - 2 * wt, failure_reason=FailureReason.TILDE_NOT_DEFICIENT)
    ceiling = Fraction(2 * wt, d) - 1
    lower = ceiling - Fraction((1 + hs) * ps[0], d)
    delta = st * (p + 1) - 2 * wt * p
    hit = _u_lookup(sm, ps[0], ps[-1], delta)
    common = dict(h_star=hs, delta=delta, u_interval=hit, p_ceiling=ceiling, p_lower_bound=lower)
    if not p < ceiling:
        return GateVerdict(False, failure_reason=FailureReason.P_BOUND_VIOLATED, **common)
    if hit is None:
        return GateVerdict(False, failure_reason=FailureReason.DELTA_NOT_IN_U, **common)
    if not p > delta:
        return GateVerdict(False, failure_reason=FailureReason.P_NOT_GT_DELTA, **common)
    return GateVerdict(True, **common)


@dataclass(frozen=True)
class AbundanceWindow:
    deficient_threshold: Fraction
    abundant_threshold: Fraction
    center: Fraction


def abundance_window(m: FactoredLike, k: int) -> AbundanceWindow:
    """Prime-size thresholds for m * p1 * ... * pk with m < p1.

    If every prime is below ``abundant_threshold`` the product is abundant;
    if every prime is above ``deficient_threshold`` it is deficient.
    """
    m = as_factored(m)
    d = 2 * m.value - sigma(m)
    if d < 1:
        raise InvalidInput(f"m={m.value} is not deficient")
    if k < 1:
        raise InvalidInput("k must be positive")
    base = Fraction(2 * k * m.value, d)
    return AbundanceWindow(
        deficient_threshold=base - Fraction(k, 2),
        abundant_threshold=base - Fraction(k + 2, 2),
        center=base - Fraction(k + 1, 2),
    )


def primitive_abundant_gate(m_tilde: FactoredLike, q: int) -> bool:
    """Cheap sufficient test that m_tilde * q is primitive abundant.

    Holds when q >= sigma(p^a) - 1 for every exact prime power p^a of
    m_tilde (given m_tilde deficient and m_tilde * q abundant).
    """
    m_tilde = as_factored(m_tilde)
    return all(q >= sigma_prime_power(p, e) - 1 for p, e in m_tilde.factors)
