"""Ground-truth weirdness oracle.

An abundant n is semiperfect exactly when its abundance sigma(n) - 2n is a
sum of distinct proper divisors of n: drop those divisors from the full list
of proper divisors (which sums to n + abundance) and what is left sums to n.
The abundance of everything the search produces is tiny compared to n, so a
bit-vector subset-sum over the divisors below that target decides
semiperfection exactly and quickly.

Nothing in here knows about the sufficient conditions in :mod:`gates`; the
search uses this module to re-certify every hit independently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Optional

from .arith import (
    AbundanceClass,
    AbundanceReport,
    Factored,
    FactoredLike,
    abundance_report,
    all_divisors,
    as_factored,
    divisors_up_to,
    factored_range,
    sigma,
)
from .errors import CapExceeded, DivisorSpaceTooLarge, TargetTooLarge
from .primality import Certainty, certainty_of

DEFAULT_TARGET_CAP = 10**8
DEFAULT_PROPER_DIVISOR_CAP = 1 << 20


class Primitivity(str, enum.Enum):
    PRIMITIVE_ABUNDANT = "primitive_abundant"
    PRIMITIVE_WEIRD_EXACT = "primitive_weird_exact"
    NOT_PRIMITIVE = "not_primitive"
    UNCHECKED = "unchecked"


@dataclass(frozen=True)
class WeirdCertificate:
    """Re-checkable verdict on whether ``n`` is weird.

    ``witness`` is a tuple of distinct divisors summing to the abundance when
    n is abundant but not weird (the empty tuple for perfect numbers), and
    ``None`` when the subset search was exhausted or n is deficient.
    ``gate``/``m``/``mode`` are filled in by the search to record how the
    number was found.
    """

    n: Factored
    report: AbundanceReport
    weird: bool
    witness: Optional[tuple[int, ...]]
    primitivity: Primitivity = Primitivity.UNCHECKED
    primality_certainty: Certainty = Certainty.EXACT
    m: Optional[Factored] = None
    mode: str = "oracle"
    gate: Optional[object] = field(default=None, compare=False)

    @property
    def exhausted(self) -> bool:
        return self.weird

    def validate(self) -> None:
        """Raise AssertionError if the certificate does not re-check."""
        n = self.n
        rep = abundance_report(n)
        assert rep == self.report, "abundance report does not match n"
        if self.weird:
            assert rep.cls is AbundanceClass.ABUNDANT, "weird but not abundant"
            assert self.witness is None
        if self.witness is not None:
            ws = self.witness
            assert len(set(ws)) == len(ws), "witness entries repeat"
            assert all(n.value % d == 0 and d < n.value for d in ws), "witness entry is not a proper divisor"
            assert sum(ws) == rep.delta, "witness does not sum to the abundance"


def _subset_sum(divs: list[int], target: int, want_witness: bool) -> tuple[bool, Optional[list[int]]]:
    """Bit-vector DP; bit s of ``reach`` is set when s is a subset sum."""
    mask = (1 << (target + 1)) - 1
    reach = 1
    snapshots: list[int] = []
    used = 0
    for d in divs:
        if want_witness:
            snapshots.append(reach)
        reach |= (reach << d) & mask
        used += 1
        if reach >> target & 1:
            break
    if not reach >> target & 1:
        return False, None
    if not want_witness:
        return True, None
    picked = []
    t = target
    for i in range(used - 1, -1, -1):
        if t == 0:
            break
        if snapshots[i] >> t & 1:
            continue
        picked.append(divs[i])
        t -= divs[i]
    assert t == 0
    picked.sort()
    return True, picked


def representable_as_distinct_divisors(
    n: FactoredLike,
    target: int,
    *,
    witness: bool = True,
    proper: bool = False,
    cap: int = DEFAULT_TARGET_CAP,
) -> tuple[bool, Optional[list[int]]]:
    """Decide whether ``target`` is a sum of distinct divisors of ``n``.

    Only divisors up to ``target`` can take part, so those are the only ones
    generated.  With ``proper=True`` the divisor ``n`` itself is excluded.
    Returns ``(found, witness_list)``; the list is ``None`` when not found or
    when ``witness=False``.
    """
    n = as_factored(n)
    if target < 0:
        return False, None
    if target == 0:
        return True, ([] if witness else None)
    if target > cap:
        raise TargetTooLarge(f"target {target} exceeds subset-sum cap {cap}")
    bound = min(target, n.value - 1) if proper else target
    divs = divisors_up_to(n, bound)
    if sum(divs) < target:
        return False, None
    return _subset_sum(divs, target, witness)


def _certainty(n: Factored) -> Certainty:
    return certainty_of(n.primes)


def is_semiperfect(n: FactoredLike, *, cap: int = DEFAULT_TARGET_CAP) -> bool:
    n = as_factored(n)
    rep = abundance_report(n)
    if rep.delta < 0:
        return False
    if rep.delta == 0:
        return True
    found, _ = representable_as_distinct_divisors(n, rep.delta, witness=False, proper=True, cap=cap)
    return found


def is_weird(n: FactoredLike, *, witness: bool = True, cap: int = DEFAULT_TARGET_CAP) -> WeirdCertificate:
    """Full weirdness verdict for n (primitivity left unchecked)."""
    n = as_factored(n)
    rep = abundance_report(n)
    cert = _certainty(n)
    if rep.delta < 0:
        return WeirdCertificate(n, rep, False, None, primality_certainty=cert)
    if rep.delta == 0:
        return WeirdCertificate(n, rep, False, (), primality_certainty=cert)
    found, ws = representable_as_distinct_divisors(n, rep.delta, witness=witness, proper=True, cap=cap)
    if found:
        return WeirdCertificate(n, rep, False, tuple(ws) if ws is not None else None, primality_certainty=cert)
    return WeirdCertificate(n, rep, True, None, primality_certainty=cert)


def check_primitive_abundant(n: FactoredLike) -> bool:
    """True iff n is abundant and n/p is deficient for every prime p | n."""
    n = as_factored(n)
    total = sigma(n)
    if total <= 2 * n.value:
        return False
    for p, e in n.factors:
        pe = p**e
        # sigma(n/p) = sigma(n) * sigma(p^(e-1)) / sigma(p^e)
        sub = total // ((pe * p - 1) // (p - 1)) * ((pe - 1) // (p - 1))
        if sub >= 2 * (n.value // p):
            return False
    return True


def check_primitive_weird_exact(
    n: FactoredLike,
    *,
    cap: int = DEFAULT_PROPER_DIVISOR_CAP,
    target_cap: int = DEFAULT_TARGET_CAP,
) -> bool:
    """True iff no proper divisor of n is weird."""
    n = as_factored(n)
    if n.num_divisors - 1 > cap:
        raise DivisorSpaceTooLarge(f"{n.value} has {n.num_divisors - 1} proper divisors, cap is {cap}")
    for d in all_divisors(n, cap + 1)[:-1]:
        dd = Factored.from_factors(_sub_factors(n, d), check_primes=False)
        if sigma(dd) > 2 * d and is_weird(dd, witness=False, cap=target_cap).weird:
            return False
    return True


def _sub_factors(n: Factored, d: int) -> list[tuple[int, int]]:
    out = []
    for p, _ in n.factors:
        e = 0
        while d % p == 0:
            d //= p
            e += 1
        if e:
            out.append((p, e))
    return out


def certify(
    n: FactoredLike,
    *,
    exact_primitivity: bool = True,
    cap: int = DEFAULT_TARGET_CAP,
    divisor_cap: int = DEFAULT_PROPER_DIVISOR_CAP,
) -> WeirdCertificate:
    """``is_weird`` plus a primitivity verdict for weird n.

    Primitive abundance is tried first since it is cheap and implies
    primitive weirdness.  Otherwise the exact proper-divisor check runs if
    ``exact_primitivity`` is set and the divisor count is within the cap;
    failing that the primitivity stays ``unchecked``.
    """
    c = is_weird(n, cap=cap)
    if not c.weird:
        return c
    if check_primitive_abundant(c.n):
        prim = Primitivity.PRIMITIVE_ABUNDANT
    elif exact_primitivity:
        try:
            ok = check_primitive_weird_exact(c.n, cap=divisor_cap, target_cap=cap)
        except (CapExceeded, TargetTooLarge):
            prim = Primitivity.UNCHECKED
        else:
            prim = Primitivity.PRIMITIVE_WEIRD_EXACT if ok else Primitivity.NOT_PRIMITIVE
    else:
        prim = Primitivity.UNCHECKED
    return replace(c, primitivity=prim)


def weird_census(limit: int) -> list[int]:
    """All weird n <= limit, by running the oracle on every abundant n."""
    out = []
    for n in factored_range(limit):
        if sigma(n) > 2 * n.value and is_weird(n, witness=False).weird:
            out.append(n.value)
    return out
