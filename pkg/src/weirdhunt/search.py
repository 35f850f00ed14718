"""Hunting primitive weird numbers of the form m * p1 * ... * pk.

Mode T1 enumerates ascending prime k-tuples in a window and keeps those
whose product passes :func:`gates.gate_t1`.  Mode T2 enumerates deficient
products and looks for a closing prime just below 2*w/d(w) - 1 that passes
:func:`gates.gate_t2`.  Every hit is re-certified by the oracle in
:mod:`weirdness` before it is emitted.

Work is split by leading prime p1.  Units run in order (or in a process
pool, collected in order), and the checkpoint frontier is the last p1 whose
unit has been fully emitted, so resuming never skips a tuple.

Pruning
-------
With P = m * p1 * ... * p_{k-1} fixed, the abundance of P * q is linear in
q: Delta(P*q) = Delta(P)*q + sigma(P).  Requiring that value to lie inside
(sigma(m), (h*+1) * p1) pins the last prime to an explicit range, so the
innermost level never scans the window.  Higher levels are cut with bounds
that hold for every completion:

* the sigma(n)/n ratio of a completion is largest when the remaining primes
  are the smallest available ones, so a branch that cannot reach the
  required ratio is abandoned, together with every larger prime at that
  level;
* when even the largest available primes leave the product abundant, its
  abundance is at least (smallest completion) * (smallest ratio - 2), which
  rules the branch out once it passes the largest interval of U.
"""

from __future__ import annotations

import bisect
import enum
import hashlib
import json
import logging
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from itertools import combinations
from math import ceil, floor, prod
from pathlib import Path
from typing import Callable, Iterator, Optional

from .arith import Factored, FactoredLike, as_factored, sigma
from .errors import FingerprintMismatch, InvalidInput, WeirdHuntError
from .gates import GateInput, _u_lookup, abundance_window, gate_t1, gate_t2
from .primality import PrimeWindow, primes_descending, primes_in
from .weirdness import Primitivity, WeirdCertificate, certify

log = logging.getLogger(__name__)

DEFAULT_CLOSING_SCAN_CAP = 10**4


class Mode(str, enum.Enum):
    T1 = "T1"
    T2 = "T2"

    @classmethod
    def parse(cls, text: str) -> "Mode":
        try:
            return cls(text.upper())
        except ValueError:
            raise InvalidInput(f"mode must be t1 or t2, got {text!r}") from None


@dataclass(frozen=True)
class SearchJob:
    m: Factored
    k: int
    mode: Mode = Mode.T1
    window: Optional[PrimeWindow] = None
    width_factor: Fraction = Fraction(1, 2)
    max_tuples: Optional[int] = None
    parallelism: int = 1
    prune: bool = True
    closing_scan_cap: int = DEFAULT_CLOSING_SCAN_CAP

    @classmethod
    def make(cls, m: FactoredLike, k: int, mode: Mode | str = Mode.T1, **kw) -> "SearchJob":
        if isinstance(mode, str):
            mode = Mode.parse(mode)
        if isinstance(kw.get("window"), tuple):
            kw["window"] = PrimeWindow(*kw["window"])
        if "width_factor" in kw:
            kw["width_factor"] = Fraction(kw["width_factor"])
        return cls(as_factored(m), k, mode, **kw)

    def __post_init__(self) -> None:
        if self.k < 2:
            raise InvalidInput(f"k must be at least 2, got {self.k}")
        if self.m.value <= 1 or sigma(self.m) >= 2 * self.m.value:
            raise InvalidInput(f"m={self.m} must be deficient and greater than 1")
        if self.parallelism < 1:
            raise InvalidInput("parallelism must be positive")
        if not 0 < self.width_factor <= 1:
            raise InvalidInput("width factor must lie in (0, 1]")

    @property
    def deficience(self) -> int:
        return 2 * self.m.value - sigma(self.m)

    def resolved_window(self) -> PrimeWindow:
        if self.window is not None:
            return self.window
        center = abundance_window(self.m, self.k).center
        return PrimeWindow(max(2, floor(center * (1 - self.width_factor))), ceil(center * (1 + self.width_factor)))

    def fingerprint(self) -> str:
        w = self.resolved_window()
        doc = {"m": str(self.m), "k": self.k, "mode": self.mode.value, "window": [w.low, w.high]}
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()


@dataclass
class Checkpoint:
    fingerprint: str
    frontier: Optional[int] = None
    tuples_examined: int = 0
    hits: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {
                "fingerprint": self.fingerprint,
                "frontier": None if self.frontier is None else str(self.frontier),
                "tuples_examined": self.tuples_examined,
                "hits": self.hits,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "Checkpoint":
        doc = json.loads(text)
        frontier = doc.get("frontier")
        return cls(
            fingerprint=doc["fingerprint"],
            frontier=None if frontier is None else int(frontier),
            tuples_examined=int(doc.get("tuples_examined", 0)),
            hits=int(doc.get("hits", 0)),
        )

    def save(self, path: str | os.PathLike) -> None:
        """Write atomically: temp file in the same directory, then rename."""
        path = Path(path)
        fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(self.to_json())
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    @classmethod
    def load(cls, path: str | os.PathLike) -> "Checkpoint":
        return cls.from_json(Path(path).read_text())


# -- per-unit work -------------------------------------------------------------

@dataclass
class UnitResult:
    p1: int
    tuples: int = 0
    hits: list[WeirdCertificate] = field(default_factory=list)
    errors: list[str] = field(default_factory=list)


class _Context:
    """Immutable per-job data shared by every unit."""

    def __init__(self, job: SearchJob, primes: tuple[int, ...]):
        self.job = job
        self.m = job.m
        self.mv = job.m.value
        self.sm = sigma(job.m)
        self.k = job.k
        self.primes = primes


def _certify_hit(ctx: _Context, tup: tuple[int, ...], closing: Optional[int], res: UnitResult) -> None:
    gi = GateInput(ctx.m, tup, closing)
    try:
        if closing is None:
            verdict = gate_t1(gi)
            n = gi.tilde
        else:
            verdict = gate_t2(gi)
            t = gi.tilde
            n = Factored(t.value * closing, t.factors + ((closing, 1),))
        if not verdict.passed:
            res.errors.append(f"fast path and gate disagree on {tup} {closing}: {verdict.failure_reason}")
            return
        cert = certify(n, exact_primitivity=False)
    except WeirdHuntError as exc:
        res.errors.append(f"{tup} {closing}: {type(exc).__name__}: {exc}")
        return
    if not cert.weird or cert.primitivity is not Primitivity.PRIMITIVE_ABUNDANT:
        res.errors.append(f"oracle rejects gate pass {n}: weird={cert.weird} primitivity={cert.primitivity.value}")
        return
    res.hits.append(replace(cert, m=ctx.m, mode=ctx.job.mode.value, gate=verdict))


def _ratio_ok(s: int, v: int, extra: tuple[int, ...]) -> bool:
    """sigma/value of the product with ``extra`` primes appended exceeds 2."""
    return s * prod(x + 1 for x in extra) > 2 * v * prod(extra)


def _t1_unit(ctx: _Context, i: int) -> UnitResult:
    primes, k, sm = ctx.primes, ctx.k, ctx.sm
    p1 = primes[i]
    res = UnitResult(p1)
    if i + k - 1 >= len(primes):
        return res
    if not ctx.job.prune:
        for rest in combinations(primes[i + 1 :], k - 1):
            res.tuples += 1
            pk = rest[-1]
            delta = sm * (p1 + 1) * prod(x + 1 for x in rest) - 2 * ctx.mv * p1 * prod(rest)
            if delta > 0 and _u_lookup(sm, p1, pk, delta):
                _certify_hit(ctx, (p1,) + rest, None, res)
        return res

    n = len(primes)

    def max_bound(pk_min: int) -> int:
        return ((p1 - sm) // (pk_min - p1) + 1) * p1

    def last_level(idx: int, P: int, S: int, chosen: tuple[int, ...]) -> None:
        if idx + 1 >= n:
            return
        bmax = max_bound(primes[idx + 1])
        dp = S - 2 * P
        lo = primes[idx + 1]
        if dp > 0:
            hi = (bmax - S - 1) // dp
        elif dp == 0:
            hi = primes[-1] if sm < S < bmax else -1
        else:
            lo = max(lo, (S - bmax) // -dp + 1)
            hi = (S - sm - 1) // -dp
        if hi < lo:
            return
        a = bisect.bisect_left(primes, lo, idx + 1)
        b = bisect.bisect_right(primes, hi, a)
        for j in range(a, b):
            pk = primes[j]
            res.tuples += 1
            delta = dp * pk + S
            if delta > 0 and _u_lookup(sm, p1, pk, delta):
                _certify_hit(ctx, chosen + (pk,), None, res)

    def extend(idx: int, P: int, S: int, chosen: tuple[int, ...]) -> None:
        r = k - len(chosen)
        if r == 1:
            last_level(idx, P, S, chosen)
            return
        largest = primes[n - (r - 1) :]
        for j in range(idx + 1, n - r + 1):
            q = primes[j]
            P2, S2 = P * q, S * (q + 1)
            smallest = primes[j + 1 : j + r]
            if not _ratio_ok(S2, P2, smallest):
                break
            if largest[0] > q and _ratio_ok(S2, P2, largest):
                a_ = prod(x + 1 for x in largest)
                b_ = prod(largest)
                if prod(smallest) * (S2 * a_ - 2 * P2 * b_) >= max_bound(primes[j + r - 1]) * b_:
                    continue
            extend(j, P2, S2, chosen + (q,))

    P, S = ctx.mv * p1, sm * (p1 + 1)
    if _ratio_ok(S, P, primes[i + 1 : i + k]):
        extend(i, P, S, (p1,))
    return res


def _t2_unit(ctx: _Context, i: int) -> UnitResult:
    primes, k, sm = ctx.primes, ctx.k, ctx.sm
    cap = ctx.job.closing_scan_cap
    p1 = primes[i]
    res = UnitResult(p1)
    if i + k - 1 >= len(primes):
        return res
    n = len(primes)

    def close(P: int, S: int, chosen: tuple[int, ...]) -> None:
        res.tuples += 1
        d = 2 * P - S
        if d <= 0:
            return
        pk = chosen[-1]
        bmax = ((p1 - sm) // (pk - p1) + 1) * p1
        # Delta(w * p) = S - d * p must lie in (sigma(m), bmax).
        hi = (S - sm - 1) // d
        lo = max((S - bmax) // d + 1, pk + 1)
        if hi < lo:
            return
        for count, p in enumerate(primes_descending(hi, lo)):
            if count >= cap:
                break
            delta = S - d * p
            if p > delta and _u_lookup(sm, p1, pk, delta):
                _certify_hit(ctx, chosen, p, res)

    if not ctx.job.prune:
        for rest in combinations(primes[i + 1 :], k - 1):
            tup = (p1,) + rest
            close(ctx.mv * prod(tup), sm * prod(x + 1 for x in tup), tup)
        return res

    def extend(idx: int, P: int, S: int, chosen: tuple[int, ...]) -> None:
        r = k - len(chosen)
        if r == 1:
            D = 2 * P - S
            if D <= 0:
                return
            lo = S // D + 1
            hi = (2 * S - 1) // D
            a = bisect.bisect_left(primes, lo, idx + 1)
            b = bisect.bisect_right(primes, hi, a)
            res.tuples += b - a
            # Inlined form of close(P*q, S*(q+1), ...): this loop dominates T2 cost.
            for q in primes[a:b]:
                d = D * q - S
                sw = S * (q + 1)
                top = (sw - sm - 1) // d
                if top <= q:
                    continue
                bottom = (sw - ((p1 - sm) // (q - p1) + 1) * p1) // d + 1
                if bottom <= top:
                    res.tuples -= 1
                    close(P * q, sw, chosen + (q,))
            return
        largest = primes[n - (r - 1) :]
        for j in range(idx + 1, n - r + 1):
            q = primes[j]
            P2, S2 = P * q, S * (q + 1)
            smallest = primes[j + 1 : j + r]
            # A closing prime above the last chosen one must make the product abundant.
            if not _ratio_ok(S2, P2, smallest + (smallest[-1],)):
                break
            if largest[0] > q and S2 * prod(x + 1 for x in largest) >= 2 * P2 * prod(largest):
                # even the largest completion is abundant or perfect
                continue
            extend(j, P2, S2, chosen + (q,))

    P, S = ctx.mv * p1, sm * (p1 + 1)
    tail = primes[i + 1 : i + k]
    if _ratio_ok(S, P, tail + (tail[-1],)):
        extend(i, P, S, (p1,))
    return res


_WORKER_CTX: Optional[_Context] = None


def _init_worker(job: SearchJob, primes: tuple[int, ...]) -> None:
    global _WORKER_CTX
    _WORKER_CTX = _Context(job, primes)


def _run_unit(ctx: _Context, i: int) -> UnitResult:
    if ctx.job.mode is Mode.T1:
        return _t1_unit(ctx, i)
    return _t2_unit(ctx, i)


def _worker_unit(i: int) -> UnitResult:
    assert _WORKER_CTX is not None
    return _run_unit(_WORKER_CTX, i)


# -- driver ----------------------------------------------------------------------

class HuntRun:
    """Iterable hunt over one job; exposes progress after (or during) iteration.

    Iterating yields certificates.  ``checkpoint`` always describes the last
    fully emitted unit; ``exhausted`` is set when ``job.max_tuples`` stopped
    the run early.  Per-candidate failures land in ``errors`` rather than
    aborting the run.
    """

    def __init__(
        self,
        job: SearchJob,
        checkpoint: Optional[Checkpoint] = None,
        *,
        on_checkpoint: Optional[Callable[[Checkpoint], None]] = None,
    ):
        fp = job.fingerprint()
        if checkpoint is not None and checkpoint.fingerprint != fp:
            raise FingerprintMismatch("checkpoint was written for a different job")
        self.job = job
        self.checkpoint = replace(checkpoint) if checkpoint else Checkpoint(fp)
        self.on_checkpoint = on_checkpoint
        self.exhausted = False
        self.errors: list[str] = []
        if job.k <= job.deficience:
            log.warning("k=%d does not exceed the deficience %d of m; hits are unlikely", job.k, job.deficience)

    @property
    def tuples_examined(self) -> int:
        return self.checkpoint.tuples_examined

    def _units(self) -> tuple[tuple[int, ...], list[int]]:
        sm = sigma(self.job.m)
        window = self.job.resolved_window()
        primes = tuple(p for p in primes_in(window) if p >= sm + 2)
        frontier = self.checkpoint.frontier
        units = [
            i for i, p in enumerate(primes)
            if (frontier is None or p > frontier) and i + self.job.k - 1 < len(primes)
        ]
        return primes, units

    def __iter__(self) -> Iterator[WeirdCertificate]:
        primes, units = self._units()
        job = self.job
        if job.parallelism == 1 or len(units) < 2:
            ctx = _Context(job, primes)
            yield from self._collect((_run_unit(ctx, i) for i in units), len(units))
            return
        ex = ProcessPoolExecutor(max_workers=job.parallelism, initializer=_init_worker, initargs=(job, primes))
        try:
            chunk = max(1, len(units) // (job.parallelism * 16))
            yield from self._collect(ex.map(_worker_unit, units, chunksize=chunk), len(units))
        finally:
            ex.shutdown(wait=True, cancel_futures=True)

    def _collect(self, results: Iterator[UnitResult], total: int) -> Iterator[WeirdCertificate]:
        cp = self.checkpoint
        budget = self.job.max_tuples
        # the budget applies to this run, not to the checkpoint's running total
        start = cp.tuples_examined
        for done, res in enumerate(results, 1):
            for msg in res.errors:
                log.error("%s", msg)
            self.errors.extend(res.errors)
            yield from res.hits
            cp.tuples_examined += res.tuples
            cp.hits += len(res.hits)
            cp.frontier = res.p1
            if self.on_checkpoint:
                self.on_checkpoint(replace(cp))
            if budget is not None and cp.tuples_examined - start >= budget and done < total:
                self.exhausted = True
                break


def hunt(job: SearchJob, checkpoint: Optional[Checkpoint] = None) -> Iterator[WeirdCertificate]:
    return iter(HuntRun(job, checkpoint))


def hunt_t1(job: SearchJob) -> Iterator[WeirdCertificate]:
    if job.mode is not Mode.T1:
        raise InvalidInput("hunt_t1 needs a T1 job")
    return hunt(job)


def hunt_t2(job: SearchJob) -> Iterator[WeirdCertificate]:
    if job.mode is not Mode.T2:
        raise InvalidInput("hunt_t2 needs a T2 job")
    return hunt(job)


def resume(checkpoint: Checkpoint, job: SearchJob) -> Iterator[WeirdCertificate]:
    if checkpoint.fingerprint != job.fingerprint():
        raise FingerprintMismatch("checkpoint was written for a different job")
    return hunt(job, checkpoint)
