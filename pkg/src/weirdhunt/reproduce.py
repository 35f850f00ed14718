"""Regression harness against the published tables of primitive weird numbers.

The fixtures keep the tables as printed (value, factorization, m, abundance)
so a disagreement can be traced either to the fixture or to the code: every
column is cross-checked against recomputation before the gate is run.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Optional

from .arith import Factored, abundance, parse_factored
from .gates import GateInput, GateVerdict, gate_t1, gate_t2
from .weirdness import Primitivity, WeirdCertificate, certify, weird_census

SMALL_LIMIT = 10**4
SMALL_COUNT = 7


@dataclass(frozen=True)
class TableRow:
    table: int
    w: int
    n: Factored
    m: Factored
    delta: int

    @property
    def primes(self) -> tuple[int, ...]:
        """Primes of n outside m, ascending (the closing prime last)."""
        own = set(self.m.primes)
        return tuple(p for p in self.n.primes if p not in own)


@dataclass
class RowResult:
    row: TableRow
    ok: bool = True
    problems: list[str] = field(default_factory=list)
    verdict: Optional[GateVerdict] = None
    certificate: Optional[WeirdCertificate] = None

    def fail(self, msg: str) -> None:
        self.ok = False
        self.problems.append(msg)


def _read_fixture(name: str) -> str:
    return resources.files("weirdhunt").joinpath("data").joinpath(name).read_text()


def load_table(table: int) -> list[TableRow]:
    text = _read_fixture(f"table{table}.csv")
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    rows = []
    for rec in csv.DictReader(io.StringIO("\n".join(lines))):
        rows.append(
            TableRow(
                table=table,
                w=int(rec["w"]),
                n=parse_factored(rec["factorization"]),
                m=parse_factored(rec["m"]),
                delta=int(rec["delta"]),
            )
        )
    return rows


def load_small() -> list[int]:
    text = _read_fixture("small_weird.txt")
    return [int(ln) for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


def check_row(row: TableRow) -> RowResult:
    out = RowResult(row)
    if row.n.value != row.w:
        out.fail(f"fixture: w={row.w} but factorization gives {row.n.value}")
    if row.n.value % row.m.value:
        out.fail(f"fixture: m={row.m} does not divide {row.n}")
        return out
    if abundance(row.n) != row.delta:
        out.fail(f"recomputed abundance {abundance(row.n)} differs from table value {row.delta}")
    ps = row.primes
    if row.table == 1:
        verdict = gate_t1(GateInput(row.m, ps))
    else:
        verdict = gate_t2(GateInput(row.m, ps[:-1], ps[-1]))
    out.verdict = verdict
    if not verdict.passed:
        out.fail(f"gate T{row.table} failed: {verdict.failure_reason.value} {verdict.detail}".rstrip())
    elif verdict.delta != row.delta:
        out.fail(f"gate abundance {verdict.delta} differs from table value {row.delta}")
    cert = certify(row.n, exact_primitivity=False)
    out.certificate = replace(cert, m=row.m, mode=f"T{row.table}", gate=verdict)
    if not cert.weird:
        out.fail(f"oracle: {row.w} is not weird (witness {cert.witness})")
    elif cert.primitivity is not Primitivity.PRIMITIVE_ABUNDANT:
        out.fail(f"oracle: {row.w} is not primitive abundant")
    return out


def reproduce_table(table: int) -> list[RowResult]:
    if table not in (1, 2):
        raise ValueError(f"no table {table}")
    return [check_row(row) for row in load_table(table)]


@dataclass
class CensusResult:
    found: list[int]
    expected: list[int]

    @property
    def ok(self) -> bool:
        return self.found == self.expected and len(self.found) == SMALL_COUNT


def reproduce_small(limit: int = SMALL_LIMIT) -> CensusResult:
    return CensusResult(weird_census(limit), load_small())
