"""Serialized certificates: JSONL records and CSV table export.

Big integers always travel as decimal strings.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass, fields
from typing import IO, Iterable, Optional

from .arith import abundance, parse_factored
from .weirdness import WeirdCertificate

CSV_COLUMNS = ("value", "factorization", "m", "delta")


@dataclass(frozen=True)
class CertificateRecord:
    value: str
    factorization: str
    delta: str
    m: Optional[str]
    mode: str
    primitivity: str
    primality_certainty: str
    h_star: Optional[int] = None
    u_j: Optional[int] = None

    @classmethod
    def from_certificate(cls, cert: WeirdCertificate) -> "CertificateRecord":
        gate = cert.gate
        return cls(
            value=str(cert.n.value),
            factorization=str(cert.n),
            delta=str(cert.report.delta),
            m=None if cert.m is None else str(cert.m),
            mode=cert.mode,
            primitivity=cert.primitivity.value,
            primality_certainty=cert.primality_certainty.value,
            h_star=getattr(gate, "h_star", None),
            u_j=getattr(gate, "u_j", None),
        )

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, doc: dict) -> "CertificateRecord":
        names = {f.name for f in fields(cls)}
        missing = names - doc.keys() - {"h_star", "u_j"}
        if missing:
            raise ValueError(f"record is missing {sorted(missing)}")
        return cls(**{k: doc.get(k) for k in names})

    @classmethod
    def from_json(cls, line: str) -> "CertificateRecord":
        return cls.from_dict(json.loads(line))

    def check(self) -> None:
        """Re-derive value and abundance from the factorization text."""
        n = parse_factored(self.factorization)
        if str(n.value) != self.value:
            raise ValueError(f"factorization {self.factorization} is {n.value}, record says {self.value}")
        if str(abundance(n)) != self.delta:
            raise ValueError(f"abundance of {self.value} is {abundance(n)}, record says {self.delta}")


def write_jsonl(records: Iterable[CertificateRecord], out: IO[str]) -> int:
    n = 0
    for rec in records:
        out.write(rec.to_json() + "\n")
        n += 1
    return n


def read_jsonl(src: IO[str]) -> list[CertificateRecord]:
    return [CertificateRecord.from_json(line) for line in src if line.strip()]


class CsvTable:
    """CSV writer using the table column order value, factorization, m, delta."""

    def __init__(self, out: IO[str]):
        self._w = csv.writer(out)
        self._w.writerow(CSV_COLUMNS)

    def add(self, rec: CertificateRecord) -> None:
        self._w.writerow([rec.value, rec.factorization, rec.m or "", rec.delta])
