"""Built-in deficient seeds m with small deficience."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .arith import Factored, sigma

# Powers of two are the only known numbers of deficience 1.
_POWERS_OF_TWO = tuple(range(1, 32))
_DEFICIENCE_2 = (136, 32896, 2147516416)
# OEIS A141548; 315, 1155 and 815634435 are the odd ones.
_DEFICIENCE_6 = (7, 15, 52, 315, 592, 1155, 2102272, 815634435)


@dataclass(frozen=True)
class Seed:
    m: Factored
    deficience: int
    parity: str

    @property
    def odd(self) -> bool:
        return self.parity == "odd"


def _make(m: Factored, expected: int) -> Seed:
    d = 2 * m.value - sigma(m)
    if d != expected:
        raise AssertionError(f"seed {m} has deficience {d}, catalog says {expected}")
    return Seed(m, d, "odd" if m.value % 2 else "even")


@lru_cache(maxsize=1)
def seed_catalog() -> tuple[Seed, ...]:
    seeds = [_make(Factored(2**h, ((2, h),)), 1) for h in _POWERS_OF_TWO]
    seeds += [_make(Factored.from_int(m), 2) for m in _DEFICIENCE_2]
    seeds += [_make(Factored.from_int(m), 6) for m in _DEFICIENCE_6]
    return tuple(seeds)
