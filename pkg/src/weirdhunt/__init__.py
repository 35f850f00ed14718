"""Search for and certify primitive weird numbers of the form m * p1 * ... * pk."""

from .arith import (
    AbundanceClass,
    AbundanceReport,
    Factored,
    abundance_report,
    divisors_up_to,
    multiply,
    parse_factored,
    sigma,
)
from .gates import (
    FailureReason,
    GateInput,
    GateVerdict,
    abundance_window,
    gate_t1,
    gate_t2,
    h_star,
    primitive_abundant_gate,
    u_contains,
)
from .primality import PrimeWindow, is_prime, next_prime_at_most, primes_in, test_primality
from .search import Checkpoint, HuntRun, Mode, SearchJob, hunt_t1, hunt_t2, resume
from .seeds import seed_catalog
from .weirdness import (
    Primitivity,
    WeirdCertificate,
    certify,
    check_primitive_abundant,
    check_primitive_weird_exact,
    is_semiperfect,
    is_weird,
    representable_as_distinct_divisors,
)

__all__ = [
    "AbundanceClass",
    "AbundanceReport",
    "Checkpoint",
    "Factored",
    "FailureReason",
    "GateInput",
    "GateVerdict",
    "HuntRun",
    "Mode",
    "PrimeWindow",
    "Primitivity",
    "SearchJob",
    "WeirdCertificate",
    "abundance_report",
    "abundance_window",
    "certify",
    "check_primitive_abundant",
    "check_primitive_weird_exact",
    "divisors_up_to",
    "gate_t1",
    "gate_t2",
    "h_star",
    "hunt_t1",
    "hunt_t2",
    "is_prime",
    "is_semiperfect",
    "is_weird",
    "multiply",
    "next_prime_at_most",
    "parse_factored",
    "primes_in",
    "primitive_abundant_gate",
    "representable_as_distinct_divisors",
    "resume",
    "seed_catalog",
    "sigma",
    "test_primality",
    "u_contains",
]

__version__ = "0.1.0"
