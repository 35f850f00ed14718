import random
from fractions import Fraction
from math import prod

import pytest

from weirdhunt.arith import Factored, abundance, parse_factored, sigma
from weirdhunt.errors import InvalidInput
from weirdhunt.gates import (
    FailureReason,
    GateInput,
    UInterval,
    abundance_window,
    gate_t1,
    gate_t2,
    h_star,
    primitive_abundant_gate,
    u_contains,
    u_intervals,
)
from weirdhunt.primality import PrimeWindow, is_prime, primes_in
from weirdhunt.weirdness import check_primitive_abundant

M4, M11, M12 = (Factored(2**h, ((2, h),)) for h in (4, 11, 12))


class TestHStarAndU:
    def test_h_star_examples(self):
        assert h_star(M4, 83, 523) == 0
        assert h_star(M12, 23143, 27061) == 3
        assert h_star(M4, 33, 89) == 0

    def test_u_contains_examples(self):
        assert u_contains(M4, 83, 523, 32) == UInterval(0, 31, 83)
        assert u_contains(M12, 23143, 27061, 39680) == UInterval(1, 35252, 46286)
        assert u_contains(M4, 83, 523, 31) is None
        assert u_contains(M4, 83, 523, 83) is None

    def test_u_matches_interval_list(self):
        rng = random.Random(5)
        for _ in range(300):
            p1 = rng.randrange(33, 3000)
            pk = p1 + rng.randrange(1, 400)
            ivs = u_intervals(M4, p1, pk)
            for x in rng.sample(range(0, (len(ivs) + 1) * p1 + 10), 50):
                want = next((iv for iv in ivs if iv.lower < x < iv.upper), None)
                assert u_contains(M4, p1, pk, x) == want

    def test_intervals_nonempty_and_disjoint(self):
        rng = random.Random(6)
        for _ in range(500):
            m = Factored.from_int(rng.choice([2, 4, 8, 16, 136, 7, 15, 52]))
            sm = sigma(m)
            p1 = rng.randrange(sm + 2, sm + 5000)
            pk = p1 + rng.randrange(2, 2000)
            ivs = u_intervals(m, p1, pk)
            assert len(ivs) == h_star(m, p1, pk) + 1
            for a, b in zip(ivs, ivs[1:]):
                assert a.upper <= b.lower
            for iv in ivs[:-1]:
                assert iv.lower + 1 < iv.upper
            # the open interval at j = h* holds an integer iff the remainder is at least 2
            last = ivs[-1]
            assert (last.upper - last.lower >= 2) == ((p1 - sm) % (pk - p1) >= 2)

    def test_rejects_bad_order(self):
        with pytest.raises(InvalidInput):
            h_star(M4, 89, 83)


class TestGateT1:
    def test_table_row1(self):
        v = gate_t1(GateInput.make(M4, (83, 89, 149, 523)))
        assert v.passed and v.delta == 32 and v.h_star == 0 and v.failure_reason is None

    def test_pair_first(self):
        v = gate_t1(GateInput.make(M11, (11321, 12583, 13093)))
        assert v.passed and v.delta == 43936 and (v.h_star, v.u_j) == (4, 3)

    def test_pair_second(self):
        v = gate_t1(GateInput.make(M12, (23143, 24043, 27061, 3077507)))
        assert not v.passed and v.failure_reason is FailureReason.DELTA_NOT_IN_U
        assert v.delta == 39680 and v.u_interval is None

    def test_not_abundant(self):
        v = gate_t1(GateInput.make(M4, (1009, 1013)))
        assert v.failure_reason is FailureReason.NOT_ABUNDANT and v.delta < 0

    @pytest.mark.parametrize(
        "primes",
        [(31, 89), (89,), (89, 83), (83, 91), (83, 83)],
    )
    def test_invalid_inputs(self, primes):
        v = gate_t1(GateInput.make(M4, primes))
        assert not v.passed and v.failure_reason is FailureReason.INPUT_INVALID and v.detail

    def test_non_deficient_m(self):
        v = gate_t1(GateInput.make(Factored.from_int(12), (101, 103)))
        assert v.failure_reason is FailureReason.INPUT_INVALID


class TestGateT2:
    def test_pair_second(self):
        v = gate_t2(GateInput.make(M12, (23143, 24043, 27061), 3077507))
        assert v.passed and v.delta == 39680 and v.u_j == 1
        assert v.p_lower_bound < 3077507 < v.p_ceiling

    def test_pair_first(self):
        v = gate_t2(GateInput.make(M11, (11321, 12583), 13093))
        assert not v.passed and v.failure_reason is FailureReason.P_NOT_GT_DELTA and v.delta == 43936

    def test_abundant_tilde(self):
        v = gate_t2(GateInput.make(M4, (101, 103, 107, 109), 113))
        assert v.failure_reason is FailureReason.TILDE_NOT_DEFICIENT and v.delta > 0

    def test_table_row1_as_closing_construction(self):
        # the tilde part of this Table 1 row is deficient, so gate 2 applies too
        assert gate_t2(GateInput.make(M4, (83, 89, 149), 523)).passed

    def test_p_bound(self):
        v = gate_t2(GateInput.make(M12, (23143, 24043, 27061), 3077509 + 2))
        assert not is_prime(3077511) or v.failure_reason is FailureReason.P_BOUND_VIOLATED
        v = gate_t2(GateInput.make(M12, (23143, 24043, 27061), 3200003))
        assert v.failure_reason in (FailureReason.P_BOUND_VIOLATED, FailureReason.INPUT_INVALID)

    def test_missing_closing_prime(self):
        assert gate_t2(GateInput.make(M4, (83, 89))).failure_reason is FailureReason.INPUT_INVALID

    def test_abundance_identity(self):
        rng = random.Random(9)
        checked = 0
        while checked < 300:
            m = Factored.from_int(rng.choice([2, 4, 8, 16, 32, 136]))
            sm = sigma(m)
            ps = sorted(rng.sample(list(primes_in(PrimeWindow(sm + 2, sm + 3000))), 3))
            wt = m.value * prod(ps)
            dt = -abundance(Factored(wt, m.factors + tuple((p, 1) for p in ps)))
            if dt <= 0:
                continue
            p = rng.choice(list(primes_in(PrimeWindow(ps[-1] + 1, ps[-1] + 500))))
            v = gate_t2(GateInput.make(m, ps, p))
            assert v.delta == -dt * p + 2 * wt - dt
            assert v.p_ceiling == Fraction(sigma(m) * prod(q + 1 for q in ps), dt)
            checked += 1


def test_t1_pass_below_pk_gives_t2_pass():
    from weirdhunt.search import SearchJob, hunt_t1

    hits = 0
    for m, k, window in ((4, 3, (9, 600)), (16, 4, (34, 300)), (8, 3, (17, 400))):
        for cert in hunt_t1(SearchJob.make(m, k, window=window)):
            ps = cert.n.primes[1:]
            v = gate_t1(GateInput.make(m, ps))
            assert v.passed
            if k > 2 and v.delta < ps[-1]:
                hits += 1
                assert gate_t2(GateInput.make(m, ps[:-1], ps[-1])).passed
    assert hits > 0


class TestWindow:
    def test_examples(self):
        w = abundance_window(M4, 4)
        assert (w.abundant_threshold, w.deficient_threshold, w.center) == (125, 126, Fraction(251, 2))
        assert abundance_window(Factored.from_int(136), 3).center == 406
        assert abundance_window(M12, 4).center == Fraction(65531, 2)

    def test_rejects_non_deficient(self):
        with pytest.raises(InvalidInput):
            abundance_window(Factored.from_int(6), 3)

    def test_thresholds_hold(self):
        rng = random.Random(13)
        ms = [m for m in range(2, 3000) if sigma(Factored.from_int(m)) < 2 * m]
        checked = 0
        while checked < 200:
            m = Factored.from_int(rng.choice(ms))
            k = rng.randrange(1, 6)
            w = abundance_window(m, k)
            sm = sigma(m)
            lo = max(m.value + 1, 2)
            if w.abundant_threshold > lo + k * 3:
                pool = list(primes_in(PrimeWindow(lo, int(w.abundant_threshold) - 1)))
                pool = [p for p in pool if m.value % p]
                if len(pool) >= k:
                    ps = rng.sample(pool, k)
                    assert sm * prod(p + 1 for p in ps) > 2 * m.value * prod(ps)
                    checked += 1
            lo = max(int(w.deficient_threshold) + 1, m.value + 1)
            pool = [p for p in primes_in(PrimeWindow(lo, lo + 20 * k + 200)) if m.value % p]
            ps = rng.sample(pool, k)
            assert sm * prod(p + 1 for p in ps) < 2 * m.value * prod(ps)


class TestPrimitiveAbundantGate:
    def test_examples(self):
        assert primitive_abundant_gate(parse_factored("2^4*83*89*149"), 523)
        assert not primitive_abundant_gate(Factored(32, ((2, 5),)), 7)
        assert primitive_abundant_gate(Factored.from_int(6), 5)

    def test_sufficient_for_t1_passes(self):
        gi = GateInput.make(M4, (83, 89, 149, 523))
        assert primitive_abundant_gate(Factored.from_int(16 * 83 * 89 * 149), 523)
        assert check_primitive_abundant(gi.tilde)
