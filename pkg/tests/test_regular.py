"""Regular sequences: certification, realization, intersections, decay."""

import random
from fractions import Fraction

import pytest

from almostfull import (CertificationError, DomainWitness, Polygonal,
                        RegularSeq, RegularityError, decay_bound,
                        geometric_decay, intersect_countable, intersect_pair,
                        point_avoiding_seq, point_in_pps, pow2, rat_approx,
                        realize_point, row_witness, witness_precision)
from almostfull.catalog import tents_at_center_seq

F = Fraction
HALF = F(1, 2)
ONE_POLY = Polygonal.constant(1)


def random_regular(seed, count, offset=0):
    rng = random.Random(seed)
    terms = []
    for n in range(count):
        cuts = sorted(rng.sample(range(1, 64), 4))
        xs = [F(0)] + [F(c, 64) for c in cuts] + [F(1)]
        vs = [F(rng.randint(0, 32), 16) for _ in xs]
        h = Polygonal(xs, vs)
        total = h.integral()
        target = pow2(-(n + offset)) * F(rng.randint(1, 7), 8)
        terms.append(h * (target / total) if total else h)
    return RegularSeq.from_terms(terms)


class TestRegularity:
    def test_exact_prefix_check(self):
        seq = random_regular(3, 17)
        seq.check_prefix(16)
        for n in range(17):
            assert seq.term(n).integral() < pow2(-n)
            assert seq.term(n).is_nonneg()

    def test_violation_rejected_with_index(self):
        bad = RegularSeq(lambda n: Polygonal.constant(pow2(-n)))
        with pytest.raises(RegularityError) as err:
            bad.term(5)
        assert err.value.index == 5

    def test_negative_term_rejected(self):
        bad = RegularSeq(lambda n: Polygonal.constant(F(-1, 100)))
        with pytest.raises(RegularityError):
            bad.term(0)

    def test_shifted_inherits(self):
        seq = random_regular(4, 12).shifted(3)
        seq.check_prefix(8)

    def test_tail_bound(self):
        assert RegularSeq.tail_bound(7) == pow2(-7)


class TestRealizePoint:
    def test_zero_sequence_trivial(self):
        realized = realize_point(ONE_POLY, RegularSeq.zero(), 1)
        x = rat_approx(realized.point, 10)
        assert 0 <= x <= 1
        assert 0 <= realized.bound < 1

    def test_precondition_rejected(self):
        # Constant terms at the regularity limit leave no margin below 1/2.
        seq = RegularSeq(lambda n: Polygonal.constant(pow2(-n) * F(7, 8)))
        with pytest.raises(CertificationError):
            realize_point(Polygonal.constant(HALF), seq, 1)

    def test_tents_instance_with_grid_oracle(self):
        tents = tents_at_center_seq()
        realized = realize_point(ONE_POLY, tents, 2)
        x = rat_approx(realized.point, 30)
        x = min(max(x, F(0)), F(1))
        # Brute-force oracle on the dyadic grid: the series is 1 - 2|x - 1/2|,
        # so qualifying points exist wherever the grid is away from the peak.
        grid = [F(k, 4096) for k in range(4097)]
        series = [1 - 2 * abs(g - HALF) for g in grid]
        assert min(series) < 1 - realized.margin
        run = F(0)
        for m in range(26):
            run += tents.term(m).eval(x)
            assert run < 1 - realized.margin

    def test_support_shrinking_to_zero(self):
        # Bumps supported in (0, 2**-n): the kept halves move away from 0.
        def gen(n):
            return Polygonal.tent(pow2(-(n + 1)), 1, pow2(-(n + 2)))

        seq = RegularSeq(gen)
        realized = realize_point(ONE_POLY, seq, 2)
        x = rat_approx(realized.point, 30)
        assert x > pow2(-12)
        tail_hits = [seq.term(n).eval(min(max(x, F(0)), F(1))) for n in range(14, 26)]
        assert all(v == 0 for v in tail_hits)


class TestPointInPps:
    def test_zero_sequence(self):
        w = point_in_pps(RegularSeq.zero())
        assert w.gamma == 2
        ok, _ = w.verify(RegularSeq.zero(), 20, 30)
        assert ok

    def test_shrinking_tents_avoid_center(self):
        def gen(n):
            return Polygonal.tent(HALF, 1, pow2(-(n + 2)))

        seq = RegularSeq(gen)
        w = point_in_pps(seq)
        x = rat_approx(w.x, 30)
        assert abs(x - HALF) > pow2(-25)
        prec = witness_precision(seq, 20, 30)
        ok, err = w.verify(seq, 20, prec)
        assert ok
        assert err <= pow2(-20)

    def test_alternating_edge_tents_interior(self):
        seq = point_avoiding_seq([F(0), F(1)])
        w = point_in_pps(seq)
        x = rat_approx(w.x, 30)
        assert pow2(-28) < x < 1 - pow2(-28)
        ok, _ = w.verify(seq, 20, witness_precision(seq, 20, 30))
        assert ok


class TestIntersections:
    def test_all_zero_rows(self):
        meet = intersect_countable(lambda n: RegularSeq.zero())
        for k in range(8):
            assert meet.term(k).is_zero()

    def test_single_row_formula(self):
        row = random_regular(9, 14)
        meet = intersect_countable([row])
        for k in range(10):
            assert meet.term(k) == row.term(k) * HALF

    def test_two_constant_rows_exact(self):
        rows = [RegularSeq(lambda k: Polygonal.constant(pow2(-(k + 1))))
                for _ in range(2)]
        meet = intersect_countable(rows)
        for k in range(13):
            expected = pow2(-(k + 2)) if k == 0 else 3 * pow2(-(k + 3))
            assert meet.term(k).integral() == expected
            assert meet.term(k).integral() < pow2(-k)

    def test_row_violation_named(self):
        bad_row = RegularSeq(lambda k: Polygonal.constant(pow2(-k)))
        meet = intersect_countable([random_regular(1, 10, offset=1), bad_row])
        with pytest.raises(RegularityError) as err:
            meet.check_prefix(6)
        assert err.value.index[0] == 1

    def test_pair_with_zero_member(self):
        row = random_regular(12, 14)
        meet = intersect_pair(row, RegularSeq.zero())
        for k in range(10):
            assert meet.term(k) == row.term(k) * HALF

    def test_pair_witness_transport(self):
        a = random_regular(21, 18, offset=1)
        b = random_regular(22, 18, offset=1)
        meet = intersect_pair(a, b)
        w = point_in_pps(meet)
        for row_index, row in enumerate((a, b)):
            wr = row_witness(w, row_index)
            assert wr.gamma == pow2(2 * row_index + 1) * w.gamma
            prec = witness_precision(row, 12, 24)
            ok, _ = wr.verify(row, 12, prec)
            assert ok

    def test_six_row_transport_bounds(self):
        rows = [random_regular(30 + i, 20, offset=1) for i in range(6)]
        meet = intersect_countable(rows)
        w = point_in_pps(meet)
        prec = max(witness_precision(rows[n], 15, 25) for n in range(6))
        x = rat_approx(w.x, prec)
        x = min(max(x, F(0)), F(1))
        for n in range(6):
            slack = sum((rows[n].term(k).lipschitz() for k in range(16)), F(0)) * pow2(-prec)
            run = F(0)
            for k in range(16):
                run += rows[n].term(k).eval(x)
                assert run <= pow2(2 * n + 1) * w.gamma + slack


class TestSerialization:
    def test_prefix_round_trip(self):
        from almostfull.regular import deserialize_prefix, serialize_prefix

        seq = tents_at_center_seq()
        text = serialize_prefix(seq, 4)
        terms = deserialize_prefix(text)
        assert terms == [seq.term(k) for k in range(5)]

    def test_golden_fixture(self):
        from almostfull.regular import serialize_prefix

        seq = tents_at_center_seq()
        assert serialize_prefix(seq, 1) == (
            '[[["0/1","0/1"],["1/2","1/2"],["1/1","0/1"]],'
            '[["0/1","0/1"],["1/2","1/4"],["1/1","0/1"]]]')


class TestGeometricDecay:
    def test_zero_sequence(self):
        dec, transport = geometric_decay(RegularSeq.zero())
        assert dec.term(5).is_zero()
        assert transport(DomainWitness(x=point_in_pps(RegularSeq.zero()).x,
                                       gamma=F(0)), 3) == 0

    def test_constant_instance_exact_bounds(self):
        seq = RegularSeq(lambda n: Polygonal.constant(pow2(-(n + 1))))
        dec, _ = geometric_decay(seq)
        for n in range(13):
            v = dec.term(n).integral()
            assert v == F(5, 12) * F(4, 9) ** n
            assert v <= F(5, 6) * F(4, 9) ** n
            assert v < pow2(-n)

    def test_transport_bound_at_realized_point(self):
        seq = tents_at_center_seq()
        dec, transport = geometric_decay(seq)
        w = point_in_pps(dec)
        x = rat_approx(w.x, 30)
        x = min(max(x, F(0)), F(1))
        for n in range(8):
            bound = transport(w, n)
            assert bound == decay_bound(w.gamma, n)
            slack = seq.term(n).lipschitz() * pow2(-30)
            assert seq.term(n).eval(x) <= bound + slack
