"""Piecewise-linear calculus: exact evaluation, integrals, lattice ops, sets."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from almostfull import (DyadicInterval, IntervalUnion, Polygonal,
                        indicator_approx, pow2, step_function, sublevel,
                        union_indicator)
from almostfull.polygonal import StepPolygonal, l1_distance, l1_upper

F = Fraction
HALF = F(1, 2)

IDENTITY = Polygonal.identity()
TENT = Polygonal.tent(HALF)


def random_poly(rng, lo=-32, hi=32, nodes=4):
    cuts = sorted(rng.sample(range(1, 96), nodes))
    xs = [F(0)] + [F(c, 96) for c in cuts] + [F(1)]
    vs = [F(rng.randint(lo, hi), 16) for _ in xs]
    return Polygonal(xs, vs)


@st.composite
def polys(draw, lo=-32, hi=32):
    cuts = draw(st.lists(st.integers(1, 95), min_size=1, max_size=5, unique=True))
    xs = [F(0)] + [F(c, 96) for c in sorted(cuts)] + [F(1)]
    vs = [F(draw(st.integers(lo, hi)), 16) for _ in xs]
    return Polygonal(xs, vs)


class TestEval:
    def test_identity_midpoint(self):
        assert IDENTITY.eval(HALF) == HALF

    def test_tent_linearity(self):
        assert TENT.eval(F(1, 4)) == HALF

    def test_tent_breakpoint(self):
        assert TENT.eval(HALF) == 1

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            IDENTITY.eval(F(3, 2))

    def test_breakpoints_hit_stored_values(self):
        h = Polygonal.from_pairs([(0, 1), (F(1, 3), 5), (1, F(-2, 7))])
        for t, v in zip(h.xs, h.vs):
            assert h.eval(t) == v


class TestIntegral:
    def test_identity(self):
        assert IDENTITY.integral() == HALF

    def test_tent(self):
        assert TENT.integral() == HALF

    def test_constant(self):
        assert Polygonal.constant(F(5, 7)).integral() == F(5, 7)

    def test_integral_on_parts(self):
        rng = random.Random(5)
        for _ in range(25):
            h = random_poly(rng)
            a, b = sorted(F(rng.randint(0, 96), 96) for _ in range(2))
            mid = (a + b) / 2
            assert h.integral_on(a, mid) + h.integral_on(mid, b) == h.integral_on(a, b)
        assert h.integral_on(0, 1) == h.integral()


class TestLattice:
    def test_abs_of_shifted_identity(self):
        assert abs(IDENTITY - Polygonal.constant(HALF)).eval(0) == HALF

    def test_min_with_constant_integral(self):
        # Ramp clipped at 1/2: area 1/8 below the crossing plus 1/4 after.
        assert IDENTITY.min_with(Polygonal.constant(HALF)).integral() == F(3, 8)

    def test_add_tents(self):
        assert (TENT + TENT).eval(HALF) == 2

    @given(polys(), polys(), st.sampled_from(["add", "sub", "min", "max", "abs"]),
           st.integers(0, 96))
    @settings(max_examples=150)
    def test_eval_agreement(self, h1, h2, op, num):
        x = F(num, 96)
        if op == "add":
            assert (h1 + h2).eval(x) == h1.eval(x) + h2.eval(x)
        elif op == "sub":
            assert (h1 - h2).eval(x) == h1.eval(x) - h2.eval(x)
        elif op == "min":
            assert h1.min_with(h2).eval(x) == min(h1.eval(x), h2.eval(x))
        elif op == "max":
            assert h1.max_with(h2).eval(x) == max(h1.eval(x), h2.eval(x))
        else:
            assert abs(h1).eval(x) == abs(h1.eval(x))

    @given(polys(), polys())
    @settings(max_examples=100)
    def test_linearity_exact(self, h1, h2):
        a, b = F(3, 5), F(-7, 4)
        assert (a * h1 + b * h2).integral() == a * h1.integral() + b * h2.integral()

    @given(polys())
    @settings(max_examples=100)
    def test_abs_integral_dominates(self, h):
        assert abs(h.integral()) <= abs(h).integral()

    def test_scale_negate(self):
        h = TENT * F(-2, 3)
        assert h.eval(HALF) == F(-2, 3)
        assert (-h).eval(HALF) == F(2, 3)


class TestCanonicalForm:
    def test_collinear_nodes_dropped(self):
        a = Polygonal([0, HALF, 1], [0, HALF, 1])
        assert a == IDENTITY
        assert len(a.xs) == 2

    def test_operator_results_compare_as_functions(self):
        assert TENT + TENT == TENT * 2
        assert IDENTITY - IDENTITY == Polygonal.constant(0)


class TestSublevel:
    def test_identity_half(self):
        u = sublevel(IDENTITY, HALF)
        assert u.ivs == ((F(0), HALF),)
        assert u.length == HALF

    def test_constant_below_threshold(self):
        u = sublevel(Polygonal.constant(1), 2)
        assert u.ivs == ((F(0), F(1)),)

    def test_tent_half(self):
        u = sublevel(TENT, HALF)
        assert u.ivs == ((F(0), F(1, 4)), (F(3, 4), F(1)))
        assert u.length == HALF

    def test_touch_point_excluded(self):
        # Dips to exactly theta at the midpoint: strictness splits the set.
        h = Polygonal.from_pairs([(0, 0), (HALF, HALF), (1, 0)])
        u = sublevel(h, HALF)
        assert u.ivs == ((F(0), HALF), (HALF, F(1)))
        assert not u.contains(HALF)

    @given(polys(lo=0, hi=32), st.fractions(min_value="1/32", max_value=3,
                                            max_denominator=64))
    @settings(max_examples=100)
    def test_chebyshev_bound(self, h, theta):
        u = sublevel(h, theta)
        assert u.length >= 1 - h.integral() / theta
        mid_ok = all(h.eval((a + b) / 2) < theta for a, b in u.ivs)
        assert mid_ok


class TestIndicator:
    def test_whole_interval_integral(self):
        ind = indicator_approx((0, 1), 4)
        assert ind.integral() == 1 - pow2(-6)
        assert ind.integral() >= 1 - pow2(-3)

    def test_integrals_converge_to_length(self):
        vals = [indicator_approx((HALF, 1), j).integral() for j in range(2, 12)]
        assert all(abs(v - HALF) <= pow2(-(j + 3)) for j, v in zip(range(2, 12), vals))

    def test_successive_l1_difference(self):
        a = indicator_approx((HALF, 1), 5)
        b = indicator_approx((HALF, 1), 6)
        gap = l1_distance(a, b)
        # Ramp geometry: half the coarse ramp width on each side.
        assert gap == HALF * pow2(-8)
        assert gap < pow2(-5)

    def test_values_in_unit_range(self):
        ind = indicator_approx(DyadicInterval(1, 2), 3)
        assert ind.min_value() == 0 and ind.max_value() == 1

    def test_union_indicator_additive(self):
        u = IntervalUnion(((F(1, 8), F(1, 4)), (HALF, F(3, 4))))
        ind = union_indicator(u, 4)
        parts = indicator_approx((F(1, 8), F(1, 4)), 4) + indicator_approx((HALF, F(3, 4)), 4)
        assert ind == parts


class TestL1Helpers:
    def test_l1_matches_generic_route(self):
        rng = random.Random(11)
        for _ in range(40):
            a, b = random_poly(rng), random_poly(rng)
            assert l1_distance(a, b) == abs(a - b).integral()

    def test_step_profile_closed_forms(self):
        coeffs = [F(k, 5) for k in range(8)]
        s = step_function(coeffs, 3, 4)
        assert isinstance(s, StepPolygonal)
        dense = Polygonal(s.xs, s.vs)
        assert s.integral() == dense.integral()
        for num in range(0, 25):
            x = F(num, 24)
            assert s.eval(x) == dense.eval(x)

    def test_l1_upper_dominates_exact(self):
        a = step_function([F(k, 9) for k in range(8)], 3, 5)
        b = step_function([F(k, 17) for k in range(16)], 4, 6)
        upper = l1_upper(a, b)
        assert upper is not None
        assert upper >= l1_distance(a, b)


class TestIntervalUnion:
    def test_lengths_and_ops(self):
        u = IntervalUnion(((F(0), F(1, 4)), (HALF, F(7, 8))))
        assert u.length == F(5, 8)
        v = u.intersect_interval(F(1, 8), F(3, 4))
        assert v.ivs == ((F(1, 8), F(1, 4)), (HALF, F(3, 4)))
        c = u.complement()
        assert c.length == 1 - u.length
        assert u.intersect(c).is_empty()

    def test_disjointness_enforced(self):
        with pytest.raises(ValueError):
            IntervalUnion(((F(0), HALF), (F(1, 4), F(3, 4))))

    def test_contains_is_strict(self):
        u = IntervalUnion(((F(1, 4), HALF),))
        assert u.contains(F(3, 8))
        assert not u.contains(F(1, 4))


class TestSerialization:
    def test_round_trip(self):
        h = Polygonal.from_pairs([(0, F(1, 3)), (F(2, 7), F(-5, 4)), (1, 0)])
        assert Polygonal.from_json(h.to_json()) == h

    def test_wire_format_is_rational_strings(self):
        pairs = TENT.to_pairs()
        assert pairs == [["0/1", "0/1"], ["1/2", "1/1"], ["1/1", "0/1"]]
