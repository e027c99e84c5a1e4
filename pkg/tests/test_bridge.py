"""Net machinery: sublevel sets, cell relation, sample points, conversion."""

from fractions import Fraction

import pytest

from almostfull import (Bridge, CertificationError, IntervalUnion, NetIndex,
                        RiemannCertificate, Summable, build_delta, build_gamma,
                        from_ratstr, mean_cauchy_probe, net_function, pow2,
                        rat_approx, sample_zeta, theta_membership,
                        witness_precision)
from almostfull.catalog import get_bridge, get_entry

F = Fraction
HALF = F(1, 2)
THREE_QUARTERS = F(3, 4)


class TestNetIndex:
    def test_canonical_shape(self):
        alpha = NetIndex.canonical(3)
        assert alpha.level == 3
        assert len(alpha.cells) == 8
        assert alpha.cells[5] == (5, 3, 3)

    def test_validation(self):
        with pytest.raises(ValueError):
            NetIndex(level=2, cells=((0, 2, 2),) * 3)
        with pytest.raises(ValueError):
            NetIndex(level=1, cells=((0, 1, 1), (0, 1, 1)))
        with pytest.raises(ValueError):
            NetIndex(level=1, cells=((0, 0, 1), (1, 1, 1)))

    def test_order_by_level(self):
        assert NetIndex.canonical(4).is_above(NetIndex.canonical(3))
        assert not NetIndex.canonical(3).is_above(NetIndex.canonical(3))


class TestDelta:
    def test_full_for_total_function(self):
        d = build_delta(get_entry("identity").function, 4)
        assert d.support == IntervalUnion.whole()

    def test_exact_length_bound(self):
        bridge = get_bridge("ae-step")
        for n in range(13):
            length = bridge.delta_union(n).length
            assert length > 1 - THREE_QUARTERS ** n

    def test_level_zero_vacuous_strength(self):
        bridge = get_bridge("ae-step")
        assert bridge.delta_union(0).length > 0

    def test_sublevel_property(self):
        bridge = get_bridge("ae-step")
        for n in (2, 4):
            h = bridge.f.domain.term(n)
            theta = F(2, 3) ** n
            for a, b in bridge.delta_union(n).ivs:
                assert h.eval((a + b) / 2) < theta


class TestGamma:
    def test_reported_bound_formula(self):
        bridge = get_bridge("ae-step")
        for n in range(9):
            info = bridge.gamma(n)
            defects = sum((1 - bridge.delta_union(k).length
                           for k in range(n, info.prefix + 1)), F(0))
            assert info.lower_bound == 1 - defects - info.tail
            assert info.lower_bound > 1 - 4 * THREE_QUARTERS ** n

    def test_full_rows_give_full_measure(self):
        info = build_gamma(get_entry("identity").function, 3)
        assert info.union == IntervalUnion.whole()
        assert abs(info.set.measure(8) - 1) <= pow2(-8)

    def test_geometric_tail_identity(self):
        # The infinite defect series sums to 4*(3/4)**n exactly.
        n = 5
        series = sum((THREE_QUARTERS ** k for k in range(n, 60)), F(0))
        assert series == 4 * (THREE_QUARTERS ** n - THREE_QUARTERS ** 60)

    def test_catalog_measure_estimate(self):
        bridge = get_bridge("ae-step")
        info = bridge.gamma(2)
        assert info.set.measure(10) >= info.union.length - pow2(-9)


class TestTheta:
    def test_full_set_positive(self):
        f = get_entry("identity").function
        for m in (1, 3, 5):
            for k in (0, (1 << m) - 1):
                assert theta_membership(f, k, m, 2)

    def test_cell_inside_gap_negative(self):
        bridge = get_bridge("ae-step")
        # The level-2 sublevel set excludes a neighbourhood of the midpoint
        # wide enough to swallow the cell just left of it at level 6.
        assert not bridge.theta(31, 6, 2)
        assert bridge.theta(0, 6, 2)

    def test_memoized_decision_stable(self):
        bridge = get_bridge("ae-step")
        first = [bridge.theta(k, 4, 3) for k in range(16)]
        second = [bridge.theta(k, 4, 3) for k in range(16)]
        assert first == second

    def test_two_sided_guarantee_against_oracle(self):
        for name in ("ae-step", "char-upper-half"):
            bridge = get_bridge(name)
            for m in range(1, 7):
                cell_area = pow2(-2 * m)
                for n in range(5):
                    deep = bridge.gamma_depth(m, n) + 16
                    tail = 3 * THREE_QUARTERS ** deep
                    for k in range(1 << m):
                        lo, hi = F(k, 1 << m), F(k + 1, 1 << m)
                        mu_hi = bridge.gamma_union(n, deep) \
                            .intersect_interval(lo, hi).length
                        if bridge.theta(k, m, n):
                            assert mu_hi - tail > cell_area / 4
                        else:
                            assert mu_hi - tail <= cell_area / 2

    def test_bad_cell_rejected(self):
        with pytest.raises(ValueError):
            theta_membership(get_entry("identity").function, 4, 2, 1)


class TestZeta:
    def test_interior_of_cell(self):
        f = get_entry("identity").function
        w = sample_zeta(f, 5, 3, 3)
        x = rat_approx(w.x, 10)
        assert F(5, 8) < x < F(6, 8)

    def test_memoized_point_stable(self):
        f = get_entry("identity").function
        assert sample_zeta(f, 2, 2, 2) is sample_zeta(f, 2, 2, 2)

    def test_negative_cell_uses_domain(self):
        bridge = get_bridge("ae-step")
        assert not bridge.theta(31, 6, 2)
        w = bridge.zeta(31, 6, 2)
        x = rat_approx(w.x, 15)
        assert F(31, 64) < x < F(32, 64)
        prec = witness_precision(bridge.f.domain, 15, 25)
        ok, _ = w.verify(bridge.f.domain, 15, prec)
        assert ok

    def test_step_cells_avoid_midpoint(self):
        bridge = get_bridge("ae-step")
        for m in (3, 4):
            for k in ((1 << (m - 1)) - 1, 1 << (m - 1)):
                w = bridge.zeta(k, m, m)
                x = rat_approx(w.x, 25)
                assert abs(x - HALF) > pow2(-24)


class TestNets:
    def test_constant_net(self):
        f = get_entry("constant")
        net = net_function(f.function, NetIndex.canonical(3))
        assert abs(net.integral(8) - 1) <= pow2(-8)

    def test_identity_bracket_m3(self):
        bridge = get_bridge("identity")
        net = bridge.net(NetIndex.canonical(3))
        lower = sum(F(l, 8) for l in range(8)) / 8
        upper = sum(F(l + 1, 8) for l in range(8)) / 8
        assert lower == F(7, 16) and upper == F(9, 16)
        assert lower <= net.coefficient_sum <= upper
        assert lower - pow2(-7) <= net.integral(8) <= upper + pow2(-7)

    def test_identity_refinement(self):
        bridge = get_bridge("identity")
        net = bridge.net(NetIndex.canonical(6))
        assert abs(net.integral(10) - HALF) <= pow2(-6) + pow2(-8)

    def test_monotone_bracket_all_levels(self):
        bridge = get_bridge("identity")
        for m in (2, 4, 5):
            net = bridge.net(NetIndex.canonical(m))
            lower = sum(F(l, 1 << m) for l in range(1 << m)) * pow2(-m)
            upper = lower + pow2(-m)
            assert lower <= net.coefficient_sum <= upper

    def test_step_evaluator_reads_plateau(self):
        bridge = get_bridge("ae-step")
        net = bridge.net(NetIndex.canonical(3))
        w = bridge.zeta(6, 3, 3)
        assert abs(net.eval(w).approx(6) - 1) <= pow2(-6)


class TestCauchyProbe:
    def test_constant_gap_zero(self):
        rep = mean_cauchy_probe(get_entry("constant").function,
                                NetIndex.canonical(2), trials=4,
                                precision=8, seed=3)
        assert from_ratstr(rep["max_gap"]) <= pow2(-6)

    def test_identity_shrinks(self):
        rep = mean_cauchy_probe(get_entry("identity").function,
                                NetIndex.canonical(4), trials=8,
                                precision=8, seed=3)
        assert from_ratstr(rep["max_gap"]) < pow2(-3)

    def test_oscillator_does_not_shrink(self):
        f = get_entry("osc").function
        for m in (3, 5):
            rep = mean_cauchy_probe(f, NetIndex.canonical(m), trials=6,
                                    precision=8, seed=3)
            assert from_ratstr(rep["max_gap"]) > F(1, 8)

    def test_deterministic_given_seed(self):
        f = get_entry("identity").function
        a = mean_cauchy_probe(f, NetIndex.canonical(3), trials=5,
                              precision=8, seed=11)
        b = mean_cauchy_probe(f, NetIndex.canonical(3), trials=5,
                              precision=8, seed=11)
        assert a == b


class TestConversion:
    def test_identity_integral(self):
        e = get_entry("identity")
        g = get_bridge("identity").to_lebesgue(e.certificate)
        assert abs(g.integral(10) - HALF) <= pow2(-10)

    def test_step_integral(self):
        e = get_entry("ae-step")
        g = get_bridge("ae-step").to_lebesgue(e.certificate)
        assert abs(g.integral(10) - HALF) <= pow2(-10)

    def test_three_piece_matches_exact(self):
        e = get_entry("three-piece")
        g = get_bridge("three-piece").to_lebesgue(e.certificate)
        assert abs(g.integral(10) - e.expected) <= pow2(-10)

    def test_idempotent_on_summable(self):
        e = get_entry("tent")
        g = get_bridge("tent").to_lebesgue(e.certificate)
        for p in (4, 6):
            assert abs(g.integral(p) - e.summable.integral(p)) <= pow2(-p + 2)

    def test_defective_certificate_rejected(self):
        # A certificate claiming mean convergence for the oscillator lies:
        # successive net distances stay large, so gap certification fails.
        bridge = Bridge(get_entry("osc").function, name="defect")
        cert = RiemannCertificate(
            modulus=lambda eps: NetIndex.canonical(
                max(1, (1 / eps).numerator.bit_length())))
        g = bridge.to_lebesgue(cert)
        with pytest.raises(CertificationError) as err:
            g.integral(6)
        assert err.value.index is not None


class TestEqualityCheck:
    def test_identity_all_pass(self):
        e = get_entry("identity")
        bridge = get_bridge("identity")
        g = bridge.to_lebesgue(e.certificate)
        rep = bridge.equality_check(g, n=3, samples=8, q=10, seed=5)
        assert rep["passes"] == 8
        assert rep["pass_fraction"] == "1/1"
        assert len(rep["ladder_levels"]) == len(rep["ladder_gaps"]) + 1
        for k, gap in enumerate(rep["ladder_gaps"]):
            assert from_ratstr(gap) < pow2(-k)

    def test_step_all_pass(self):
        e = get_entry("ae-step")
        bridge = get_bridge("ae-step")
        g = bridge.to_lebesgue(e.certificate)
        rep = bridge.equality_check(g, n=3, samples=16, q=10, seed=7)
        assert rep["passes"] == 16

    def test_corrupted_limit_fails(self):
        e = get_entry("ae-step")
        bridge = get_bridge("ae-step")
        g = bridge.to_lebesgue(e.certificate)
        bad = g + Summable.constant(F(1, 4))
        rep = bridge.equality_check(bad, n=3, samples=8, q=10, seed=7)
        assert rep["passes"] == 0
