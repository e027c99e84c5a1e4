"""
Summable functions and the Lebesgue integral
============================================

A summable function carries polygonal approximants with exactly certified
L1 decay; its integral is the limit of the approximant integrals and every
reported value comes with a hard error bound.  Measurable sets are the
0/1-valued case, and limits of L1-fast sequences stay summable.
"""

from fractions import Fraction as F

from almostfull import (IntervalUnion, Polygonal, Summable,
                        ae_zero_of_null_integral, char_of_interval_union,
                        countable_set_intersection, full_measure_to_pps,
                        limit_of_summables, point_in_positive_set, point_in_pps,
                        pow2, rat_approx)
from almostfull.catalog import get_entry

# The catalog's square entry approximates x**2 by interpolants on 2**n
# uniform pieces; the decay chain is exact (gap at n is 4**-n/8).
square = get_entry("square").summable
print("integral of x^2 at p=16 :", square.integral(16))
print("report                  :", square.integral_report(10))

# Measurable sets: the characteristic of (1/2, 1) built from indicator
# approximants has measure exactly the interval length in the limit.
upper = char_of_interval_union(IntervalUnion(((F(1, 2), F(1)),)), name="upper")
print("measure of (1/2,1) p=12 :", upper.measure(12))
w = point_in_positive_set(upper)
print("a point of the set      :", float(rat_approx(w.x, 12)))

# Limits: partial sums of a lacunary tent series converge in L1; the limit's
# integral tracks the series within the reported precision.
def bump(j):
    a, b = 1 - pow2(-j), 1 - pow2(-(j + 1))
    return Polygonal.tent((a + b) / 2, 1, (b - a) / 2) * pow2(-j)

terms = [bump(j) for j in range(1, 12)]

def partial(n):
    out = terms[0]
    for t in terms[1:n + 1]:
        out = out + t
    return out

series = limit_of_summables(
    lambda n: Summable.from_polygonal(partial(min(n, len(terms) - 1))),
    name="series")
print("series integral at p=10 :", float(series.integral(10)))

# A nonnegative function with null integral vanishes almost everywhere: the
# returned almost-full set avoids the shrinking spike at 1/2.
from almostfull import AEFunction, CReal, RegularSeq  # noqa: E402

spike = Summable(
    AEFunction(RegularSeq.zero(), lambda wit: CReal.from_rational(0)),
    lambda n: Polygonal.tent(F(1, 2), 1, pow2(-(n + 1))), name="spike")
null_region = ae_zero_of_null_integral(spike, 10)
wz = point_in_pps(null_region)
print("null-set point          :", float(rat_approx(wz.x, 20)),
      "(away from the spike at 1/2)")

# A set of certified full measure contains an almost-full set; a countable
# intersection with summable defects keeps an explicit measure floor.
whole = char_of_interval_union(IntervalUnion(((F(0), F(1)),)), name="whole")
inside = full_measure_to_pps(whole, 12)
print("full-measure point      :", float(rat_approx(point_in_pps(inside).x, 12)))

holes = [F(2 * n + 3, 32) for n in range(4)]

def punctured(n):
    p = holes[n % len(holes)]
    r = F(1, 4 ** (n + 1)) / 2
    return char_of_interval_union(IntervalUnion(((F(0), p - r), (p + r, F(1)))))

meet, floor = countable_set_intersection(
    punctured, lambda n: F(1, 4 ** (n + 1)), lambda n: F(1, 3 * 4 ** (n + 1)))
print("intersection floor      :", floor, "measured:", float(meet.measure(8)))
