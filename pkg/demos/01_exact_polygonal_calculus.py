"""
Exact piecewise-linear calculus
===============================

Everything in this library runs on exact rationals.  Piecewise-linear
functions on [0, 1] form the workhorse algebra: evaluation, lattice
operations and integrals are all computed without any rounding.
"""

from fractions import Fraction as F

from almostfull import Polygonal, indicator_approx, pow2, sublevel

# The two basic shapes: the ramp x and the unit tent peaking at 1/2.
identity = Polygonal.identity()
tent = Polygonal.tent(F(1, 2))

print("integral of x          :", identity.integral())
print("integral of the tent   :", tent.integral())
print("tent evaluated at 1/4  :", tent.eval(F(1, 4)))

# Lattice operations insert crossing breakpoints exactly, so results are
# again piecewise linear and equality is equality of functions.
clipped = identity.min_with(Polygonal.constant(F(1, 2)))
print("ramp clipped at 1/2    :", clipped.integral(), "(= 3/8 exactly)")
print("|x - 1/2| at 0         :", abs(identity - Polygonal.constant(F(1, 2))).eval(0))
print("tent + tent == 2*tent  :", tent + tent == 2 * tent)

# Strict sublevel sets come out as finite unions of open rational intervals;
# for nonnegative functions their length obeys the Chebyshev bound.
region = sublevel(tent, F(1, 2))
print("where tent < 1/2       :", list(region.ivs))
print("total length           :", region.length)
wide = sublevel(tent, F(3, 4))
print("where tent < 3/4       : length", wide.length,
      ">= Chebyshev floor", 1 - tent.integral() / F(3, 4))

# Indicator approximants: trapezoids that converge to an interval's
# characteristic function with geometrically shrinking L1 steps.
for j in (2, 4, 6):
    ind = indicator_approx((F(1, 2), F(1)), j)
    print(f"indicator grid {j}: integral {ind.integral()} "
          f"(off by {F(1, 2) - ind.integral()} = half ramp width)")

print("L1 step bound at j=5   :", pow2(-5), ">", pow2(-9), "actual")
