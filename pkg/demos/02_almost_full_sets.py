"""
Almost-full sets and certified points
=====================================

A regular sequence is a stack of nonnegative piecewise-linear functions
whose integrals decay below 2**-n.  The points where the series of values
stays bounded form an almost-full subset of [0, 1]; a pair (x, gamma)
bounding every partial sum is a checkable membership witness.
"""

from fractions import Fraction as F

from almostfull import (Polygonal, RegularSeq, geometric_decay,
                        intersect_pair, point_avoiding_seq, point_in_pps,
                        rat_approx, realize_point, witness_precision)

# Unit-height tents shrinking around 1/2: the series diverges exactly there,
# so the almost-full set is "everything but the midpoint", with witnesses
# quantifying how far a point stays from it.
spikes = RegularSeq(lambda n: Polygonal.tent(F(1, 2), 1, F(1, 2 ** (n + 2))),
                    name="spikes")
w = point_in_pps(spikes)
x = rat_approx(w.x, 30)
print("realized point      :", float(x))
print("distance from 1/2   :", float(abs(x - F(1, 2))))
ok, err = w.verify(spikes, depth=20, precision=witness_precision(spikes, 20, 30))
print("witness verifies    :", ok, "accumulated error", float(err))

# Realization with a target function: find a point where the whole series
# stays strictly below h.  Here the series sums to 1 - 2|x - 1/2| < 1 = h(x).
flat_tents = RegularSeq(lambda n: Polygonal.tent(F(1, 2), F(1, 2 ** (n + 1)), F(1, 2)),
                        name="flat")
realized = realize_point(Polygonal.constant(1), flat_tents, 2)
print("realization margin  :", realized.margin, "series bound", float(realized.bound))

# Intersections of almost-full sets are almost full again; witnesses
# transport to each row with an explicit factor.
edges = point_avoiding_seq([F(0), F(1)])
both = intersect_pair(spikes, edges)
wb = point_in_pps(both)
print("pair witness        :", float(rat_approx(wb.x, 20)), "gamma", wb.gamma)

# Geometric refinement: any regular sequence can be repackaged so members
# decay like (3/4)**n pointwise on a slightly smaller almost-full set.
dec, transport = geometric_decay(spikes)
wd = point_in_pps(dec)
print("decay bound at n=6  :", float(transport(wd, 6)))
print("term value there    :",
      float(spikes.term(6).eval(min(max(rat_approx(wd.x, 25), F(0)), F(1)))))
