"""Dyadic sampling nets and the Riemann-to-Lebesgue conversion.

For an a.e.-defined function f this module builds the chain of derived
objects used to integrate it through Riemann-style sampling: sublevel sets
of the domain sequence (almost-full up to geometric defects), their finite
intersections, a decidable positivity relation for dyadic cells, memoized
sample points, step-function nets indexed by a directed set of refined
dyadic partitions, and finally the conversion of a mean-Cauchy net into a
summable function with a sampled equality verification.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from threading import RLock
from typing import Callable, Optional
from weakref import WeakKeyDictionary

from .aefunc import (AEFunction, MeasurableSet, Summable, certify_l1_gap,
                     char_of_interval_union, limit_of_summables,
                     point_in_positive_set)
from .errors import BudgetExhausted, CertificationError
from .exact import CReal, budget_cap, pow2, rat_approx, to_ratstr
from .polygonal import (IntervalUnion, Polygonal, l1_distance, l1_upper,
                        step_function, sublevel)
from .regular import (DomainWitness, RegularSeq, intersect_pair,
                      point_avoiding_seq, realize_point, row_witness)

ZERO = Fraction(0)
ONE = Fraction(1)
TWO_THIRDS = Fraction(2, 3)
THREE_QUARTERS = Fraction(3, 4)


@dataclass(frozen=True)
class NetIndex:
    """Member of the directed set of refined dyadic partitions.

    ``level`` is the coarse partition exponent m; ``cells[l]`` is a triple
    ``(k, m_l, n_l)`` naming a refined subcell of the l-th coarse cell and
    the depth of the intersection set used to place its sample point.
    Indices compare by level alone.
    """

    level: int
    cells: tuple

    def __post_init__(self):
        if self.level < 0:
            raise ValueError("net level must be >= 0")
        if len(self.cells) != (1 << self.level):
            raise ValueError("need one cell triple per coarse cell")
        for l, (k, ml, nl) in enumerate(self.cells):
            if ml < self.level:
                raise ValueError(f"cell {l}: refinement level {ml} below net level")
            if nl < 0:
                raise ValueError(f"cell {l}: negative depth")
            ratio = 1 << (ml - self.level)
            if not l * ratio <= k < (l + 1) * ratio:
                raise ValueError(f"cell {l}: subcell {k} at level {ml} not inside")

    @staticmethod
    def uniform(level: int, depth: int) -> "NetIndex":
        """Canonical index: each coarse cell sampled at its own level."""
        cells = tuple((l, level, depth) for l in range(1 << level))
        return NetIndex(level=level, cells=cells)

    @staticmethod
    def canonical(level: int) -> "NetIndex":
        return NetIndex.uniform(level, level)

    def is_above(self, other: "NetIndex") -> bool:
        return self.level > other.level


@dataclass(frozen=True)
class RiemannCertificate:
    """Mean-convergence modulus: for each eps a net index above which all
    pairs of nets are within eps in L1."""

    modulus: Callable[[Fraction], NetIndex]

    def __call__(self, eps) -> NetIndex:
        return self.modulus(Fraction(eps))


@dataclass(frozen=True)
class GammaInfo:
    """Finite realization of an intersection set with exact accounting."""

    set: MeasurableSet
    union: IntervalUnion
    lower_bound: Fraction
    tail: Fraction
    prefix: int


def _cell_bounds(k: int, m: int):
    return Fraction(k, 1 << m), Fraction(k + 1, 1 << m)


class Bridge:
    """Net machinery for one a.e.-defined function, with write-once memo tables."""

    def __init__(self, f: AEFunction, name: str = ""):
        self.f = f
        self.name = name or f.name or "f"
        self._lock = RLock()
        self._delta_unions: dict[int, IntervalUnion] = {}
        self._gamma_unions: dict[tuple, IntervalUnion] = {}
        self._gamma_depths: dict[tuple, int] = {}
        self._theta: dict[tuple, bool] = {}
        self._zeta: dict[tuple, DomainWitness] = {}
        self._nets: dict[NetIndex, Summable] = {}

    # -- sublevel sets and intersections -------------------------------------------

    def delta_union(self, n: int) -> IntervalUnion:
        """Carrier of the n-th sublevel set, where h_n < (2/3)**n."""
        with self._lock:
            got = self._delta_unions.get(n)
            if got is None:
                got = sublevel(self.f.domain.term(n), TWO_THIRDS ** n)
                self._delta_unions[n] = got
            return got

    def delta(self, n: int) -> MeasurableSet:
        """Measurable sublevel set; its exact length beats 1 - (3/4)**n."""
        return char_of_interval_union(self.delta_union(n),
                                      extra_domain=self.f.domain,
                                      name=f"delta({self.name},{n})")

    def delta_defect(self, n: int) -> Fraction:
        return 1 - self.delta_union(n).length

    def gamma_depth(self, m: int, n: int) -> int:
        """Prefix making the unrealized tail at most a quarter cell area."""
        key = (m, n)
        got = self._gamma_depths.get(key)
        if got is None:
            allow = pow2(-2 * m) / 4
            k = max(n, 0)
            tail = 3 * THREE_QUARTERS ** k
            while tail > allow:
                k += 1
                tail = tail * 3 / 4
            got = self._gamma_depths[key] = k
        return got

    def gamma_union(self, n: int, prefix: int) -> IntervalUnion:
        with self._lock:
            got = self._gamma_unions.get((n, prefix))
            if got is None:
                if prefix < n:
                    raise ValueError("prefix must be at least the start index")
                if prefix > n:
                    got = self.gamma_union(n, prefix - 1).intersect(self.delta_union(prefix))
                else:
                    got = self.delta_union(n)
                self._gamma_unions[(n, prefix)] = got
            return got

    def gamma(self, n: int, prefix: Optional[int] = None) -> GammaInfo:
        """Finite realization of the tail intersection of sublevel sets.

        The reported lower bound charges the exact defects of the realized
        prefix plus the geometric tail, and always exceeds 1 - 4*(3/4)**n.
        """
        if prefix is None:
            prefix = self.gamma_depth(max(n, 4), n)
        union = self.gamma_union(n, prefix)
        defects = sum((self.delta_defect(k) for k in range(n, prefix + 1)), ZERO)
        tail = 3 * THREE_QUARTERS ** prefix
        ms = char_of_interval_union(union, extra_domain=self.f.domain,
                                    name=f"gamma({self.name},{n})")
        return GammaInfo(set=ms, union=union, lower_bound=1 - defects - tail,
                         tail=tail, prefix=prefix)

    # -- the decidable cell relation ------------------------------------------------

    def theta(self, k: int, m: int, n: int) -> bool:
        """Decide whether a cell meets the intersection set substantially.

        The measure of the cell's intersection with the realized prefix set
        overestimates the true one by at most 4**-m/4; thresholding at
        4**-m/2 therefore guarantees: positive answers have true measure
        above 4**-m/4, negative answers below 4**-m.
        """
        if not 0 <= k < (1 << m):
            raise ValueError(f"cell index {k} out of range at level {m}")
        if self.f.domain.always_zero:
            # Sublevel sets are the whole interval, so every cell passes.
            return True
        key = (k, m, n)
        with self._lock:
            got = self._theta.get(key)
            if got is None:
                depth = self.gamma_depth(m, n)
                lo, hi = _cell_bounds(k, m)
                mu = self.gamma_union(n, depth).intersect_interval(lo, hi).length
                got = mu > pow2(-2 * m) / 2
                self._theta[key] = got
            return got

    # -- sample points ------------------------------------------------------------

    def zeta(self, k: int, m: int, n: int) -> DomainWitness:
        """Memoized sample point for a cell triple, with a domain witness for f.

        Cells passing ``theta`` sample inside the cell's intersection with
        the realized set; others sample anywhere in the cell's part of the
        function's domain.
        """
        key = (k, m, n)
        with self._lock:
            got = self._zeta.get(key)
            if got is None:
                got = self._realize_zeta(k, m, n)
                self._zeta[key] = got
            return got

    def _realize_zeta(self, k: int, m: int, n: int) -> DomainWitness:
        if self.f.domain.always_zero:
            # Same point the generic route selects: a third into the cell.
            candidate = Fraction(3 * k + 1, 3 << m)
            return DomainWitness(x=CReal.from_rational(candidate), gamma=ZERO)
        lo, hi = _cell_bounds(k, m)
        if self.theta(k, m, n):
            depth = self.gamma_depth(m, n)
            union = self.gamma_union(n, depth).intersect_interval(lo, hi)
            a, b = union.largest_component()
            candidate = a + (b - a) / 3
            prof = self.f.domain.profile_at(candidate)
            if prof is not None:
                return DomainWitness(x=CReal.from_rational(candidate),
                                     gamma=prof.total)
            ms = char_of_interval_union(union, extra_domain=self.f.domain,
                                        name=f"cell({k},{m},{n})")
            w_pair = point_in_positive_set(ms, prefix=2 * m + 8)
            return row_witness(w_pair, 1)
        # Otherwise: any point of the cell that lies in the domain.
        candidate = lo + (hi - lo) / 3
        prof = self.f.domain.profile_at(candidate)
        if prof is not None:
            return DomainWitness(x=CReal.from_rational(candidate), gamma=prof.total)
        shift = 2 * m + 6
        bump = _cell_trapezoid(lo, hi)
        realized = realize_point(bump, self.f.domain.shifted(shift), shift)
        extra = sum((self.f.domain.term(i).max_value() for i in range(shift)), ZERO)
        return DomainWitness(x=realized.point, gamma=realized.bound + extra)

    # -- nets ---------------------------------------------------------------------

    def net(self, alpha: NetIndex) -> Summable:
        """Step-function net: cell plateaus carry sampled function values.

        Coefficients are the sample values rounded at precision
        ``level + 4``, so the step integral matches the exact sampled sum to
        within the net's own resolution.
        """
        with self._lock:
            got = self._nets.get(alpha)
            if got is not None:
                return got
        m = alpha.level
        precision = m + 4
        coeffs = []
        for (k, ml, nl) in alpha.cells:
            w = self.zeta(k, ml, nl)
            coeffs.append(rat_approx(self.f.eval(w), precision))
        coeffs = tuple(coeffs)
        cell = pow2(-m)
        boundaries = [l * cell for l in range(1, 1 << m)]
        avoid = point_avoiding_seq(boundaries, name=f"grid({m})") if boundaries \
            else RegularSeq.zero()
        dom = intersect_pair(avoid, self.f.domain, name=f"netdom({m})")

        def evaluator(wit: DomainWitness) -> CReal:
            state: list = []

            def decide() -> Fraction:
                if state:
                    return state[0]
                cap = budget_cap(4096)
                p = m + 2
                while p <= cap:
                    xt = wit.x.approx(p)
                    if xt < 0:
                        xt = ZERO
                    elif xt > 1:
                        xt = ONE
                    r = pow2(-p)
                    idx = int(xt * (1 << m))
                    if idx >= (1 << m):
                        idx = (1 << m) - 1
                    lo = idx * cell
                    hi = lo + cell
                    if lo + r < xt < hi - r:
                        state.append(coeffs[idx])
                        return coeffs[idx]
                    p += 2
                raise BudgetExhausted("cell location exceeded the budget", needed=cap)

            return CReal(lambda q: decide())

        base = AEFunction(dom, evaluator, name=f"net({self.name},m={m})")
        out = Summable(base, lambda j: step_function(coeffs, m, j),
                       agreement=dom, name=base.name)
        out.coefficient_sum = sum(coeffs, ZERO) * cell
        with self._lock:
            return self._nets.setdefault(alpha, out)

    def coefficient_sum(self, alpha: NetIndex) -> Fraction:
        """Exact sampled sum ``sum_l f~(zeta_l) * 2**-level``."""
        return self.net(alpha).coefficient_sum

    # -- probing and conversion ------------------------------------------------------

    def random_above(self, rng: random.Random, alpha: NetIndex,
                     spread: int = 2) -> NetIndex:
        """A random refinement strictly above alpha in the direction order."""
        m = alpha.level + rng.randint(1, spread)
        cells = []
        for l in range(1 << m):
            extra = rng.randint(0, 1)
            ml = m + extra
            ratio = 1 << (ml - m)
            k = l * ratio + rng.randrange(ratio)
            cells.append((k, ml, ml))
        return NetIndex(level=m, cells=tuple(cells))

    def cauchy_probe(self, alpha: NetIndex, trials: int, precision: int,
                     seed: int, spread: int = 2) -> dict:
        """Sampled falsification probe for mean-Cauchy behaviour above alpha.

        Universal quantification is the certificate's business; this reports
        the maximum observed L1 distance between random pairs of nets.
        """
        rng = random.Random(seed)
        gaps = []
        for _ in range(trials):
            a1 = self.random_above(rng, alpha, spread)
            a2 = self.random_above(rng, alpha, spread)
            gap = (self.net(a1) - self.net(a2)).abs().integral(precision)
            gaps.append(gap)
        return {
            "alpha_level": alpha.level,
            "trials": trials,
            "precision": precision,
            "seed": seed,
            "gaps": [to_ratstr(g) for g in gaps],
            "max_gap": to_ratstr(max(gaps) if gaps else ZERO),
        }

    def to_lebesgue(self, cert: RiemannCertificate, name: str = "") -> Summable:
        """Summable limit of the net sequence selected by the certificate.

        Selects nets just above ``cert(2**-(j+1))`` with non-decreasing
        levels; successive L1 bounds are certified exactly as the limit's
        terms materialize, and a failure names the offending index.
        """
        chosen: list[NetIndex] = []
        lock = RLock()

        def alpha(j: int) -> NetIndex:
            with lock:
                while len(chosen) <= j:
                    jj = len(chosen)
                    base = cert(pow2(-(jj + 1)))
                    lvl = base.level + 1
                    if chosen:
                        lvl = max(lvl, chosen[-1].level)
                    chosen.append(NetIndex.uniform(lvl, lvl))
                return chosen[j]

        return limit_of_summables(lambda j: self.net(alpha(j)),
                                  name=name or f"lebesgue({self.name})")

    def equality_check(self, g: Summable, n: int, samples: int, q: int,
                       seed: int, rungs: Optional[int] = None,
                       level_cap: Optional[int] = None) -> dict:
        """Sampled verification that f and its converted limit agree.

        Builds the refinement ladder of nets at the fixed depth n with
        exactly certified L1 steps, realizes fresh witness points in cells
        that pass ``theta`` (offset away from every sample point used by the
        nets), and compares f against g's approximant at grid q+2.  The
        equality region itself is never constructed; the report carries the
        pass fraction and the ladder data.
        """
        if rungs is None:
            rungs = 8
        if level_cap is None:
            level_cap = max(n, 4) + rungs + 8
        ladder_levels = [max(n, 1)]
        gaps: list[Fraction] = []
        prev = self.net(NetIndex.uniform(ladder_levels[0], n))
        for k in range(1, rungs + 1):
            bound = pow2(-(k - 1))
            m_try = ladder_levels[-1] + 1
            placed = False
            while m_try <= level_cap:
                cand = self.net(NetIndex.uniform(m_try, n))
                try:
                    at = certify_l1_gap(cand, prev, bound, cap=24)
                except BudgetExhausted:
                    m_try += 1
                    continue
                gap = l1_upper(cand.term(at), prev.term(at))
                if gap is None:
                    gap = l1_distance(cand.term(at), prev.term(at))
                ladder_levels.append(m_try)
                gaps.append(gap)
                prev = cand
                placed = True
                break
            if not placed:
                raise CertificationError(
                    f"ladder step {k} unachievable below level {level_cap}",
                    index=k)

        rng = random.Random(seed)
        m_s = ladder_levels[min(2, len(ladder_levels) - 1)]
        positive = [l for l in range(1 << m_s) if self.theta(l, m_s, n)]
        while len(positive) < samples:
            m_s += 1
            if m_s > level_cap:
                raise CertificationError("not enough positive cells for sampling")
            positive = [l for l in range(1 << m_s) if self.theta(l, m_s, n)]
        chosen = rng.sample(positive, samples)
        g_grid = g.term(q + 2)
        depth = self.gamma_depth(m_s, n)
        rows = []
        passes = 0
        for l in sorted(chosen):
            lo, hi = _cell_bounds(l, m_s)
            union = self.gamma_union(n, depth).intersect_interval(lo, hi)
            a, b = union.largest_component()
            t = rng.randrange(32)
            xi = a + (b - a) * Fraction(3 * t + 1, 96)
            prof = self.f.domain.profile_at(xi)
            if prof is not None:
                wit = DomainWitness(x=CReal.from_rational(xi), gamma=prof.total)
            else:
                ms = char_of_interval_union(union, extra_domain=self.f.domain,
                                            name=f"sample({l},{m_s},{n})")
                wit = row_witness(point_in_positive_set(ms, prefix=2 * m_s + 8), 1)
                xi = None
            f_val = self.f.eval(wit).approx(q + 2)
            x_for_g = xi if xi is not None else wit.x.approx(q + m_s + 8)
            if x_for_g < 0:
                x_for_g = ZERO
            elif x_for_g > 1:
                x_for_g = ONE
            g_val = g_grid.eval(x_for_g)
            diff = abs(f_val - g_val)
            ok = diff <= pow2(-q)
            passes += ok
            rows.append({
                "cell": [l, m_s],
                "point": to_ratstr(x_for_g),
                "f": to_ratstr(f_val),
                "g": to_ratstr(g_val),
                "diff": to_ratstr(diff),
                "pass": bool(ok),
            })
        return {
            "depth": n,
            "samples": samples,
            "q": q,
            "seed": seed,
            "ladder_levels": ladder_levels,
            "ladder_gaps": [to_ratstr(x) for x in gaps],
            "sample_rows": rows,
            "passes": passes,
            "pass_fraction": to_ratstr(Fraction(passes, samples)),
        }


def _cell_trapezoid(lo: Fraction, hi: Fraction) -> Polygonal:
    """Plateau bump supported inside (lo, hi), integral 3/4 of the length."""
    w = (hi - lo) / 4
    xs = [ZERO] if lo > 0 else []
    vs = [ZERO] if lo > 0 else []
    xs += [lo, lo + w, hi - w, hi]
    vs += [ZERO, ONE, ONE, ZERO]
    if hi < 1:
        xs.append(ONE)
        vs.append(ZERO)
    return Polygonal(tuple(xs), tuple(vs))


_BRIDGES: "WeakKeyDictionary[AEFunction, Bridge]" = WeakKeyDictionary()
_BRIDGE_LOCK = RLock()


def bridge_for(f: AEFunction) -> Bridge:
    """The write-once bridge cache for a function."""
    with _BRIDGE_LOCK:
        got = _BRIDGES.get(f)
        if got is None:
            got = _BRIDGES[f] = Bridge(f)
        return got


def build_delta(f: AEFunction, n: int) -> MeasurableSet:
    return bridge_for(f).delta(n)


def build_gamma(f: AEFunction, n: int, prefix: Optional[int] = None) -> GammaInfo:
    return bridge_for(f).gamma(n, prefix)


def theta_membership(f: AEFunction, k: int, m: int, n: int) -> bool:
    return bridge_for(f).theta(k, m, n)


def sample_zeta(f: AEFunction, k: int, m: int, n: int) -> DomainWitness:
    return bridge_for(f).zeta(k, m, n)


def net_function(f: AEFunction, alpha: NetIndex) -> Summable:
    return bridge_for(f).net(alpha)


def mean_cauchy_probe(f: AEFunction, alpha: NetIndex, trials: int,
                      precision: int = 10, seed: int = 0) -> dict:
    return bridge_for(f).cauchy_probe(alpha, trials, precision, seed)


def convert_to_lebesgue(f: AEFunction, cert: RiemannCertificate,
                        name: str = "") -> Summable:
    return bridge_for(f).to_lebesgue(cert, name)


def equality_region_check(f: AEFunction, g: Summable, n: int, samples: int,
                          q: int = 10, seed: int = 0) -> dict:
    return bridge_for(f).equality_check(g, n, samples, q, seed)
