"""Almost-everywhere-defined functions, summability, and measurable sets.

An ``AEFunction`` pairs a regular sequence (whose almost-full set is the
function's domain) with an evaluator from domain witnesses to certified
reals.  A ``Summable`` adds an approximating sequence of polygonals whose
successive L1 distances decay below ``2**-n``; its integral is the limit of
the polygonal integrals and is reported with an explicit tail bound.  All
decay conditions are checked exactly in rational arithmetic when terms
materialize.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from threading import RLock
from typing import Callable, Optional, Sequence

from .errors import BudgetExhausted, CertificationError
from .exact import CReal, budget_cap, ceil_log2, pow2, to_ratstr
from .polygonal import (IntervalUnion, Polygonal, l1_distance, l1_upper,
                        union_indicator)
from .regular import (DomainWitness, RegularSeq, geometric_decay,
                      intersect_countable, intersect_pair, point_avoiding_seq,
                      realize_point, row_witness)

ZERO = Fraction(0)
ONE = Fraction(1)
_ZERO_POLY = Polygonal.constant(0)


@dataclass(frozen=True)
class AEFunction:
    """A function defined almost everywhere on [0, 1].

    ``evaluator`` must be extensional: witnesses carrying the same point give
    the same real, whatever their bounds.
    """

    domain: RegularSeq
    evaluator: Callable[[DomainWitness], CReal]
    name: str = ""

    def eval(self, w: DomainWitness) -> CReal:
        return self.evaluator(w)

    @staticmethod
    def from_polygonal(h: Polygonal, name: str = "") -> "AEFunction":
        return AEFunction(domain=RegularSeq.zero(),
                          evaluator=lambda w: h.eval_creal(w.x),
                          name=name)


class Summable:
    """An a.e.-defined function together with an L1-certified approximation.

    ``approx(n)`` yields polygonals with ``integral |f_{n+1} - f_n| < 2**-n``,
    converging to the function on the almost-full set of ``agreement``
    (which, for every construction in this library, coincides with the
    function's own domain).  Decay bounds are verified exactly whenever two
    neighbouring terms have materialized; ``strict_prefix`` forces the whole
    chain up to each requested index.
    """

    def __init__(self, base: AEFunction, approx: Callable[[int], Polygonal],
                 agreement: Optional[RegularSeq] = None, name: str = "",
                 strict_prefix: bool = False,
                 prefetch: Optional[Callable[[int], None]] = None):
        self.base = base
        self._approx = approx
        self.agreement = agreement if agreement is not None else base.domain
        self.name = name or base.name
        self._memo: dict[int, Polygonal] = {}
        self._checked: set[int] = set()
        self._lock = RLock()
        self._strict = strict_prefix
        self._prefetch = prefetch

    @property
    def domain(self) -> RegularSeq:
        return self.base.domain

    def eval(self, w: DomainWitness) -> CReal:
        return self.base.evaluator(w)

    def term(self, n: int) -> Polygonal:
        if n < 0:
            raise ValueError("term index must be >= 0")
        with self._lock:
            if self._prefetch is not None:
                self._prefetch(n)
            if self._strict:
                for k in range(n):
                    self._term(k)
            return self._term(n)

    def _term(self, n: int) -> Polygonal:
        got = self._memo.get(n)
        if got is None:
            got = self._memo[n] = self._approx(n)
        for lo in (n - 1, n):
            if lo >= 0 and lo not in self._checked \
                    and lo in self._memo and lo + 1 in self._memo:
                bound = pow2(-lo)
                gap = l1_upper(self._memo[lo + 1], self._memo[lo])
                if gap is None or not gap < bound:
                    gap = l1_distance(self._memo[lo + 1], self._memo[lo])
                if not gap < bound:
                    raise CertificationError(
                        f"approximation gap {gap} at index {lo} is not below 2^-{lo}"
                        + (f" in {self.name}" if self.name else ""),
                        index=lo)
                self._checked.add(lo)
        return got

    def check_prefix(self, n: int) -> None:
        """Materialize terms 0..n, verifying every consecutive L1 bound."""
        with self._lock:
            for k in range(n + 1):
                self._term(k)

    def integral(self, p: int) -> Fraction:
        """The Lebesgue integral to precision 2**-p: exactly ``integral(f_{p+2})``."""
        if p < 0:
            raise ValueError("precision exponent must be >= 0")
        return self.term(p + 2).integral()

    def integral_report(self, p: int) -> dict:
        value = self.integral(p)
        return {
            "function": self.name,
            "p": p,
            "value": to_ratstr(value),
            "prefix_used": p + 2,
            "tail_bound": to_ratstr(pow2(-(p + 1))),
        }

    # -- pointwise algebra ------------------------------------------------------

    def scale(self, c) -> "Summable":
        c = Fraction(c)
        if c == 0:
            return Summable(
                AEFunction(self.domain, lambda w: CReal.from_rational(0)),
                lambda n: _ZERO_POLY, agreement=self.agreement,
                name=f"0*{self.name}")
        shift = max(0, ceil_log2(abs(c)))
        base = AEFunction(self.domain,
                          lambda w: self.base.evaluator(w).scale(c),
                          name=f"{c}*{self.name}")
        return Summable(base, lambda n: self.term(n + shift) * c,
                        agreement=self.agreement, name=base.name)

    def _combine(self, other: "Summable", poly_op, creal_op, label: str) -> "Summable":
        dom = intersect_pair(self.domain, other.domain)

        def evaluator(w: DomainWitness) -> CReal:
            a = self.base.evaluator(row_witness(w, 0))
            b = other.base.evaluator(row_witness(w, 1))
            return creal_op(a, b)

        name = f"({self.name}{label}{other.name})"
        return Summable(AEFunction(dom, evaluator, name),
                        lambda n: poly_op(self.term(n + 2), other.term(n + 2)),
                        agreement=dom, name=name)

    def __add__(self, other: "Summable") -> "Summable":
        return self._combine(other, lambda a, b: a + b, lambda a, b: a + b, "+")

    def __sub__(self, other: "Summable") -> "Summable":
        return self._combine(other, lambda a, b: a - b, lambda a, b: a - b, "-")

    def min_with(self, other: "Summable") -> "Summable":
        return self._combine(other, lambda a, b: a.min_with(b),
                             lambda a, b: a.min_with(b), "&")

    def max_with(self, other: "Summable") -> "Summable":
        return self._combine(other, lambda a, b: a.max_with(b),
                             lambda a, b: a.max_with(b), "|")

    def abs(self) -> "Summable":
        base = AEFunction(self.domain, lambda w: abs(self.base.evaluator(w)),
                          name=f"|{self.name}|")
        return Summable(base, lambda n: abs(self.term(n)),
                        agreement=self.agreement, name=base.name)

    def clip_nonneg(self) -> "Summable":
        """Pointwise maximum with 0; a contraction, so decay bounds survive."""
        zero_real = CReal.from_rational(0)
        base = AEFunction(self.domain,
                          lambda w: self.base.evaluator(w).max_with(zero_real),
                          name=f"{self.name}+")
        return Summable(base, lambda n: self.term(n).max_with(_ZERO_POLY),
                        agreement=self.agreement, name=base.name)

    # -- constructors ------------------------------------------------------------

    @staticmethod
    def from_polygonal(h: Polygonal, name: str = "") -> "Summable":
        return Summable(AEFunction.from_polygonal(h, name), lambda n: h, name=name)

    @staticmethod
    def constant(c, name: str = "") -> "Summable":
        c = Fraction(c)
        return Summable.from_polygonal(Polygonal.constant(c),
                                       name=name or f"const({c})")


def lebesgue_integral(f: Summable, p: int) -> Fraction:
    """Integral of a summable function, certified to 2**-p."""
    return f.integral(p)


def integral_uniqueness_check(f1: Summable, f2: Summable, p: int) -> bool:
    """Two approximation schedules of one function must agree to 2**-(p-2)."""
    return abs(f1.integral(p) - f2.integral(p)) <= pow2(-p + 2)


def certify_l1_gap(f1: Summable, f2: Summable, bound, start: Optional[int] = None,
                   cap: Optional[int] = None) -> int:
    """Certify ``integral |f1 - f2| < bound`` from finite approximants.

    Returns the grid index k at which the exact polygonal distance plus the
    tail slack ``2**-(k-2)`` drops below the bound.  The certificate is sound:
    the true L1 distance differs from the grid distance by at most the slack.
    """
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    if f1 is f2:
        return start or 0
    k = start if start is not None else max(0, 3 + ceil_log2(1 / bound))
    steps = cap if cap is not None else budget_cap(64)
    for _ in range(steps):
        t1, t2 = f1.term(k), f2.term(k)
        slack = pow2(-k + 2)
        gap = l1_upper(t1, t2)
        if gap is not None and gap + slack < bound:
            return k
        gap = l1_distance(t1, t2)
        if gap + slack < bound:
            return k
        k += 1
    raise BudgetExhausted(
        f"could not certify L1 gap below {bound} within {steps} grid steps",
        needed=k)


def positive_point(f: Summable, prefix: int) -> DomainWitness:
    """A domain witness at which a positively-integrable function is positive.

    Searches for an index m whose approximant dominates the combined error
    series (successive approximation gaps plus the scaled domain sequence),
    then realizes a point by bisection.  The returned witness bounds the
    partial sums of the agreement sequence by ``2**m * realized bound``.
    """
    agreement = f.agreement
    last_error = None
    for m in range(1, prefix + 1):
        scale = pow2(-m)

        def gen(k: int, m=m, scale=scale) -> Polygonal:
            piece = abs(f.term(m + k + 1) - f.term(m + k))
            hk = agreement.term(k)
            if hk.is_zero():
                return piece
            return piece + hk * scale

        seq_m = RegularSeq(gen, name=f"margin({f.name},{m})")
        try:
            realized = realize_point(f.term(m), seq_m, prefix)
        except CertificationError as exc:
            last_error = exc
            continue
        return DomainWitness(x=realized.point, gamma=pow2(m) * realized.bound)
    raise CertificationError(
        f"no index up to {prefix} certifies a positive margin; raise the prefix"
    ) from last_error


@dataclass(frozen=True)
class MeasurableSet:
    """A subset of [0, 1] carried by a 0/1-valued summable characteristic."""

    characteristic: Summable
    support: Optional[IntervalUnion] = None
    name: str = ""

    def measure(self, p: int) -> Fraction:
        return self.characteristic.integral(p)

    def dichotomy_check(self, w: DomainWitness) -> bool:
        """Characteristic values sit within 1/8 of {0, 1} at precision 3."""
        v = self.characteristic.eval(w).approx(3)
        return abs(v) <= Fraction(1, 8) or abs(v - 1) <= Fraction(1, 8)


def measure(x: MeasurableSet, p: int) -> Fraction:
    return x.measure(p)


def char_of_interval_union(union: IntervalUnion,
                           extra_domain: Optional[RegularSeq] = None,
                           name: str = "") -> MeasurableSet:
    """Measurable set backed by a finite union of open rational intervals.

    The characteristic's domain avoids the component endpoints (where no
    evaluator could decide membership); an optional extra domain sequence is
    intersected in, so witnesses transport to it by row.
    """
    name = name or "union"
    if union.is_empty():
        zero = Summable.constant(0, name=f"chi[{name}]")
        return MeasurableSet(characteristic=zero, support=union, name=name)

    endpoints = sorted(set(union.endpoints()))
    avoid = point_avoiding_seq(endpoints, name=f"edges[{name}]")
    if extra_domain is None:
        dom = avoid
    else:
        dom = intersect_pair(avoid, extra_domain, name=f"dom[{name}]")
    components = union.ivs

    def evaluator(w: DomainWitness) -> CReal:
        state: list = []

        def decide() -> Fraction:
            if state:
                return state[0]
            cap = budget_cap(4096)
            p = 3
            while p <= cap:
                xt = w.x.approx(p)
                if xt < 0:
                    xt = ZERO
                elif xt > 1:
                    xt = ONE
                r = pow2(-p)
                lo, hi = max(ZERO, xt - r), min(ONE, xt + r)
                inside = any(a <= lo and hi <= b for a, b in components)
                if inside:
                    state.append(ONE)
                    return ONE
                outside = all(hi <= a or b <= lo for a, b in components)
                if outside:
                    state.append(ZERO)
                    return ZERO
                p += 2
            raise BudgetExhausted(
                "membership decision exceeded the budget; witness may be invalid",
                needed=cap)

        return CReal(lambda p: decide())

    base = AEFunction(dom, evaluator, name=f"chi[{name}]")
    characteristic = Summable(base, lambda k: union_indicator(union, k),
                              agreement=dom, name=base.name)
    return MeasurableSet(characteristic=characteristic, support=union, name=name)


def point_in_positive_set(x: MeasurableSet, prefix: int = 24,
                          direct: bool = True) -> DomainWitness:
    """A witness inside a set of positive measure, characteristic value 1.

    Interval-backed sets with profiled domains admit a direct interior
    selection (a third of the way into the largest component, which carries
    an exact witness); anything else falls back to the certified
    positive-point realization.
    """
    if direct and x.support is not None and not x.support.is_empty():
        a, b = x.support.largest_component()
        candidate = a + (b - a) / 3
        prof = x.characteristic.domain.profile_at(candidate)
        if prof is not None:
            w = DomainWitness(x=CReal.from_rational(candidate), gamma=prof.total)
            if x.dichotomy_check(w):
                value = x.characteristic.eval(w).approx(3)
                if abs(value - 1) <= Fraction(1, 8):
                    return w
    w = positive_point(x.characteristic, prefix)
    value = x.characteristic.eval(w).approx(3)
    if abs(value - 1) > Fraction(1, 8):
        raise CertificationError("realized point does not certify membership")
    return w


def limit_of_summables(seq: Callable[[int], Summable], certify: bool = True,
                       name: str = "") -> Summable:
    """Limit of an L1-fast sequence of summable functions.

    The result's approximants are the diagonal of the input grids; its
    domain intersects the geometric-decay refinements of the diagonal-gap
    and staircase-gap sequences with every input's agreement set, so
    witnesses give a computable convergence rate.  Input gaps
    ``integral |F_{n+1} - F_n| < 2**-n`` are certified from finite grids as
    output terms materialize; failures name the offending index.
    """
    memo: dict[int, Summable] = {}
    lock = RLock()

    def f(n: int) -> Summable:
        with lock:
            if n not in memo:
                memo[n] = seq(n)
            return memo[n]

    certified: set[int] = set()

    def ensure_gap(n: int) -> None:
        if not certify or n in certified:
            return
        a, b = f(n + 1), f(n)
        if a is not b:
            try:
                certify_l1_gap(a, b, pow2(-n))
            except BudgetExhausted as exc:
                raise CertificationError(
                    f"input L1 bound 2^-{n} could not be certified", index=n) from exc
        certified.add(n)

    diag_memo: dict[int, Polygonal] = {}

    def diag(j: int) -> Polygonal:
        if j not in diag_memo:
            diag_memo[j] = f(j + 2).term(j + 2)
        return diag_memo[j]

    def prefetch(n: int) -> None:
        for i in range(n + 2):
            ensure_gap(i)

    delta = RegularSeq(lambda j: abs(diag(j + 1) - diag(j)),
                       name=f"diag-gaps[{name}]")

    def staircase(n: int) -> Polygonal:
        out = None
        for k in range(n + 3):
            fk = f(n + 2 - k)
            piece = abs(fk.term(n + 4 + k) - fk.term(n + 2 + k))
            if piece.is_zero():
                continue
            out = piece if out is None else out + piece
        return out if out is not None else _ZERO_POLY

    stairs = RegularSeq(staircase, name=f"stair-gaps[{name}]")
    dec_delta, _ = geometric_decay(delta)
    dec_stairs, _ = geometric_decay(stairs)

    def rows(r: int) -> RegularSeq:
        if r == 0:
            return dec_delta
        if r == 1:
            return dec_stairs
        return f(r - 2).agreement

    dom = intersect_countable(rows, name=f"dom[{name}]")

    def evaluator(w: DomainWitness) -> CReal:
        gamma0 = row_witness(w, 0).gamma

        def fn(p: int) -> Fraction:
            target = pow2(-(p + 1))
            bound = 8 * gamma0
            j = 0
            cap = budget_cap(4096)
            while bound > target:
                bound = bound * 3 / 4
                j += 1
                if j > cap:
                    raise BudgetExhausted("convergence rate exceeded the budget",
                                          needed=j)
            h = diag(j)
            lam = h.lipschitz()
            q = p + 1 + (ceil_log2(lam) if lam > 1 else 0)
            xt = w.x.approx(q)
            if xt < 0:
                xt = ZERO
            elif xt > 1:
                xt = ONE
            return h.eval(xt)

        return CReal(fn)

    base = AEFunction(dom, evaluator, name=name or "limit")
    return Summable(base, diag, agreement=dom, name=base.name,
                    strict_prefix=True, prefetch=prefetch)


def ae_zero_of_null_integral(f: Summable, p: int) -> RegularSeq:
    """Almost-full set on which a nonnegative null-integral function vanishes.

    Checks nonnegativity of the approximants (negative parts must stay below
    the convergence slack) and the null-integral certificate at precision p,
    then takes the limit of the scaled functions ``2**j * f``: wherever that
    limit exists, f must be zero.  Returns the limit's domain sequence.
    """
    for n in range(min(p, 20) + 1):
        neg = -(f.term(n).min_with(_ZERO_POLY).integral())
        if neg > pow2(-n + 1):
            raise CertificationError(
                f"negative mass {neg} at index {n} contradicts nonnegativity",
                index=n)
    value = f.integral(p)
    if value > pow2(-p + 2):
        raise CertificationError(
            f"integral {value} at precision {p} is not certified null")

    limit = limit_of_summables(lambda j: f.scale(pow2(j)),
                               name=f"null[{f.name}]")
    return limit.domain


def full_measure_to_pps(x: MeasurableSet, p: int) -> RegularSeq:
    """Almost-full set inside a measurable set of certified full measure."""
    if x.measure(p) < 1 - pow2(-p + 2):
        raise CertificationError(
            f"measure at precision {p} does not certify fullness")
    residual = (Summable.constant(1) - x.characteristic).clip_nonneg()
    return ae_zero_of_null_integral(residual, max(3, p - 2))


def summable_min(fs: Sequence[Summable], name: str = "") -> Summable:
    """Pointwise minimum of finitely many summable functions."""
    fs = list(fs)
    if not fs:
        raise ValueError("need at least one function")
    if len(fs) == 1:
        return fs[0]
    shift = ceil_log2(len(fs)) + 1
    dom = intersect_countable([g.domain for g in fs], name=f"dom[{name}]")

    def approx(n: int) -> Polygonal:
        out = fs[0].term(n + shift)
        for g in fs[1:]:
            out = out.min_with(g.term(n + shift))
        return out

    def evaluator(w: DomainWitness) -> CReal:
        vals = [g.base.evaluator(row_witness(w, i)) for i, g in enumerate(fs)]
        out = vals[0]
        for v in vals[1:]:
            out = out.min_with(v)
        return out

    base = AEFunction(dom, evaluator, name=name or "min")
    return Summable(base, approx, agreement=dom, name=base.name)


def countable_set_intersection(sets: Callable[[int], MeasurableSet] | Sequence[MeasurableSet],
                               defects: Callable[[int], Fraction],
                               defect_tail: Callable[[int], Fraction],
                               name: str = ""):
    """Intersection of countably many measurable sets with summable defects.

    ``defects(n)`` bounds ``1 - measure(X_n)`` and ``defect_tail(n)`` the
    exact tail ``sum_{k>n} defects(k)``.  Partial intersections are thinned
    greedily (earliest index whose tail fits the next L1 budget) and passed
    through the summable limit; returns the intersection together with the
    exact reported lower bound ``1 - sum defects``.
    """
    if not callable(sets):
        seq_sets = list(sets)

        def set_fn(n: int) -> MeasurableSet:
            return seq_sets[n]
    else:
        set_fn = sets

    mins_memo: dict[int, Summable] = {}

    def partial(n: int) -> Summable:
        if n not in mins_memo:
            chars = [set_fn(i).characteristic for i in range(n + 1)]
            mins_memo[n] = summable_min(chars, name=f"{name}[0..{n}]")
        return mins_memo[n]

    cap = budget_cap(4096)
    cut: list[int] = []

    def thin(j: int) -> int:
        while len(cut) <= j:
            jj = len(cut)
            nu = cut[-1] if cut else 0
            target = pow2(-jj - 1)
            while defect_tail(nu) >= target:
                nu += 1
                if nu > cap:
                    raise BudgetExhausted(
                        "defect tail does not shrink; series may diverge", needed=nu)
            cut.append(nu)
        return cut[j]

    limit = limit_of_summables(lambda j: partial(thin(j)), name=name or "meet")
    k_report = thin(2) + 4
    total_defect = sum((Fraction(defects(k)) for k in range(k_report + 1)), ZERO) \
        + defect_tail(k_report)
    lower = 1 - total_defect
    return MeasurableSet(characteristic=limit, support=None,
                         name=name or "meet"), lower
