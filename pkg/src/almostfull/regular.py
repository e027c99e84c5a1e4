"""Regular sequences, almost-full sets, and certified point realization.

A regular sequence is a lazily generated sequence of nonnegative polygonal
functions ``h_n`` whose integrals decay below ``2**-n``; the set of points
where the series ``sum h_n(x)`` stays bounded is an almost-full subset of
[0, 1], and a pair ``(x, gamma)`` bounding every partial sum is a checkable
membership witness.  This module certifies regularity exactly, realizes
points of almost-full sets by interval bisection, and provides the two
combinators used everywhere downstream: countable intersection and
geometric-decay refinement, each with explicit witness transport.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from threading import RLock
from typing import Callable, Optional, Sequence

from .errors import BudgetExhausted, CertificationError, RegularityError
from .exact import CReal, budget_cap, ceil_log2, pow2
from .polygonal import Polygonal

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class TailProfile:
    """Exact pointwise tail information for a sequence at a fixed point.

    ``total`` bounds every partial sum ``sum_{k<=m} h_k(x)``; terms with
    ``k >= vanish_from`` are exactly zero at the point (None when unknown).
    """

    total: Fraction
    vanish_from: Optional[int] = None


class RegularSeq:
    """Lazy sequence of nonnegative polygonals with ``integral(h_n) < 2**-n``.

    Terms are generated on demand, memoized, and checked exactly at
    generation time: a violating term raises RegularityError.  Generators
    must be pure, so concurrent readers always observe identical terms.
    """

    def __init__(self, gen: Callable[[int], Polygonal], name: str = "",
                 profile: Optional[Callable[[Fraction], Optional[TailProfile]]] = None,
                 always_zero: bool = False):
        self._gen = gen
        self._memo: dict[int, Polygonal] = {}
        self._lock = RLock()
        self._profile = profile
        self.name = name
        # Marks sequences known to be identically zero, enabling shortcuts.
        self.always_zero = always_zero

    def term(self, n: int) -> Polygonal:
        if n < 0:
            raise ValueError("term index must be >= 0")
        with self._lock:
            got = self._memo.get(n)
            if got is not None:
                return got
            h = self._gen(n)
            if not h.is_nonneg():
                raise RegularityError(
                    f"term {n} of {self.name or 'sequence'} takes negative values", index=n)
            if not h.integral() < pow2(-n):
                raise RegularityError(
                    f"term {n} of {self.name or 'sequence'} has integral "
                    f"{h.integral()} >= 2^-{n}", index=n)
            self._memo[n] = h
            return h

    def prefix(self, n: int) -> list:
        return [self.term(k) for k in range(n + 1)]

    def check_prefix(self, n: int) -> None:
        """Force generation (and hence exact regularity checks) up to index n."""
        self.prefix(n)

    def prefix_integral(self, n: int) -> Fraction:
        """Exact ``sum_{k<=n} integral(h_k)``."""
        return sum((self.term(k).integral() for k in range(n + 1)), ZERO)

    @staticmethod
    def tail_bound(n: int) -> Fraction:
        """Geometric bound for ``sum_{k>n} integral(h_k)``; equals 2**-n."""
        return pow2(-n)

    def profile_at(self, x) -> Optional[TailProfile]:
        """Exact pointwise tail profile at x, when the sequence supports one."""
        if self._profile is None:
            return None
        return self._profile(Fraction(x))

    def shifted(self, s: int) -> "RegularSeq":
        """The sequence ``n -> h_{n+s}``; regularity is inherited."""
        if s < 0:
            raise ValueError("shift must be >= 0")
        base_profile = self._profile

        def profile(x):
            if base_profile is None:
                return None
            p = base_profile(x)
            if p is None:
                return None
            vanish = None if p.vanish_from is None else max(0, p.vanish_from - s)
            return TailProfile(total=p.total, vanish_from=vanish)

        return RegularSeq(lambda n: self.term(n + s),
                          name=f"{self.name}>>{s}" if self.name else "",
                          profile=profile)

    @staticmethod
    def zero() -> "RegularSeq":
        z = Polygonal.constant(0)
        return RegularSeq(lambda n: z, name="zero",
                          profile=lambda x: TailProfile(total=ZERO, vanish_from=0),
                          always_zero=True)

    @staticmethod
    def from_terms(terms: Sequence[Polygonal], name: str = "") -> "RegularSeq":
        """Finitely many explicit terms padded with zeros."""
        terms = list(terms)
        z = Polygonal.constant(0)

        def profile(x):
            vals = [t.eval(x) for t in terms]
            return TailProfile(total=sum(vals, ZERO), vanish_from=len(terms))

        return RegularSeq(lambda n: terms[n] if n < len(terms) else z,
                          name=name, profile=profile)


def serialize_prefix(seq: RegularSeq, n: int) -> str:
    """JSON fixture for the first n+1 terms (rational-string node pairs)."""
    import json

    return json.dumps([seq.term(k).to_pairs() for k in range(n + 1)],
                      separators=(",", ":"))


def deserialize_prefix(text: str) -> list:
    """Terms back from a fixture produced by :func:`serialize_prefix`."""
    import json

    from .exact import from_ratstr

    out = []
    for pairs in json.loads(text):
        out.append(Polygonal.from_pairs(
            (from_ratstr(t), from_ratstr(v)) for t, v in pairs))
    return out


def point_avoiding_seq(points: Sequence, scale=ONE, name: str = "") -> RegularSeq:
    """Sequence of shrinking unit-height tents around finitely many points.

    The bounded-sum set excludes exactly the given points: each tent at index
    k has half-width ``scale * 2**-(k+2) / count``, so the series diverges on
    the points and vanishes eventually everywhere else.  Profiles are
    computed analytically, without materializing the tent polygonals.
    """
    pts = sorted({Fraction(p) for p in points})
    scale = Fraction(scale)
    if not 0 < scale <= 1:
        raise ValueError("scale must be in (0, 1]")
    for p in pts:
        if not 0 <= p <= 1:
            raise ValueError("avoided points must lie in [0, 1]")
    if not pts:
        return RegularSeq.zero()
    count = len(pts)

    def width(k: int) -> Fraction:
        return scale * pow2(-(k + 2)) / count

    def bump(p: Fraction, w: Fraction) -> Polygonal:
        if p == 0:
            return Polygonal((ZERO, w, ONE), (ONE, ZERO, ZERO), _trusted=True)
        if p == 1:
            return Polygonal((ZERO, 1 - w, ONE), (ZERO, ZERO, ONE), _trusted=True)
        return Polygonal.tent(p, ONE, w)

    def gen(k: int) -> Polygonal:
        w = width(k)
        out = bump(pts[0], w)
        for p in pts[1:]:
            out = out + bump(p, w)
        return out

    def profile(x):
        dists = [abs(x - p) for p in pts]
        dist = min(dists)
        if dist == 0:
            return None
        total = ZERO
        k = 0
        w = width(0)
        while w > dist:
            for d in dists:
                if d < w:
                    total += 1 - d / w
            k += 1
            w = w / 2
        return TailProfile(total=total, vanish_from=k)

    return RegularSeq(gen, name=name or "avoid", profile=profile)


@dataclass(frozen=True)
class DomainWitness:
    """A point together with a bound for all partial sums of the sequence."""

    x: CReal
    gamma: Fraction

    def verify(self, seq: RegularSeq, depth: int, precision: int):
        """Check the witness inequality on a finite prefix.

        Evaluates ``sum_{n<=m} h_n(x~)`` for all ``m <= depth`` at a rational
        approximant ``x~`` of the point, and accepts when each partial sum
        stays within ``gamma`` plus the accumulated slope-induced error.
        Returns ``(ok, accumulated_error)``.
        """
        xt = self.x.approx(precision)
        if xt < 0:
            xt = ZERO
        elif xt > 1:
            xt = ONE
        err = ZERO
        run = ZERO
        step = pow2(-precision)
        for n in range(depth + 1):
            h = seq.term(n)
            run += h.eval(xt)
            err += h.lipschitz() * step
            if run > self.gamma + err:
                return False, err
        return True, err


def witness_precision(seq: RegularSeq, depth: int, target_exp: int) -> int:
    """Precision making the accumulated evaluation error at most 2**-target_exp."""
    lam = sum((seq.term(n).lipschitz() for n in range(depth + 1)), ZERO)
    if lam <= 0:
        return target_exp
    return target_exp + max(0, ceil_log2(lam))


@dataclass(frozen=True)
class RealizedPoint:
    """Result of a certified realization.

    ``bound`` is a rational upper bound for the series ``sum h_n(point)``
    that sits strictly below ``h(point)``; ``margin`` (= epsilon/2) is the
    certified gap usable in finite-precision comparisons.
    """

    point: CReal
    bound: Fraction
    epsilon: Fraction
    margin: Fraction
    prefix: int


class _Bisection:
    """Nested dyadic intervals preserving the weighted averaged inequality.

    State at depth d is an interval I of width 2**-d, a prefix length K and
    an exact margin  M = int_I (h - eps) - sum_{n<=K} (1+eps)^n int_I h_n - T(K),
    where T(K) bounds the remaining tail.  M stays positive: extending K can
    only increase it, and after arranging T(K) <= M/2 at least one half of I
    keeps a positive margin.
    """

    CHUNK = 4

    def __init__(self, h: Polygonal, seq: RegularSeq, eps: Fraction, k0: int,
                 margin0: Fraction, depth_cap: int):
        self.h = h
        self.seq = seq
        self.eps = eps
        self.lam = (1 + eps) / 2
        self.depth_cap = depth_cap
        self._lock = RLock()
        self._pows = [ONE]
        # chain entries: (lo, hi, K, margin)
        self.chain = [(ZERO, ONE, k0, margin0)]

    def _pow(self, n: int) -> Fraction:
        while len(self._pows) <= n:
            self._pows.append(self._pows[-1] * (1 + self.eps))
        return self._pows[n]

    def tail(self, k: int) -> Fraction:
        return self.lam ** (k + 1) / (1 - self.lam)

    def _weighted(self, lo, hi, n_from, n_to) -> Fraction:
        total = ZERO
        for n in range(n_from, n_to + 1):
            hn = self.seq.term(n)
            if hn.is_zero():
                continue
            total += self._pow(n) * hn.integral_on(lo, hi)
        return total

    def _margin(self, lo, hi, k) -> Fraction:
        d = self.h.integral_on(lo, hi) - self.eps * (hi - lo) - self._weighted(lo, hi, 0, k)
        return d - self.tail(k)

    def refine_to(self, depth: int) -> None:
        with self._lock:
            while len(self.chain) - 1 < depth:
                if len(self.chain) - 1 >= self.depth_cap:
                    raise BudgetExhausted(
                        "bisection depth cap reached during realization",
                        needed=depth)
                lo, hi, k, margin = self.chain[-1]
                # Deepen the prefix until the tail is dominated.
                while self.tail(k) > margin / 2:
                    k2 = k + self.CHUNK
                    margin += (self.tail(k) - self.tail(k2)) - self._weighted(lo, hi, k + 1, k2)
                    k = k2
                mid = (lo + hi) / 2
                left = self._margin(lo, mid, k)
                if left > 0:
                    self.chain.append((lo, mid, k, left))
                else:
                    right = (margin - self.tail(k)) - left
                    if not right > 0:
                        raise CertificationError(
                            "bisection invariant lost; underlying certificates inconsistent")
                    self.chain.append((mid, hi, k, right))

    def point(self) -> CReal:
        def fn(p: int) -> Fraction:
            self.refine_to(p)
            lo, hi, _, _ = self.chain[p]
            return (lo + hi) / 2

        return CReal(fn)


def realize_point(h: Polygonal, seq: RegularSeq, prefix: int) -> RealizedPoint:
    """Realize a point where the series ``sum h_n`` stays strictly below h.

    Requires the finite certificate
    ``integral(h) > prefix_integral(prefix) + 2**-prefix``; searches downward
    through ``eps = 2**-e`` (extending the certified prefix by 2 per halving)
    until the weighted inequality
    ``integral(h - eps) > sum (1+eps)^n integral(h_n) + tail`` holds, then
    bisects [0, 1] keeping a half on which the inequality persists, always
    preferring the left half when both qualify.
    """
    total_h = h.integral()
    lhs = seq.prefix_integral(prefix) + pow2(-prefix)
    if not total_h > lhs:
        raise CertificationError(
            f"hypothesis margin insufficient at prefix {prefix}: "
            f"integral {total_h} vs certified bound {lhs}")

    e_cap = budget_cap(64)
    eps = None
    k0 = prefix
    margin0 = None
    for e in range(1, e_cap + 1):
        cand = pow2(-e)
        k0 = prefix + 2 * e
        lam = (1 + cand) / 2
        tail = lam ** (k0 + 1) / (1 - lam)
        acc = ZERO
        power = ONE
        for n in range(k0 + 1):
            hn = seq.term(n)
            if not hn.is_zero():
                acc += power * hn.integral()
            power *= 1 + cand
        m = total_h - cand - acc - tail
        if m > 0:
            eps = cand
            margin0 = m
            break
    if eps is None:
        raise BudgetExhausted("no admissible eps found; raise the budget", needed=e_cap)

    depth_cap = budget_cap(4096)
    walk = _Bisection(h, seq, eps, k0, margin0, depth_cap)
    xi = walk.point()

    e = -ceil_log2(1 / eps)  # eps == 2**e with e < 0
    p = -e + 2
    h_at = h.eval_creal(xi).approx(p)
    bound = h_at + pow2(-p) - eps
    return RealizedPoint(point=xi, bound=bound, epsilon=eps, margin=eps / 2, prefix=k0)


def point_in_pps(seq: RegularSeq) -> DomainWitness:
    """A point of the almost-full set of the sequence, with witness bound 2.

    Always applicable: the constant 2 dominates every certified prefix sum.
    """
    realized = realize_point(Polygonal.constant(2), seq, 0)
    return DomainWitness(x=realized.point, gamma=Fraction(2))


def intersect_countable(rows: Callable[[int], RegularSeq] | Sequence[RegularSeq],
                        zero_from: Optional[int] = None,
                        name: str = "") -> RegularSeq:
    """Diagonal combination certifying a countable intersection.

    Returns the sequence ``g_k = sum_{n<=k} 2**-(2n+1) * h_{n, k-n}`` built
    from the rows; its almost-full set is contained in every row's.  A
    witness ``(x, gamma)`` for the result transports to row n as
    ``(x, 2**(2n+1) * gamma)`` via :func:`row_witness`.
    """
    if not callable(rows):
        seqs = list(rows)
        if zero_from is None:
            zero_from = len(seqs)
        zero = RegularSeq.zero()

        def row_fn(n: int) -> RegularSeq:
            return seqs[n] if n < len(seqs) else zero
    else:
        row_fn = rows

    memo: dict[int, RegularSeq] = {}

    def row(n: int) -> RegularSeq:
        if n not in memo:
            memo[n] = row_fn(n)
        return memo[n]

    def gen(k: int) -> Polygonal:
        top = k if zero_from is None else min(k, zero_from - 1)
        out = None
        for n in range(top + 1):
            try:
                term = row(n).term(k - n)
            except RegularityError as exc:
                raise RegularityError(
                    f"row {n} violates regularity at index {k - n}",
                    index=(n, k - n)) from exc
            if term.is_zero():
                continue
            piece = term * pow2(-(2 * n + 1))
            out = piece if out is None else out + piece
        return out if out is not None else Polygonal.constant(0)

    profile = None
    if zero_from is not None:
        def profile(x):
            total = ZERO
            vanish = 0
            for n in range(zero_from):
                p = row(n).profile_at(x)
                if p is None:
                    return None
                total += pow2(-(2 * n + 1)) * p.total
                if p.vanish_from is None:
                    return TailProfile(total=total, vanish_from=None)
                vanish = max(vanish, n + p.vanish_from)
            return TailProfile(total=total, vanish_from=vanish)

    return RegularSeq(gen, name=name or "intersection", profile=profile)


def row_witness(w: DomainWitness, n: int) -> DomainWitness:
    """Transport an intersection witness to row n."""
    return DomainWitness(x=w.x, gamma=pow2(2 * n + 1) * w.gamma)


def intersect_pair(a: RegularSeq, b: RegularSeq, name: str = "") -> RegularSeq:
    """Countable intersection specialized to two rows."""
    return intersect_countable([a, b], name=name or "pair")


def geometric_decay(seq: RegularSeq, name: str = ""):
    """Refine a regular sequence so members decay like (3/4)**n pointwise.

    Returns ``(g, transport)`` where
    ``g_n = ((4/3)**(2n) h_{2n} + (4/3)**(2n+1) h_{2n+1}) / 2``
    is again regular (``integral(g_n) <= (5/6)(4/9)**n <= 2**-n``), and
    ``transport(w, n)`` converts a witness for g into the exact pointwise
    bound ``h_n(x) <= 2 * gamma * (3/4)**n``.
    """
    four_thirds = Fraction(4, 3)

    def gen(n: int) -> Polygonal:
        a = seq.term(2 * n)
        b = seq.term(2 * n + 1)
        ca = four_thirds ** (2 * n) / 2
        cb = four_thirds ** (2 * n + 1) / 2
        if a.is_zero() and b.is_zero():
            return Polygonal.constant(0)
        return a * ca + b * cb

    def profile(x):
        p = seq.profile_at(x)
        if p is None:
            return None
        if p.vanish_from is None:
            return None
        k0 = (p.vanish_from + 1) // 2
        total = ZERO
        for n in range(k0):
            total += gen(n).eval(x)
        return TailProfile(total=total, vanish_from=k0)

    def transport(w: DomainWitness, n: int) -> Fraction:
        return 2 * w.gamma * Fraction(3, 4) ** n

    return RegularSeq(gen, name=name or "decay", profile=profile), transport


def decay_bound(gamma, n: int) -> Fraction:
    """The transported geometric pointwise bound ``2 * gamma * (3/4)**n``."""
    return 2 * Fraction(gamma) * Fraction(3, 4) ** n
