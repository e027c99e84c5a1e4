"""Exact arithmetic substrate: rationals, certified reals, dyadic cells.

Every quantity in this library is either an exact ``fractions.Fraction`` or a
``CReal``: a real number represented by a map from a precision exponent ``p``
to a rational approximant within ``2**-p`` of the value.  Nothing here ever
rounds through binary floating point.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from threading import RLock
from typing import Callable

Rational = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def pow2(e: int) -> Fraction:
    """2**e as an exact rational, for any integer e."""
    if e >= 0:
        return Fraction(1 << e)
    return Fraction(1, 1 << (-e))


def ceil_log2(q: Fraction) -> int:
    """Smallest integer t with 2**t >= q, for rational q > 0."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("ceil_log2 requires a positive rational")
    t = q.numerator.bit_length() - q.denominator.bit_length()
    while pow2(t) < q:
        t += 1
    while pow2(t - 1) >= q:
        t -= 1
    return t


def to_ratstr(q: Fraction) -> str:
    """Wire format for rationals: always ``"numerator/denominator"``."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def from_ratstr(s: str) -> Fraction:
    num, _, den = s.partition("/")
    if den:
        return Fraction(int(num), int(den))
    return Fraction(int(num))


def budget_cap(default: int) -> int:
    """Step cap for bounded searches.

    The environment variable ``ALMOSTFULL_BUDGET`` overrides every default at
    once; raising it gives constructions more room before they give up.
    """
    raw = os.environ.get("ALMOSTFULL_BUDGET")
    if raw is None:
        return default
    return max(1, int(raw))


class CReal:
    """A real number carried as certified rational approximants.

    ``approx(p)`` returns a rational within ``2**-p`` of the represented
    value.  Approximant functions must be pure; results are memoized per
    instance, and instances may be shared freely between threads.
    """

    __slots__ = ("_fn", "_cache", "_lock")

    def __init__(self, fn: Callable[[int], Fraction]):
        self._fn = fn
        self._cache: dict[int, Fraction] = {}
        self._lock = RLock()

    def approx(self, p: int) -> Fraction:
        if p < 0:
            raise ValueError("precision exponent must be >= 0")
        got = self._cache.get(p)
        if got is not None:
            return got
        with self._lock:
            got = self._cache.get(p)
            if got is None:
                got = self._cache[p] = self._fn(p)
            return got

    @staticmethod
    def from_rational(q) -> "CReal":
        q = Fraction(q)
        return CReal(lambda p: q)

    # Arithmetic requests operand precision p+2: the two operand errors then
    # total at most 2**-(p+1), inside the 2**-p contract.

    def __add__(self, other: "CReal") -> "CReal":
        return CReal(lambda p: self.approx(p + 2) + other.approx(p + 2))

    def __sub__(self, other: "CReal") -> "CReal":
        return CReal(lambda p: self.approx(p + 2) - other.approx(p + 2))

    def __neg__(self) -> "CReal":
        return CReal(lambda p: -self.approx(p))

    def scale(self, c) -> "CReal":
        c = Fraction(c)
        if c == 0:
            return CReal.from_rational(0)
        shift = max(0, ceil_log2(abs(c)))
        return CReal(lambda p: c * self.approx(p + shift))

    def __abs__(self) -> "CReal":
        return CReal(lambda p: abs(self.approx(p + 2)))

    def min_with(self, other: "CReal") -> "CReal":
        return CReal(lambda p: min(self.approx(p + 2), other.approx(p + 2)))

    def max_with(self, other: "CReal") -> "CReal":
        return CReal(lambda p: max(self.approx(p + 2), other.approx(p + 2)))


def rat_approx(x: CReal, p: int) -> Fraction:
    """Rational within 2**-p of x.  Total: every CReal answers at every p."""
    if p < 0:
        raise ValueError("precision exponent must be >= 0")
    return x.approx(p)


class Verdict(Enum):
    LEFT_BELOW = "left_below"
    RIGHT_BELOW = "right_below"


def soft_compare(a: CReal, b: CReal, eps) -> Verdict:
    """Comparison with slack eps > 0.

    LEFT_BELOW guarantees a < b + eps, RIGHT_BELOW guarantees b < a + eps.
    Near-equal inputs may receive either verdict; the returned guarantee
    always holds.  Terminates unconditionally: both operands are approximated
    to precision with 2**-p <= eps/4 and compared exactly.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    p = max(0, ceil_log2(4 / eps))
    if a.approx(p) <= b.approx(p):
        return Verdict.LEFT_BELOW
    return Verdict.RIGHT_BELOW


@dataclass(frozen=True)
class DyadicInterval:
    """Open dyadic cell (k * 2**-m, (k+1) * 2**-m) inside the unit interval."""

    k: int
    m: int

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("dyadic level must be >= 0")
        if not 0 <= self.k < (1 << self.m):
            raise ValueError(f"cell index {self.k} out of range at level {self.m}")

    @property
    def left(self) -> Fraction:
        return Fraction(self.k, 1 << self.m)

    @property
    def right(self) -> Fraction:
        return Fraction(self.k + 1, 1 << self.m)

    @property
    def length(self) -> Fraction:
        return pow2(-self.m)

    @property
    def midpoint(self) -> Fraction:
        return Fraction(2 * self.k + 1, 1 << (self.m + 1))

    def contains(self, x) -> bool:
        """Strict interior membership."""
        x = Fraction(x)
        return self.left < x < self.right
