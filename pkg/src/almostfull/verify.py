"""Seeded invariant suites behind the ``verify`` command.

Each suite runs a list of named checks at desk scale and reports pass/fail
per check; any failure makes the suite fail.  A fault-injection flag
corrupts one catalog-derived object so the harness can demonstrate that
violations are caught and named.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .aefunc import Summable, integral_uniqueness_check, lebesgue_integral
from .bridge import NetIndex
from .catalog import get_bridge, get_entry, square_offset_summable, tents_at_center_seq
from .errors import AlmostFullError, CertificationError
from .exact import pow2, to_ratstr
from .polygonal import Polygonal
from .regular import (RegularSeq, geometric_decay, intersect_countable,
                      point_in_pps, row_witness, witness_precision)

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _random_nonneg_poly(rng: random.Random, nodes: int = 4) -> Polygonal:
    cuts = sorted(rng.sample(range(1, 64), nodes))
    xs = [ZERO] + [Fraction(c, 64) for c in cuts] + [ONE]
    vs = [Fraction(rng.randint(0, 32), 16) for _ in xs]
    return Polygonal(tuple(xs), tuple(vs))


def _random_poly(rng: random.Random, nodes: int = 4) -> Polygonal:
    cuts = sorted(rng.sample(range(1, 64), nodes))
    xs = [ZERO] + [Fraction(c, 64) for c in cuts] + [ONE]
    vs = [Fraction(rng.randint(-32, 32), 16) for _ in xs]
    return Polygonal(tuple(xs), tuple(vs))


def _scaled_regular(rng: random.Random, n: int) -> Polygonal:
    h = _random_nonneg_poly(rng)
    total = h.integral()
    if total == 0:
        return h
    target = pow2(-n) * Fraction(rng.randint(1, 7), 8)
    return h * (target / total)


def _random_regular_seq(seed: int, count: int, offset: int = 0) -> RegularSeq:
    rng = random.Random(seed)
    terms = [_scaled_regular(rng, n + offset) for n in range(count)]
    return RegularSeq.from_terms(terms)


def suite_regularity(seed: int) -> list:
    checks = []

    seq = _random_regular_seq(seed, 17)
    try:
        seq.check_prefix(16)
        checks.append(CheckResult("random-sequence-regular", True))
    except AlmostFullError as exc:
        checks.append(CheckResult("random-sequence-regular", False, str(exc)))

    const = RegularSeq(lambda n: Polygonal.constant(pow2(-(n + 1))))
    dec, _ = geometric_decay(const)
    ok = True
    detail = ""
    for n in range(21):
        bound = Fraction(5, 6) * Fraction(4, 9) ** n
        val = dec.term(n).integral()
        if not (val <= bound and val < pow2(-n)):
            ok = False
            detail = f"n={n}: {val}"
            break
    checks.append(CheckResult("decay-bound-exact", ok, detail))

    rows = [_random_regular_seq(seed + i, 20, offset=1) for i in range(3)]
    meet = intersect_countable(rows)
    try:
        meet.check_prefix(12)
        checks.append(CheckResult("intersection-regular", True))
    except AlmostFullError as exc:
        checks.append(CheckResult("intersection-regular", False, str(exc)))

    bad = RegularSeq(lambda n: Polygonal.constant(pow2(-n)))
    try:
        bad.term(3)
        checks.append(CheckResult("violation-detected", False, "accepted a bad term"))
    except AlmostFullError:
        checks.append(CheckResult("violation-detected", True))
    return checks


def suite_witnesses(seed: int) -> list:
    checks = []
    tents = tents_at_center_seq()
    w = point_in_pps(tents)
    prec = witness_precision(tents, 20, 30)
    ok, err = w.verify(tents, 20, prec)
    checks.append(CheckResult("tents-witness-verifies", ok,
                              f"accumulated error {to_ratstr(err)}"))

    rows = [_random_regular_seq(seed + 7 * i, 20, offset=1) for i in range(3)]
    meet = intersect_countable(rows)
    wm = point_in_pps(meet)
    all_ok = True
    detail = ""
    for n_row in range(3):
        wr = row_witness(wm, n_row)
        prec = witness_precision(rows[n_row], 12, 24)
        ok, err = wr.verify(rows[n_row], 12, prec)
        if not ok:
            all_ok = False
            detail = f"row {n_row} failed"
            break
    checks.append(CheckResult("intersection-transport", all_ok, detail))

    dec, transport = geometric_decay(tents)
    wd = point_in_pps(dec)
    xt = wd.x.approx(30)
    ok = True
    detail = ""
    for n in range(8):
        bound = transport(wd, n)
        val = tents.term(n).eval(min(max(xt, ZERO), ONE))
        slack = tents.term(n).lipschitz() * pow2(-30)
        if val > bound + slack:
            ok = False
            detail = f"n={n}: {to_ratstr(val)} > {to_ratstr(bound)}"
            break
    checks.append(CheckResult("decay-transport-pointwise", ok, detail))
    return checks


def suite_integrals(seed: int) -> list:
    rng = random.Random(seed)
    checks = []

    ok = True
    detail = ""
    for i in range(60):
        h1 = _random_poly(rng)
        h2 = _random_poly(rng)
        a = Fraction(rng.randint(-8, 8), rng.randint(1, 8))
        b = Fraction(rng.randint(-8, 8), rng.randint(1, 8))
        if (a * h1 + b * h2).integral() != a * h1.integral() + b * h2.integral():
            ok = False
            detail = f"case {i}"
            break
    checks.append(CheckResult("integral-linearity-exact", ok, detail))

    sq = get_entry("square").summable
    alt = square_offset_summable()
    checks.append(CheckResult(
        "uniqueness-square",
        integral_uniqueness_check(sq, alt, 12),
        ""))

    ok = True
    detail = ""
    for n in range(13):
        gap = abs(sq.term(n + 1) - sq.term(n)).integral()
        if not gap < pow2(-n):
            ok = False
            detail = f"n={n}"
            break
    checks.append(CheckResult("square-chain-bounds", ok, detail))

    f = get_entry("tent").summable
    bump = _random_nonneg_poly(rng)
    g = f + Summable.from_polygonal(bump, name="bump")
    ok = lebesgue_integral(f, 10) <= lebesgue_integral(g, 10) + pow2(-8)
    checks.append(CheckResult("monotonicity", ok))

    ok = True
    detail = ""
    for p, q in ((4, 9), (6, 12), (8, 14)):
        gap = abs(sq.integral(p) - sq.integral(q))
        if gap > pow2(-p + 1) + pow2(-q + 1):
            ok = False
            detail = f"p={p},q={q}"
            break
    checks.append(CheckResult("integral-precision-contract", ok, detail))
    return checks


def suite_bridge(seed: int, corrupt: bool = False) -> list:
    checks = []
    bridge = get_bridge("ae-step")

    if corrupt:
        # Fault injection: an offset sneaks into every other approximant, so
        # the decay-chain invariant must fail and be named in the report.
        base_s = get_entry("ae-step").summable
        corrupted = Summable(
            base_s.base,
            lambda n: base_s.term(n) + Polygonal.constant(
                Fraction(1, 4) if n % 2 else ZERO),
            name="corrupted")
        try:
            corrupted.check_prefix(6)
            checks.append(CheckResult("fault-injection", False,
                                      "injected fault went undetected"))
        except CertificationError as exc:
            checks.append(CheckResult("summable-decay-chain", False,
                                      f"violated invariant: {exc}"))
        return checks

    ok = True
    detail = ""
    for n in range(9):
        length = bridge.delta_union(n).length
        if not length > 1 - Fraction(3, 4) ** n:
            ok = False
            detail = f"n={n}: length {to_ratstr(length)}"
            break
    checks.append(CheckResult("delta-length-bound", ok, detail))

    ok = True
    detail = ""
    for n in range(7):
        info = bridge.gamma(n)
        if not info.lower_bound > 1 - 4 * Fraction(3, 4) ** n:
            ok = False
            detail = f"n={n}"
            break
    checks.append(CheckResult("gamma-lower-bound", ok, detail))

    ok = True
    detail = ""
    for m in range(1, 5):
        for n in range(4):
            deep = bridge.gamma_depth(m, n) + 16
            tail = 3 * Fraction(3, 4) ** deep
            for k in range(1 << m):
                mu_hi = bridge.gamma_union(n, deep).intersect_interval(
                    Fraction(k, 1 << m), Fraction(k + 1, 1 << m)).length
                if bridge.theta(k, m, n):
                    ok = mu_hi - tail > pow2(-2 * m) / 4
                else:
                    ok = mu_hi - tail <= pow2(-2 * m) / 2
                if not ok:
                    detail = f"cell ({k},{m},{n})"
                    break
            if not ok:
                break
        if not ok:
            break
    checks.append(CheckResult("theta-guarantees", ok, detail))

    ident = get_bridge("identity")
    ok = True
    detail = ""
    for m in (2, 3, 4):
        net = ident.net(NetIndex.canonical(m))
        total = net.coefficient_sum
        lower = sum(Fraction(l, 1 << m) for l in range(1 << m)) * pow2(-m)
        upper = lower + pow2(-m)
        if not lower <= total <= upper:
            ok = False
            detail = f"m={m}"
            break
    checks.append(CheckResult("net-riemann-bracket", ok, detail))
    return checks


SUITES = {
    "regularity": suite_regularity,
    "witnesses": suite_witnesses,
    "integrals": suite_integrals,
    "bridge": suite_bridge,
}


def run_suite(name: str, seed: int, corrupt: bool = False) -> list:
    if name not in SUITES:
        raise KeyError(name)
    if name == "bridge":
        return suite_bridge(seed, corrupt=corrupt)
    return SUITES[name](seed)
