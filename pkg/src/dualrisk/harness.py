"""Randomized checking of the six preference-characterization statements.

The direct statements say: every pair built by letting a good block
precede a bad block is weakly preferred under any weighting function
whose m-th derivative carries the sign (-1)^(m-1) h^(m) >= 0, weakly
dispreferred when the sign is flipped, and valued identically when the
m-th derivative vanishes. The converse statements say: a weighting
function whose m-th equidistant-difference certificate is Mixed admits
a parsimonious pair ranked strictly against the direct direction.

Direct runs fuzz random bases, block amplitudes, gap specs, and
positions, then sweep a battery of right-sign, flipped-sign, and
zero-derivative weighting functions. Converse runs generate piecewise
linear weighting functions with certified mixed differences and walk
the witness map (candidate state counts, then window starts) until a
violating pair is exhibited; the pair's value gap is checked against
the closed-form difference identity, exactly.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction

from .apportionment import (
    ApportionmentPair,
    make_blocks,
    make_pair,
    make_parsimonious_pair,
    preference_direction,
)
from .errors import DomainError, DualRiskError
from .lottery import EqualProbLottery
from .rationals import format_exact
from .valuation import dt_value
from .weighting import (
    DualPower,
    Identity,
    Polynomial,
    SignClass,
    Tabulated,
    WeightingSpec,
    dual_power_mixture,
    finite_difference,
    finite_difference_sign,
    format_weighting,
    hbar_finite_difference,
)

# statement number -> (direction, orders exercised)
THEOREMS = {
    1: ("direct", (3,)),
    2: ("converse", (3,)),
    3: ("direct", (4,)),
    4: ("converse", (4,)),
    5: ("direct", (2, 5)),
    6: ("converse", (2, 5)),
}


@dataclass(frozen=True)
class HarnessReport:
    theorem: int
    kind: str
    order: int
    trials: int
    failures: tuple[dict, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def _monomial(k: int) -> Polynomial:
    return Polynomial((Fraction(0),) * k + (Fraction(1),))


def _odd_flip(m: int, c: Fraction) -> Polynomial:
    # h(p) = (1+c) p - c p^m; h' >= 1 - c (m-1) >= 0 for c <= 1/(m-1),
    # and h^(m) = -c m! < 0, the flipped sign at odd m.
    coeffs = [Fraction(0)] * (m + 1)
    coeffs[1] = 1 + c
    coeffs[m] = -c
    return Polynomial(tuple(coeffs))


def direct_battery(m: int, rng: random.Random | None = None):
    """Weighting functions paired with the relation the order-m statement predicts.

    Relations: "ge" (pair direction >= 0), "le" (<= 0), "eq" (exactly 0).
    """
    if m < 2:
        raise DomainError(f"statements start at order 2, got {m}")
    battery: list[tuple[WeightingSpec, str]] = []
    for j in range(m, 7):
        battery.append((DualPower(j), "ge"))
    if rng is not None:
        ks = rng.sample(range(m, 9), 2)
        raw = {k: Fraction(rng.randint(1, 4)) for k in ks}
        total = sum(raw.values())
        battery.append((dual_power_mixture({k: v / total for k, v in raw.items()}), "ge"))
    if m % 2 == 0:
        battery.append((_monomial(m), "le"))
        battery.append((_monomial(m + 2), "le"))
    else:
        battery.append((_odd_flip(m, Fraction(1, m - 1)), "le"))
        battery.append((_odd_flip(m, Fraction(1, 2 * (m - 1))), "le"))
    battery.append((Identity(), "eq"))
    for j in range(1, m):
        battery.append((DualPower(j), "eq"))
    for k in range(2, m):
        battery.append((_monomial(k), "eq"))
    return battery


def random_base(rng: random.Random, m: int, n: int | None = None) -> EqualProbLottery:
    """Equal-probability base lottery with gaps >= 1 (room for small blocks)."""
    if n is None:
        n = rng.randint(m, m + 6)
    outcomes = [Fraction(rng.randint(1, 4))]
    for _ in range(n - 1):
        outcomes.append(outcomes[-1] + Fraction(rng.randint(2, 8), 2))
    return EqualProbLottery(n, tuple(outcomes))


def _random_gaps(rng: random.Random, m: int) -> tuple[int, ...]:
    return tuple(rng.choice((1, 1, 2)) for _ in range(m - 2))


def random_pair(rng: random.Random, m: int) -> ApportionmentPair:
    """Random order-m pair: independent amplitudes and gap specs per block.

    Positions are sampled so that both blocks fit at both slots (each
    member hosts each block once). Amplitudes stay <= 1/32 so that no
    draw can break outcome ranking against unit base gaps.
    """
    for _ in range(128):
        base = random_base(rng, m)
        good, _ = make_blocks(m, base.n, Fraction(rng.randint(1, 4), 128), _random_gaps(rng, m))
        _, bad = make_blocks(m, base.n, Fraction(rng.randint(1, 4), 128), _random_gaps(rng, m))
        span = max(good.span, bad.span)
        hi_first = base.n - span - 1
        if hi_first < 1:
            continue
        pos_first = rng.randint(1, hi_first)
        pos_second = rng.randint(pos_first + 1, base.n - span)
        return make_pair(base, good, bad, pos_first, pos_second, seed=None)
    raise DualRiskError("pair sampling failed to find a fitting configuration")


def direct_check(pair: ApportionmentPair, rng: random.Random | None = None) -> list[dict]:
    """Sweep the order-m battery over one pair; return replay records of violations."""
    failures = []
    for w, relation in direct_battery(pair.order, rng):
        got = preference_direction(pair, w)
        ok = got >= 0 if relation == "ge" else got <= 0 if relation == "le" else got == 0
        if not ok:
            failures.append(
                {
                    "weighting": format_weighting(w),
                    "relation": relation,
                    "direction": got,
                    "pair": json.loads(pair.provenance.to_json()),
                }
            )
    return failures


def run_direct_trials(theorem: int, m: int, trials: int, seed: int) -> HarnessReport:
    rng = random.Random(seed * 1000003 + m)
    failures: list[dict] = []
    for trial in range(trials):
        pair = random_pair(rng, m)
        for record in direct_check(pair, rng):
            record["trial"] = trial
            failures.append(record)
    return HarnessReport(theorem, "direct", m, trials, tuple(failures))


def random_mixed_tabulated(rng: random.Random, m: int, tries: int = 500) -> Tabulated:
    """Piecewise-linear weighting whose m-th differences take both signs.

    Knot values are jittered off the diagonal by multiples of 1/(32K)
    bounded by 1/(8K), which keeps the knots strictly increasing; draws
    are rejected until the aligned step-1/K windows show both signs.
    """
    for _ in range(tries):
        k = rng.choice((8, 16, 32))
        knots = [(Fraction(0), Fraction(0))]
        for i in range(1, k):
            eta = Fraction(rng.randint(-4, 4), 32 * k)
            knots.append((Fraction(i, k), Fraction(i, k) + eta))
        knots.append((Fraction(1), Fraction(1)))
        w = Tabulated(tuple(knots))
        pos = neg = False
        for j in range(0, k - m + 1):
            d = finite_difference(w, m, Fraction(j, k), Fraction(1, k))
            pos = pos or d > 0
            neg = neg or d < 0
            if pos and neg:
                return w
    raise DualRiskError(f"no mixed-difference tabulated weighting found in {tries} draws")


def _candidate_counts(witness, m: int, grid_count: int) -> list[int]:
    # Witness-derived state count first, then grid divisors ascending. A
    # wrong-sign window of any step b/G refines into unit-step windows on
    # the 1/G grid, so n = G always terminates the search.
    lo = max(m, 2)
    seen: set[int] = set()
    out: list[int] = []

    def add(n: int) -> None:
        if lo <= n <= grid_count and n not in seen:
            seen.add(n)
            out.append(n)

    if witness is not None:
        step = Fraction(witness.step)
        if step.numerator == 1:
            add(step.denominator)
    for n in range(lo, grid_count + 1):
        if grid_count % n == 0:
            add(n)
    return out


def converse_witness_search(
    w: WeightingSpec, m: int, witness=None, grid_count: int = 256
) -> tuple[int, int, Fraction] | None:
    """Find (n, j) with a wrong-sign aligned window Delta^m_{1/n} h(j/n).

    The pair value gap equals (-1)^(m+1)/M times this window, so "wrong
    sign" means a negative window at odd m and a positive one at even m.
    """
    for n in _candidate_counts(witness, m, grid_count):
        step = Fraction(1, n)
        for j in range(0, n - m + 1):
            d = finite_difference(w, m, Fraction(j, n), step)
            if (d < 0) if m % 2 == 1 else (d > 0):
                return n, j, d
    return None


def converse_check(w: WeightingSpec, m: int, grid_count: int = 256) -> dict:
    """One converse probe: Mixed certificate must yield a violating pair.

    Returns a replay record with status "vacuous" (certificate not
    Mixed), "violation" (pair found, gap identity verified), or a
    failure status ("no-window" / "mismatch").
    """
    cert = finite_difference_sign(w, m, grid_count)
    record: dict = {"weighting": format_weighting(w), "order": m, "certificate": cert.kind.value}
    if cert.kind is not SignClass.MIXED:
        record["status"] = "vacuous"
        return record
    witness = cert.negative if m % 2 == 1 else cert.positive
    found = converse_witness_search(w, m, witness, grid_count)
    if found is None:
        record["status"] = "no-window"
        return record
    n, j, window = found
    big_m = 2 ** (m + 1)
    pair = make_parsimonious_pair(tuple(range(1, n + 1)), j, m, big_m)
    gap = dt_value(pair.d, w) - dt_value(pair.c, w)
    predicted = Fraction((-1) ** (m + 1), big_m) * window
    survival_form = hbar_finite_difference(w, m, Fraction(n - j - m, n), Fraction(1, n)) / big_m
    record.update(
        {
            "n": n,
            "j": j,
            "gap": format_exact(gap),
            "direction": preference_direction(pair, w),
            "pair": json.loads(pair.provenance.to_json()),
        }
    )
    if gap < 0 and gap == predicted and gap == survival_form:
        record["status"] = "violation"
    else:
        record["status"] = "mismatch"
        record["predicted"] = format_exact(predicted)
    return record


def run_converse_trials(
    theorem: int, m: int, trials: int, seed: int, grid_count: int = 256
) -> HarnessReport:
    rng = random.Random(seed * 1000003 + m)
    failures: list[dict] = []
    for trial in range(trials):
        w = random_mixed_tabulated(rng, m)
        record = converse_check(w, m, grid_count)
        if record["status"] != "violation":
            record["trial"] = trial
            failures.append(record)
    return HarnessReport(theorem, "converse", m, trials, tuple(failures))


def run_theorem(theorem: int, trials: int, seed: int, grid_count: int = 256) -> list[HarnessReport]:
    """Run one numbered statement across its orders; one report per order."""
    if theorem not in THEOREMS:
        raise DomainError(f"statements are numbered 1..6, got {theorem}")
    kind, orders = THEOREMS[theorem]
    if kind == "direct":
        return [run_direct_trials(theorem, m, trials, seed) for m in orders]
    return [run_converse_trials(theorem, m, trials, seed, grid_count) for m in orders]
