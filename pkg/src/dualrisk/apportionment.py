"""Squeeze transformations and good/bad increment-block constructions.

A squeeze moves two ranked equal-probability states toward each other by
the same amount (an anti-squeeze moves them apart); both preserve the
mean. Increment blocks generalize this: the order-2 blocks are a single
+delta (good) or -delta (bad) entry, and an order-m block concatenates an
order-(m-1) block with its exact negation starting at least one state
later, increments accumulating additively where entries land on the same
state. Attaching the good block before the bad one to a base lottery, or
the other way around, yields a pair of lotteries whose first m-1 dual
moments agree exactly; which member of the pair is preferred is decided
by the sign of the m-th derivative of the evaluator's weighting function.

The parsimonious pair keeps the base lottery itself as one member and
applies good and bad blocks with unit amplitude 1/M at adjacent
positions, so only m consecutive states move, by alternating binomial
increments.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .errors import (
    BadGapSpec,
    ConstructionInvariantError,
    DomainError,
    PrecedenceViolation,
)
from .lottery import EqualProbLottery
from .rationals import format_exact, rat
from .valuation import dt_value, dual_moment
from .weighting import WeightingSpec, is_exact


class Polarity(enum.Enum):
    GOOD = "good"
    BAD = "bad"


@dataclass(frozen=True)
class Block:
    """Signed increment vector on consecutive-state offsets.

    entries are (state_offset, increment) with offsets strictly
    increasing from 0; n is the number of states of the lotteries the
    block is meant for (each touched state has probability 1/n).
    """

    order: int
    polarity: Polarity
    n: int
    entries: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        if not self.entries or self.entries[0][0] != 0:
            raise DomainError("a block needs entries starting at offset 0")
        for (o1, _), (o2, _) in zip(self.entries, self.entries[1:]):
            if o2 <= o1:
                raise DomainError("block offsets must be strictly increasing")

    @property
    def span(self) -> int:
        return self.entries[-1][0]

    def negated(self) -> "Block":
        pol = Polarity.BAD if self.polarity is Polarity.GOOD else Polarity.GOOD
        return Block(self.order, pol, self.n, tuple((o, -v) for o, v in self.entries))


def _merge_entries(first, second) -> tuple[tuple[int, Fraction], ...]:
    acc: dict[int, Fraction] = {}
    for o, v in list(first) + list(second):
        acc[o] = acc.get(o, Fraction(0)) + v
    return tuple((o, acc[o]) for o in sorted(acc) if acc[o] != 0)


def make_blocks(m: int, n: int, delta, gaps=None) -> tuple[Block, Block]:
    """Good and bad blocks of order m for n-state lotteries.

    The recursion starts from the single-entry order-2 blocks and at each
    order k = 3..m appends the negated copy of the current block shifted
    right by gaps[k-3] states (default 1, the minimal strict precedence).
    With all gaps 1 the order-m block is the alternating binomial vector
    binom(m-2, .) * delta on m-1 consecutive states. The bad block is the
    entry-wise negation of the good one.
    """
    if m < 2:
        raise DomainError(f"block order must be >= 2, got {m}")
    if n < 1:
        raise DomainError(f"need n >= 1, got {n}")
    delta = rat(delta)
    if delta <= 0:
        raise DomainError(f"block amplitude must be positive, got {delta}")
    if gaps is None:
        gaps = (1,) * (m - 2)
    gaps = tuple(gaps)
    if len(gaps) != m - 2:
        raise BadGapSpec(f"order {m} needs {m - 2} gap entries, got {len(gaps)}")
    for g in gaps:
        if g != int(g) or g < 1:
            raise BadGapSpec(f"gaps must be integers >= 1, got {g}")
    entries: tuple[tuple[int, Fraction], ...] = ((0, delta),)
    for g in gaps:
        shifted = tuple((o + int(g), -v) for o, v in entries)
        entries = _merge_entries(entries, shifted)
    good = Block(m, Polarity.GOOD, n, entries)
    if __debug__ and m >= 3:
        assert sum(v for _, v in entries) == 0
    return good, good.negated()


def attach(
    lot: EqualProbLottery,
    first: Block,
    second: Block,
    pos_first: int,
    pos_second: int,
) -> EqualProbLottery:
    """Add two blocks state-wise to a ranked equal-probability lottery.

    Positions are 1-based states of the block's offset-0 entry. The first
    block must strictly precede the second (overlap of the remaining
    entries is fine; increments accumulate). Ranking and non-negativity
    of the resulting outcomes are enforced by the lottery constructor.
    """
    if first.n != lot.n or second.n != lot.n:
        raise DomainError("block n does not match the lottery")
    if pos_second < pos_first + 1:
        raise PrecedenceViolation(
            f"second block at state {pos_second} must start at least one state "
            f"after the first at {pos_first}"
        )
    for block, pos in ((first, pos_first), (second, pos_second)):
        if pos < 1 or pos + block.span > lot.n:
            raise DomainError(
                f"block spanning offsets 0..{block.span} does not fit at state {pos} of {lot.n}"
            )
    outcomes = list(lot.outcomes)
    for block, pos in ((first, pos_first), (second, pos_second)):
        for o, v in block.entries:
            outcomes[pos - 1 + o] += v
    return EqualProbLottery(lot.n, tuple(outcomes))


def squeeze(lot: EqualProbLottery, i: int, j: int, x) -> EqualProbLottery:
    """Move states i < j toward each other by x >= 0 (mean preserved)."""
    x = rat(x)
    if x < 0:
        raise DomainError(f"squeeze amount must be >= 0, got {x}")
    if not 1 <= i < j <= lot.n:
        raise DomainError(f"need states 1 <= i < j <= {lot.n}, got i={i}, j={j}")
    outcomes = list(lot.outcomes)
    outcomes[i - 1] += x
    outcomes[j - 1] -= x
    return EqualProbLottery(lot.n, tuple(outcomes))


def anti_squeeze(lot: EqualProbLottery, i: int, j: int, x) -> EqualProbLottery:
    """Move states i < j apart by x >= 0 (mean preserved)."""
    x = rat(x)
    if x < 0:
        raise DomainError(f"anti-squeeze amount must be >= 0, got {x}")
    if not 1 <= i < j <= lot.n:
        raise DomainError(f"need states 1 <= i < j <= {lot.n}, got i={i}, j={j}")
    outcomes = list(lot.outcomes)
    outcomes[i - 1] -= x
    outcomes[j - 1] += x
    return EqualProbLottery(lot.n, tuple(outcomes))


@dataclass(frozen=True)
class PairProvenance:
    """Reproducible construction record; round-trips through JSON."""

    kind: str
    order: int
    n: int
    base_outcomes: tuple[Fraction, ...]
    pos_first: int
    pos_second: int
    good_entries: tuple[tuple[int, Fraction], ...]
    bad_entries: tuple[tuple[int, Fraction], ...]
    big_m: Fraction | None = None
    seed: int | None = None

    def to_json(self) -> str:
        payload = {
            "kind": self.kind,
            "order": self.order,
            "n": self.n,
            "base_outcomes": [format_exact(x) for x in self.base_outcomes],
            "pos_first": self.pos_first,
            "pos_second": self.pos_second,
            "good_entries": [[o, format_exact(v)] for o, v in self.good_entries],
            "bad_entries": [[o, format_exact(v)] for o, v in self.bad_entries],
            "big_m": None if self.big_m is None else format_exact(self.big_m),
            "seed": self.seed,
        }
        return json.dumps(payload, indent=2)

    @staticmethod
    def from_json(text: str) -> "PairProvenance":
        raw = json.loads(text)
        return PairProvenance(
            kind=raw["kind"],
            order=raw["order"],
            n=raw["n"],
            base_outcomes=tuple(rat(x) for x in raw["base_outcomes"]),
            pos_first=raw["pos_first"],
            pos_second=raw["pos_second"],
            good_entries=tuple((int(o), rat(v)) for o, v in raw["good_entries"]),
            bad_entries=tuple((int(o), rat(v)) for o, v in raw["bad_entries"]),
            big_m=None if raw.get("big_m") is None else rat(raw["big_m"]),
            seed=raw.get("seed"),
        )


@dataclass(frozen=True)
class ApportionmentPair:
    """Lottery pair (C, D) differing only in where good and bad sit.

    D carries the good block at the earlier (lower-outcome) states, C the
    bad one. Their first order-1 .. order-(m-1) dual moments agree
    exactly, so the preference between them isolates the m-th derivative
    of the weighting function.
    """

    order: int
    c: EqualProbLottery
    d: EqualProbLottery
    provenance: PairProvenance


def _validate_pair(pair: ApportionmentPair) -> None:
    c, d = pair.c, pair.d
    if c.n != d.n:
        raise ConstructionInvariantError("pair members have different state counts")
    for k in range(1, pair.order):
        mc, md = dual_moment(c, k), dual_moment(d, k)
        if mc != md:
            raise ConstructionInvariantError(
                f"dual moment {k} differs between pair members: {mc} vs {md}"
            )


def make_pair(
    base: EqualProbLottery,
    good: Block,
    bad: Block,
    pos_first: int,
    pos_second: int,
    seed: int | None = None,
) -> ApportionmentPair:
    """Attach good/bad blocks to base in both orders.

    D gets the good block at pos_first and the bad at pos_second; C the
    reverse. Both attach orders must be feasible. The blocks may have
    different amplitudes and gap structures but must share the order.
    """
    if good.order != bad.order:
        raise DomainError(f"block orders differ: {good.order} vs {bad.order}")
    if good.polarity is not Polarity.GOOD or bad.polarity is not Polarity.BAD:
        raise DomainError("pass the good block first and the bad block second")
    d = attach(base, good, bad, pos_first, pos_second)
    c = attach(base, bad, good, pos_first, pos_second)
    prov = PairProvenance(
        kind="general",
        order=good.order,
        n=base.n,
        base_outcomes=base.outcomes,
        pos_first=pos_first,
        pos_second=pos_second,
        good_entries=good.entries,
        bad_entries=bad.entries,
        seed=seed,
    )
    pair = ApportionmentPair(good.order, c, d, prov)
    _validate_pair(pair)
    return pair


def pair_increments(m: int, big_m) -> list[Fraction]:
    """Net outcome changes from C to D on the m moved states.

    Produced by running the block recursion with minimal gaps and
    amplitude 1/M; equals the alternating binomials
    (-1)^(k-1) binom(m-1, k-1) / M for k = 1..m.
    """
    big_m = rat(big_m)
    if big_m <= 0:
        raise DomainError(f"need M > 0, got {big_m}")
    good, bad = make_blocks(m, max(m, 2), Fraction(1, 1) / big_m)
    merged = _merge_entries(good.entries, tuple((o + 1, v) for o, v in bad.entries))
    out = [Fraction(0)] * m
    for o, v in merged:
        out[o] = v
    if __debug__ and m <= 8:
        assert out == [Fraction((-1) ** k * comb(m - 1, k)) / big_m for k in range(m)]
    return out


def make_parsimonious_pair(
    outcomes,
    j: int,
    m: int,
    big_m,
    seed: int | None = None,
) -> ApportionmentPair:
    """Pair whose C member is the base lottery itself.

    The m states j+1 .. j+m (1-based) of the n given ranked outcomes are
    moved: D adds the good block of order m at state j+1 and the bad
    block at state j+2, both with amplitude 1/M and minimal gaps, which
    nets out to the alternating binomial increments of pair_increments.
    M must be large enough that the ranking survives.
    """
    base = EqualProbLottery(len(outcomes), tuple(rat(x) for x in outcomes))
    n = base.n
    if m < 2:
        raise DomainError(f"pair order must be >= 2, got {m}")
    if n < m:
        raise DomainError(f"need at least m={m} states, got {n}")
    if not 0 <= j <= n - m:
        raise DomainError(f"moved states {j + 1}..{j + m} do not fit in 1..{n}")
    big_m = rat(big_m)
    if big_m <= 0:
        raise DomainError(f"need M > 0, got {big_m}")
    good, bad = make_blocks(m, n, Fraction(1, 1) / big_m)
    d = attach(base, good, bad, j + 1, j + 2)
    prov = PairProvenance(
        kind="parsimonious",
        order=m,
        n=n,
        base_outcomes=base.outcomes,
        pos_first=j + 1,
        pos_second=j + 2,
        good_entries=good.entries,
        bad_entries=bad.entries,
        big_m=big_m,
        seed=seed,
    )
    pair = ApportionmentPair(m, base, d, prov)
    _validate_pair(pair)
    return pair


def rebuild_pair(prov: PairProvenance) -> ApportionmentPair:
    """Reconstruct a pair from its provenance record."""
    base = EqualProbLottery(prov.n, prov.base_outcomes)
    good = Block(prov.order, Polarity.GOOD, prov.n, prov.good_entries)
    bad = Block(prov.order, Polarity.BAD, prov.n, prov.bad_entries)
    d = attach(base, good, bad, prov.pos_first, prov.pos_second)
    if prov.kind == "parsimonious":
        pair = ApportionmentPair(prov.order, base, d, prov)
    else:
        c = attach(base, bad, good, prov.pos_first, prov.pos_second)
        pair = ApportionmentPair(prov.order, c, d, prov)
    _validate_pair(pair)
    return pair


def preference_direction(pair: ApportionmentPair, w: WeightingSpec) -> int:
    """Sign of value(D) - value(C) under weighting w: +1, 0, or -1.

    Exact for exact weighting families; float families use the float
    difference directly.
    """
    diff = dt_value(pair.d, w) - dt_value(pair.c, w)
    if not is_exact(w):
        return (diff > 1e-15) - (diff < -1e-15)
    return (diff > 0) - (diff < 0)
