"""Lottery valuation: dual-theory value, expected utility, and moments.

The dual-theory value of a lottery with ranked distinct outcomes
x_1 < ... < x_n and CDF F is

    V = sum_i x_i (h(F(x_i)) - h(F(x_{i-1})))          (CDF form)
      = sum_i hbar(S(x_{i-1})) (x_i - x_{i-1})         (survival form)

with x_0 = 0, F(x_0) = 0, S = 1 - F, hbar(p) = 1 - h(1 - p). The survival
form is the one computed; in debug runs the CDF form is recomputed and
compared exactly for exact families (stripped under python -O).

The m-th dual moment is the expected minimum of m independent draws,
integral of S(x)^m, and coincides with the dual-theory value under the
DualPower(m) weighting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DomainError, NonMonotoneUtility
from .lottery import Lottery, as_distribution, canonical_distribution, mean
from .rationals import rat
from .weighting import WeightingSpec, eval_h, eval_hbar, is_exact


# ---------------------------------------------------------------------------
# utility functions (for the expected-utility contrast)


@dataclass(frozen=True)
class LinearUtility:
    pass


@dataclass(frozen=True)
class QuadraticUtility:
    """u(x) = x - c x^2; increasing only while x <= 1/(2c) for c > 0."""

    c: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", rat(self.c))


@dataclass(frozen=True)
class PowerIntUtility:
    """u(x) = x^k on non-negative outcomes, integer k >= 1."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise DomainError(f"power utility exponent must be an integer >= 1, got {self.k}")


@dataclass(frozen=True)
class TabulatedUtility:
    """Piecewise-linear utility through (x, u) knots; x increasing, u non-decreasing."""

    knots: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        knots = tuple((rat(x), rat(u)) for x, u in self.knots)
        object.__setattr__(self, "knots", knots)
        if len(knots) < 2:
            raise DomainError("tabulated utility needs at least two knots")
        for (x0, u0), (x1, u1) in zip(knots, knots[1:]):
            if x1 <= x0:
                raise DomainError(f"knot abscissae must increase, got {x0} then {x1}")
            if u1 < u0:
                raise NonMonotoneUtility(f"utility decreases between x={x0} and x={x1}")


UtilityFunction = LinearUtility | QuadraticUtility | PowerIntUtility | TabulatedUtility


def eval_utility(u: UtilityFunction, x: Fraction) -> Fraction:
    match u:
        case LinearUtility():
            return x
        case QuadraticUtility(c=c):
            return x - c * x * x
        case PowerIntUtility(k=k):
            return x**k
        case TabulatedUtility(knots=knots):
            if x < knots[0][0] or x > knots[-1][0]:
                raise DomainError(f"outcome {x} outside tabulated utility span")
            for (x0, u0), (x1, u1) in zip(knots, knots[1:]):
                if x <= x1:
                    return u0 + (u1 - u0) * (x - x0) / (x1 - x0)
    raise DomainError(f"unknown utility family {type(u).__name__}")


def _check_monotone_on(u: UtilityFunction, lot: Lottery) -> None:
    if isinstance(u, QuadraticUtility) and u.c > 0:
        top = max(lot.outcomes)
        if 2 * u.c * top > 1:
            raise NonMonotoneUtility(
                f"quadratic utility with c={u.c} decreases beyond x={1 / (2 * u.c)}, "
                f"but the lottery reaches {top}"
            )


def eu_value(lot: Lottery, u: UtilityFunction) -> Fraction:
    """Expected utility sum p_i u(x_i); utility must be non-decreasing on the support."""
    lot = as_distribution(lot)
    _check_monotone_on(u, lot)
    return sum((p * eval_utility(u, x) for x, p in lot.states), Fraction(0))


# ---------------------------------------------------------------------------
# dual-theory value


def dt_value(lot: Lottery, w: WeightingSpec):
    """Dual-theory value of a lottery under weighting w (survival form).

    Exact families yield an exact Fraction; transcendental families a float.
    """
    can = canonical_distribution(lot)
    acc = Fraction(0) if is_exact(w) else 0.0
    prev_x = Fraction(0)
    surv = Fraction(1)
    for x, p in can.states:
        if x != prev_x:
            acc += eval_hbar(w, surv) * (x - prev_x)
        surv -= p
        prev_x = x
    if __debug__ and is_exact(w):
        assert acc == _dt_value_cdf_form(can, w), "survival and CDF forms disagree"
    return acc


def _dt_value_cdf_form(can: Lottery, w: WeightingSpec):
    # independent route kept for debug cross-checks and tests
    acc = Fraction(0) if is_exact(w) else 0.0
    cum = Fraction(0)
    prev_h = eval_h(w, Fraction(0))
    for x, p in can.states:
        cum += p
        cur_h = eval_h(w, cum)
        acc += x * (cur_h - prev_h)
        prev_h = cur_h
    return acc


# ---------------------------------------------------------------------------
# moments


def primal_moment(lot: Lottery, k: int) -> Fraction:
    """Mean for k = 1, central moment E[(X - mu)^k] for k >= 2."""
    if k < 1:
        raise DomainError(f"moment order must be >= 1, got {k}")
    lot = as_distribution(lot)
    if k == 1:
        return mean(lot)
    mu = mean(lot)
    return sum((p * (x - mu) ** k for x, p in lot.states), Fraction(0))


def raw_moment(lot: Lottery, k: int) -> Fraction:
    """E[X^k]."""
    if k < 1:
        raise DomainError(f"moment order must be >= 1, got {k}")
    lot = as_distribution(lot)
    return sum((p * x**k for x, p in lot.states), Fraction(0))


def dual_moment(lot: Lottery, m: int) -> Fraction:
    """Expected minimum of m independent draws: integral of S(x)^m.

    Computed directly from the survival function, independently of the
    weighting machinery (dt_value with DualPower(m) must agree).
    """
    if m < 1:
        raise DomainError(f"dual moment order must be >= 1, got {m}")
    can = canonical_distribution(lot)
    acc = Fraction(0)
    prev_x = Fraction(0)
    surv = Fraction(1)
    for x, p in can.states:
        acc += surv**m * (x - prev_x)
        surv -= p
        prev_x = x
    return acc


def dual_moment_weights(n: int, m: int) -> list[Fraction]:
    """Per-state weights of the m-draw expected minimum for n ranked
    equally likely states: weight_i = ((n-i+1)^m - (n-i)^m) / n^m,
    i = 1..n from lowest outcome upward."""
    if n < 1 or m < 1:
        raise DomainError("need n >= 1 and m >= 1")
    return [Fraction((n - i + 1) ** m - (n - i) ** m, n**m) for i in range(1, n + 1)]


def dual_moment_mc_oracle(
    lot: Lottery, m: int, draws: int = 200_000, seed: int = 0
) -> tuple[float, float]:
    """Monte Carlo estimate of the m-draw expected minimum.

    Returns (estimate, standard_error). Sampling is inverse-CDF on exact
    cumulative probabilities converted to float once.
    """
    if m < 1 or draws < 2:
        raise DomainError("need m >= 1 and draws >= 2")
    can = canonical_distribution(lot)
    outcomes = np.array([float(x) for x in can.outcomes])
    cum = np.cumsum([float(p) for p in can.probabilities])
    cum[-1] = 1.0
    rng = np.random.Generator(np.random.PCG64(seed))
    u = rng.random((draws, m))
    idx = np.searchsorted(cum, u, side="left")
    mins = outcomes[idx].min(axis=1)
    est = float(mins.mean())
    se = float(mins.std(ddof=1) / np.sqrt(draws))
    return est, se
