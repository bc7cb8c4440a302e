"""Piecewise polynomials with exact rational breakpoints.

Pieces store coefficients in the global variable (not shifted per piece),
so restricting a piece to a subinterval is a no-op and subtraction only
has to merge breakpoints. Step functions are the degree-0 case; repeated
antiderivatives produce the iterated quantile and CDF functions used by
the dominance checks.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .polyops import Poly, padd, pantideriv, peval, psub, ptrim


@dataclass(frozen=True)
class PiecewisePoly:
    breakpoints: tuple[Fraction, ...]
    pieces: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if len(self.breakpoints) < 2 or len(self.pieces) != len(self.breakpoints) - 1:
            raise DomainError("need K+1 breakpoints for K pieces, K >= 1")
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if not a < b:
                raise DomainError("breakpoints must be strictly increasing")

    @property
    def lo(self) -> Fraction:
        return self.breakpoints[0]

    @property
    def hi(self) -> Fraction:
        return self.breakpoints[-1]

    def piece_index(self, x) -> int:
        if x < self.lo or x > self.hi:
            raise DomainError(f"{x} outside [{self.lo}, {self.hi}]")
        i = bisect.bisect_left(self.breakpoints, x, lo=1) - 1
        return min(i, len(self.pieces) - 1)

    def __call__(self, x):
        """Evaluate; at interior breakpoints takes the left piece's value."""
        return peval(list(self.pieces[self.piece_index(x)]), x)

    def antiderivative(self) -> "PiecewisePoly":
        """Continuous antiderivative vanishing at the left endpoint."""
        acc = Fraction(0)
        out = []
        for (a, b), coeffs in zip(zip(self.breakpoints, self.breakpoints[1:]), self.pieces):
            raw = pantideriv(list(coeffs))
            shift = acc - peval(raw, a)
            out.append(tuple(padd(raw, [shift])))
            acc = peval(raw, b) + shift
        return PiecewisePoly(self.breakpoints, tuple(out))

    def merged_with(self, other: "PiecewisePoly") -> tuple[Fraction, ...]:
        if self.lo != other.lo or self.hi != other.hi:
            raise DomainError("piecewise functions defined on different intervals")
        return tuple(sorted(set(self.breakpoints) | set(other.breakpoints)))

    def refined(self, breakpoints: tuple[Fraction, ...]) -> "PiecewisePoly":
        """Re-express on a finer breakpoint grid (must contain the current one)."""
        pieces = []
        for a in breakpoints[:-1]:
            pieces.append(self.pieces[self.piece_index_right(a)])
        return PiecewisePoly(breakpoints, tuple(pieces))

    def piece_index_right(self, x) -> int:
        """Piece governing the interval immediately to the right of x."""
        i = bisect.bisect_right(self.breakpoints, x) - 1
        return min(i, len(self.pieces) - 1)

    def __sub__(self, other: "PiecewisePoly") -> "PiecewisePoly":
        grid = self.merged_with(other)
        a = self.refined(grid)
        b = other.refined(grid)
        pieces = tuple(tuple(psub(list(p), list(q))) for p, q in zip(a.pieces, b.pieces))
        return PiecewisePoly(grid, pieces)

    def degree(self) -> int:
        return max(len(ptrim(list(p))) - 1 for p in self.pieces)


def step_function(breakpoints, values) -> PiecewisePoly:
    """Left-continuous step function: value[i] on (b[i], b[i+1]]."""
    return PiecewisePoly(tuple(breakpoints), tuple((Fraction(v),) for v in values))
