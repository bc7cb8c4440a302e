"""Polynomial kernel checked against sympy and dense grids.

Coefficient lists are ascending-power rationals. Root isolation and the
sign machinery carry the exact dominance checks, so they get the
independent-oracle treatment.
"""

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from dualrisk.polyops import (
    count_roots,
    isolate_roots,
    nonneg_on_interval,
    padd,
    pantideriv,
    pderiv,
    pdivmod,
    peval,
    pgcd,
    pmul,
    psub,
    refine_interval,
    sign_profile,
    sturm_chain,
)

F = Fraction
X = sympy.Symbol("x")

coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
polys = st.lists(coeff, min_size=1, max_size=6)


def to_sympy(c):
    return sum(sympy.Rational(q.numerator, q.denominator) * X**i for i, q in enumerate(c))


@given(polys, polys)
@settings(max_examples=60)
def test_ring_ops_match_sympy(a, b):
    pa, pb = to_sympy(a), to_sympy(b)
    assert sympy.expand(to_sympy(padd(a, b)) - (pa + pb)) == 0
    assert sympy.expand(to_sympy(psub(a, b)) - (pa - pb)) == 0
    assert sympy.expand(to_sympy(pmul(a, b)) - pa * pb) == 0


@given(polys)
@settings(max_examples=40)
def test_calculus_matches_sympy(c):
    p = to_sympy(c)
    assert sympy.expand(to_sympy(pderiv(c)) - sympy.diff(p, X)) == 0
    assert sympy.expand(sympy.diff(to_sympy(pantideriv(c)), X) - p) == 0


@given(polys, polys)
@settings(max_examples=40)
def test_divmod_identity(a, b):
    if all(q == 0 for q in b):
        return
    quo, rem = pdivmod(a, b)
    recomposed = padd(pmul(quo, b), rem)
    for x in (F(-2), F(0), F(1, 3), F(3)):
        assert peval(recomposed, x) == peval(a, x)


def test_gcd_of_shared_factor():
    # (x-1)(x-2) and (x-1)(x+3) share x-1
    a = pmul([F(-1), F(1)], [F(-2), F(1)])
    b = pmul([F(-1), F(1)], [F(3), F(1)])
    g = pgcd(a, b)
    assert peval(g, F(1)) == 0
    assert peval(g, F(2)) != 0


class TestRootIsolation:
    def test_known_roots(self):
        # roots 1/2 and 3 inside [0, 4]
        c = pmul([F(-1, 2), F(1)], [F(-3), F(1)])
        intervals = isolate_roots(c, F(0), F(4))
        assert len(intervals) == 2
        (a1, b1), (a2, b2) = intervals
        assert a1 <= F(1, 2) <= b1
        assert a2 <= F(3) <= b2

    def test_counts_match_sympy_on_random(self):
        import random

        rng = random.Random(5)
        checked = 0
        while checked < 25:
            c = [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(rng.randint(2, 6))]
            if all(q == 0 for q in c) or peval(c, F(0)) == 0 or peval(c, F(1)) == 0:
                continue
            distinct = {
                r for r in sympy.real_roots(to_sympy(c)) if sympy.Rational(0) < r <= 1
            }
            assert count_roots(sturm_chain(c), F(0), F(1)) == len(distinct)
            checked += 1

    def test_refine_narrows(self):
        c = [F(-2), F(0), F(1)]  # x^2 - 2
        (iv,) = isolate_roots(c, F(1), F(2))
        narrow = refine_interval(c, iv, F(1, 1024))
        assert narrow[1] - narrow[0] <= F(1, 1024)
        assert float(narrow[0]) <= 2**0.5 <= float(narrow[1])


class TestSignAnalysis:
    def test_nonneg_true(self):
        ok, witness = nonneg_on_interval([F(0), F(0), F(1)], F(-1), F(1))
        assert ok and witness is None

    def test_nonneg_finds_witness(self):
        c = [F(-1, 4), F(0), F(1)]  # negative near zero
        ok, witness = nonneg_on_interval(c, F(-1), F(1))
        assert not ok
        assert peval(c, witness) < 0

    def test_touching_zero_is_nonneg(self):
        c = [F(1, 4), F(-1), F(1)]  # (x - 1/2)^2
        ok, _ = nonneg_on_interval(c, F(0), F(1))
        assert ok

    @given(polys)
    @settings(max_examples=60)
    def test_agrees_with_dense_scan(self, c):
        ok, witness = nonneg_on_interval(c, F(0), F(1))
        scan_min = min(peval(c, F(i, 400)) for i in range(401))
        if ok:
            assert scan_min >= 0
        else:
            assert peval(c, witness) < 0

    def test_sign_profile_reports_both_signs(self):
        c = pmul([F(-1, 3), F(1)], [F(-2, 3), F(1)])  # + - + on [0,1]
        has_pos, has_neg, pos_w, neg_w = sign_profile(c, F(0), F(1))
        assert has_pos and has_neg
        assert peval(c, pos_w) > 0
        assert peval(c, neg_w) < 0
        assert F(1, 3) < neg_w < F(2, 3)


def test_sturm_chain_endpoints_nonzero():
    chain = sturm_chain([F(0), F(-1), F(1)])  # x(x-1), roots at both endpoints
    assert count_roots(chain, F(0), F(1)) >= 1
