"""Randomized statement checking: battery composition, determinism, replay records."""

import json
import random
from fractions import Fraction

import pytest

from dualrisk import (
    DomainError,
    DualPower,
    Identity,
    Quadratic,
    SignClass,
    THEOREMS,
    converse_check,
    converse_witness_search,
    direct_battery,
    direct_check,
    dt_value,
    finite_difference,
    finite_difference_sign,
    random_base,
    random_mixed_tabulated,
    random_pair,
    rebuild_pair,
    run_theorem,
    PairProvenance,
)

F = Fraction


class TestBattery:
    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_composition(self, m):
        battery = direct_battery(m)
        relations = [rel for _, rel in battery]
        assert relations.count("le") == 2
        assert (DualPower(m), "ge") in battery
        assert (Identity(), "eq") in battery
        # every lower-order dual power is a zero-derivative control
        for j in range(1, m):
            assert (DualPower(j), "eq") in battery

    def test_rng_adds_a_mixture(self):
        plain = direct_battery(3)
        seeded = direct_battery(3, random.Random(0))
        assert len(seeded) == len(plain) + 1

    def test_order_one_rejected(self):
        with pytest.raises(DomainError):
            direct_battery(1)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_battery_is_honest_on_a_known_pair(self, m):
        # the battery's stated relations must themselves hold on a clean
        # minimal-gap pair, otherwise direct runs would flag good pairs
        rng = random.Random(m)
        pair = random_pair(rng, m)
        assert direct_check(pair, rng) == []


class TestRandomSources:
    def test_random_base_shape(self):
        rng = random.Random(7)
        for m in (2, 3, 4, 5):
            base = random_base(rng, m)
            assert base.n >= m
            gaps = [b - a for a, b in zip(base.outcomes, base.outcomes[1:])]
            assert all(g >= 1 for g in gaps)

    def test_random_pair_is_rankable_and_valid(self):
        rng = random.Random(13)
        for m in (2, 3, 4, 5):
            pair = random_pair(rng, m)
            assert pair.order == m
            assert list(pair.c.outcomes) == sorted(pair.c.outcomes)
            assert list(pair.d.outcomes) == sorted(pair.d.outcomes)

    def test_random_mixed_tabulated_certificate(self):
        rng = random.Random(3)
        for m in (3, 4):
            w = random_mixed_tabulated(rng, m)
            cert = finite_difference_sign(w, m, 256)
            assert cert.kind is SignClass.MIXED


class TestConverse:
    def test_vacuous_for_right_sign_weighting(self):
        record = converse_check(DualPower(3), 3)
        assert record["status"] == "vacuous"
        assert record["certificate"] == "non-negative"

    def test_vacuous_for_zero_derivative(self):
        record = converse_check(Quadratic(F(1, 2)), 3)
        assert record["status"] == "vacuous"

    def test_violation_record_replays(self):
        rng = random.Random(5)
        w = random_mixed_tabulated(rng, 3)
        record = converse_check(w, 3)
        assert record["status"] == "violation"
        assert record["direction"] == -1
        pair = rebuild_pair(PairProvenance.from_json(json.dumps(record["pair"])))
        assert dt_value(pair.d, w) < dt_value(pair.c, w)

    def test_witness_search_finds_the_window(self):
        rng = random.Random(9)
        w = random_mixed_tabulated(rng, 4)
        found = converse_witness_search(w, 4)
        assert found is not None
        n, j, window = found
        assert window > 0
        assert finite_difference(w, 4, F(j, n), F(1, n)) == window

    def test_witness_search_none_for_clean_weighting(self):
        assert converse_witness_search(DualPower(4), 4) is None


class TestRunTheorem:
    @pytest.mark.parametrize("theorem", sorted(THEOREMS))
    def test_small_runs_pass(self, theorem):
        kind, orders = THEOREMS[theorem]
        reports = run_theorem(theorem, trials=4, seed=20)
        assert [r.order for r in reports] == list(orders)
        for report in reports:
            assert report.kind == kind
            assert report.theorem == theorem
            assert report.trials == 4
            assert report.passed
            assert report.failures == ()

    def test_deterministic_given_seed(self):
        a = run_theorem(5, trials=3, seed=77)
        b = run_theorem(5, trials=3, seed=77)
        assert a == b

    def test_seed_changes_the_draws(self):
        rng_a, rng_b = random.Random(1 * 1000003 + 3), random.Random(2 * 1000003 + 3)
        assert random_pair(rng_a, 3) != random_pair(rng_b, 3)

    def test_unknown_statement_number(self):
        with pytest.raises(DomainError):
            run_theorem(7, trials=1, seed=0)
