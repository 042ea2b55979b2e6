import numpy as np
import pytest

from streamcsp.bias import bias_of_formula
from streamcsp.estimators import ksat_D
from streamcsp.formula import parse_text, stats
from streamcsp.oracle import batch_val, exact_val, val_of
from streamcsp.rounding import (Assignment, RoundingPlan, gamma_and, gamma_ksat, gamma_or,
                                greedy_bias_assignment, make_plan_and, make_plan_ksat,
                                make_plan_or, sample_and, sample_many, sample_or)

from corpus import rand_and_formula


class TestAssignment:
    def test_string_roundtrip(self):
        a = Assignment.from_string("1011")
        assert a.n == 4 and a.to_string() == "1011"

    def test_plan_gamma_range(self):
        with pytest.raises(ValueError):
            RoundingPlan(0.6, np.zeros(2, dtype=bool))


class TestGreedy:
    def test_and_pair(self):
        f = parse_text("p mcsp 2 2\na 1 -2 0\na 1 -2 0\n")
        a = greedy_bias_assignment(f)
        assert a.to_string() == "10"
        assert val_of(f, a.bits) == 2

    def test_single_and(self):
        f = parse_text("p mcsp 2 1\na 1 2 0\n")
        a = greedy_bias_assignment(f)
        assert a.to_string() == "11" and val_of(f, a.bits) == 1

    def test_ties_go_to_one(self):
        f = parse_text("p mcsp 1 2\nu 1 0\nu -1 0\n")
        assert greedy_bias_assignment(f).to_string() == "1"

    def test_value_at_least_bias_random(self):
        rng = np.random.default_rng(51)
        for _ in range(200):
            f = rand_and_formula(rng)
            a = greedy_bias_assignment(f)
            scaled = bias_of_formula(f, k_max=2).total_bias_scaled()
            assert 2 * val_of(f, a.bits) >= scaled  # val >= bias, integer-scaled


class TestGamma:
    def test_and_values(self):
        assert gamma_and(3, 1.0) == 0.5
        assert gamma_and(4, 1.0) == 0.25
        assert gamma_and(10, 0.0) == 0.0
        with pytest.raises(ValueError):
            gamma_and(3, 2.0)

    def test_or_values(self):
        assert gamma_or(4, 4.0) == 0.5
        assert gamma_or(4, 0.0) == 0.0
        assert gamma_or(4, 1.0) == 0.125
        assert gamma_or(0, 3.0) == 0.5
        assert gamma_or(0, 0.0) == 0.0

    def test_ksat_values(self):
        assert gamma_ksat(2.0, 1.25) == 0.3125
        assert gamma_ksat(0.0, 0.0) == 0.0
        assert gamma_ksat(2.0, 3.0) == 0.5


class TestSampling:
    def test_philox_determinism(self):
        f = parse_text("p mcsp 2 3\na 1 2 0\na -1 2 0\na 1 -2 0\n")
        plan = make_plan_and(f)
        a1 = sample_and(plan, f.n, 99)
        a2 = sample_and(plan, f.n, 99)
        assert np.array_equal(a1.bits, a2.bits)

    def test_gamma_half_is_greedy(self):
        f = parse_text("p mcsp 2 2\na 1 -2 0\na 1 -2 0\n")
        # bias=2 > m/3, so the caller would normally go greedy; force gamma=0.5
        plan = RoundingPlan(0.5, np.array([False, True]))
        a = sample_and(plan, 2, 7)
        assert np.array_equal(a.bits, greedy_bias_assignment(f).bits)

    def test_and_expectation_monte_carlo(self):
        # m=3, bias=1: gamma=0.5 -> deterministic; expected value m/4+g*b+(2b-m)g^2 = 1.0
        f = parse_text("p mcsp 2 3\na 1 2 0\na -1 2 0\na 1 -2 0\n")
        plan = make_plan_and(f)
        assert plan.gamma == 0.5
        mat = sample_many(plan, f.n, 11, 100_000)
        mean = float(batch_val(f, mat).mean())
        assert abs(mean - 1.0) <= 0.015

    def test_gamma_zero_and_rate(self):
        f = parse_text("p mcsp 2 1\na 1 2 0\n")
        plan = RoundingPlan(0.0, np.zeros(2, dtype=bool))
        mat = sample_many(plan, 2, 17, 100_000)
        rate = float(batch_val(f, mat).mean())
        assert abs(rate - 0.25) <= 0.01

    def test_or_high_bias_deterministic(self):
        f = parse_text("p mcsp 2 3\nu 1 0\nu 1 0\no 1 2 0\n")
        plan = make_plan_or(f)
        assert plan.gamma == 0.5
        a = sample_or(plan, f.n, 1)
        assert val_of(f, a.bits) == 3  # (m1+m2+bias)/2 = 3

    def test_ksat_plan_example(self):
        f = parse_text("p cnf 3 2\n1 2 3 0\n-1 0\n")
        plan = make_plan_ksat(f)
        assert plan.gamma == pytest.approx(0.3125)
        st = stats(f)
        assert ksat_D(dict(st.m)) == 2.0
        mat = sample_many(plan, f.n, 23, 100_000)
        mean = float(batch_val(f, mat).mean())
        assert mean >= 1.5703125 - 0.02

    def test_ksat_greedy_branch(self):
        f = parse_text("p mcsp 1 2\nu 1 0\nu 1 0\n")
        plan = make_plan_ksat(f)
        assert plan.mode == "greedy"
        a = sample_or(plan, f.n, 1)
        assert val_of(f, a.bits) == 2

    def test_sample_never_beats_oracle(self):
        rng = np.random.default_rng(61)
        for _ in range(30):
            f = rand_and_formula(rng, n=8, m=20)
            b = bias_of_formula(f, k_max=2).total_bias()
            if b > f.m / 3.0:
                continue
            plan = make_plan_and(f)
            mat = sample_many(plan, f.n, 3, 200)
            assert int(batch_val(f, mat).max()) <= exact_val(f).val

    def test_length_mismatch(self):
        plan = RoundingPlan(0.1, np.zeros(3, dtype=bool))
        with pytest.raises(ValueError):
            sample_and(plan, 5, 1)
