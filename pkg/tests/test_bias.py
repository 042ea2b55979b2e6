from fractions import Fraction

import numpy as np
import pytest

from streamcsp.bias import BiasAccumulator, bias_of_formula
from streamcsp.formula import Clause, ClauseKind, Formula, Literal, parse_text

from corpus import rand_mixed_formula


def _f(text):
    return parse_text(text)


class TestExact:
    def test_units_plus_or(self):
        # (x1), (not x1), (x1 or x2)
        f = _f("p mcsp 2 3\nu 1 0\nu -1 0\no 1 2 0\n")
        acc = bias_of_formula(f, k_max=2)
        assert acc.signed_count(1) == 1  # 2 - 2 + 1
        assert acc.signed_count(2) == 1
        assert acc.total_bias() == 1.0

    def test_and_pair(self):
        f = _f("p mcsp 2 2\na 1 -2 0\na 1 -2 0\n")
        acc = bias_of_formula(f, k_max=2)
        assert acc.total_bias() == 2.0
        assert acc.bias_of(1) == Fraction(1)
        assert acc.bias_of(2) == Fraction(1)

    def test_k3_weighted(self):
        # (x1 or x2 or x3), (not x1): bias_1 = |1/4 - 1| = 3/4, others 1/4
        f = _f("p cnf 3 2\n1 2 3 0\n-1 0\n")
        acc = bias_of_formula(f, k_max=3)
        assert acc.bias_of(1) == Fraction(3, 4)
        assert acc.bias_of(2) == Fraction(1, 4)
        assert acc.total_bias_fraction() == Fraction(5, 4)
        assert acc.total_bias() == 1.25

    def test_empty(self):
        assert bias_of_formula(Formula(n=3)).total_bias() == 0.0

    def test_arity_exceeds_kmax(self):
        acc = BiasAccumulator(mode="exact", k_max=2)
        c = Clause(ClauseKind.OR, tuple(Literal(i) for i in (1, 2, 3)))
        with pytest.raises(ValueError):
            acc.ingest_clause(c)

    def test_bad_mode(self):
        with pytest.raises(ValueError):
            BiasAccumulator(mode="approx")


class TestProperties:
    def test_bias_in_range_random(self):
        rng = np.random.default_rng(12)
        for _ in range(10_000):
            f = rand_mixed_formula(rng, n=int(rng.integers(2, 9)), m=int(rng.integers(1, 21)))
            acc = bias_of_formula(f, k_max=2)
            s = acc.total_bias_scaled()
            assert 0 <= s <= 2 * f.m  # 0 <= bias <= m at integer scale

    def test_global_negation_invariant(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            f = rand_mixed_formula(rng)
            g = Formula(n=f.n, clauses=[
                Clause(c.kind, tuple(l.negate() for l in c.literals), c.truth_table)
                for c in f.clauses])
            assert bias_of_formula(f).total_bias_scaled() == \
                bias_of_formula(g).total_bias_scaled()

    def test_single_variable_negation_invariant(self):
        f = _f("p mcsp 2 3\nu 1 0\nu 1 0\no -1 2 0\n")
        g = _f("p mcsp 2 3\nu -1 0\nu -1 0\no 1 2 0\n")
        assert bias_of_formula(f).total_bias() == bias_of_formula(g).total_bias()


class TestSketched:
    def test_matches_exact_high_amplification(self):
        rng = np.random.default_rng(21)
        hits = 0
        for seed in range(30):
            f = rand_mixed_formula(rng, n=10, m=30)
            exact = bias_of_formula(f, k_max=2).total_bias()
            acc = BiasAccumulator(mode="sketched", k_max=2, delta=0.1, t=15, seed=seed)
            acc.ingest_formula(f)
            b = acc.total_bias()
            if exact == 0.0:
                hits += int(abs(b) <= 1e-9)
            else:
                hits += int(abs(b - exact) <= 0.1 * exact)
        assert hits >= 29, hits

    def test_error_bracket(self):
        acc = BiasAccumulator(mode="sketched", k_max=2, delta=0.2, t=1, seed=5)
        acc.ingest_clause(Clause(ClauseKind.UNIT, (Literal(1),)))
        lo, hi = acc.error_bracket()
        assert lo <= acc.total_bias() <= hi

    def test_scaled_accessors_rejected(self):
        acc = BiasAccumulator(mode="sketched", k_max=2)
        with pytest.raises(ValueError):
            acc.total_bias_scaled()
        with pytest.raises(ValueError):
            acc.signed_count(1)
