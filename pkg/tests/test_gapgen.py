import io
import math

import numpy as np
import pytest

from streamcsp.formula import ClauseKind, parse_text
from streamcsp.gapgen import (DbhpParams, gen_dbhp, gen_gap_instance, m_cross, read_instance,
                              write_instance, xor_to_or)
from streamcsp.oracle import exact_val, val_of

from corpus import rand_assignment, rand_xor_formula


def small_params(seed, n=16, beta=0.15, T=40):
    return DbhpParams(n=n, beta=beta, T=T, seed=seed)


class TestParams:
    def test_validation(self):
        with pytest.raises(ValueError):
            DbhpParams(n=1, beta=0.1, T=1)
        with pytest.raises(ValueError):
            DbhpParams(n=4, beta=3.0, T=1)  # 2*beta/n > 1
        with pytest.raises(ValueError):
            DbhpParams(n=4, beta=0.0, T=1)

    def test_asymptotic_defaults_schedule(self):
        p = DbhpParams.asymptotic_defaults(n=100, epsilon=10.0, c=1.0)
        assert p.T == int((10000.0 / 100.0) ** 3 * 100.0)
        assert p.beta == pytest.approx((10.0 * p.T) ** (-2.0 / 3.0))
        assert p.beta * p.T == pytest.approx(10000.0 / 100.0, rel=1e-6)


class TestDbhp:
    def test_yes_marks_cross(self):
        for seed in range(50):
            xstar, marked, _ = gen_dbhp(small_params(seed), "YES")
            if marked.shape[0]:
                assert np.all(xstar[marked[:, 0]] != xstar[marked[:, 1]])

    def test_no_marks_same_side(self):
        for seed in range(50):
            xstar, marked, _ = gen_dbhp(small_params(seed), "NO")
            if marked.shape[0]:
                assert np.all(xstar[marked[:, 0]] == xstar[marked[:, 1]])

    def test_planted_nondegenerate(self):
        for seed in range(20):
            xstar, _, _ = gen_dbhp(small_params(seed), "YES")
            assert 0 < int(xstar.sum()) < xstar.shape[0]

    def test_bad_case(self):
        with pytest.raises(ValueError):
            gen_dbhp(small_params(0), "MAYBE")

    def test_degenerate_edge_probability_one(self):
        p = DbhpParams(n=2, beta=1.0, T=3, seed=4)
        _, marked, _ = gen_dbhp(p, "YES")
        # the single possible edge appears every round; kept rounds depend on X*


class TestReductions:
    def test_eand_counts(self):
        p = small_params(3)
        inst = gen_gap_instance(p, "YES", "eand")
        na = int(p.beta * p.n * p.T / 4.0)
        assert inst.formula.m == na + 2 * inst.m_dbhp
        assert all(c.kind is ClauseKind.AND2 for c in inst.formula.clauses)

    def test_eand_yes_planted_value(self):
        p = small_params(5)
        inst = gen_gap_instance(p, "YES", "eand")
        na = int(p.beta * p.n * p.T / 4.0)
        assert val_of(inst.formula, inst.planted) == na + inst.m_dbhp

    def test_or_counts(self):
        p = small_params(7)
        inst = gen_gap_instance(p, "YES", "or")
        nu = int((math.sqrt(2.0) - 1.0) / 2.0 * p.beta * p.n * p.T)
        assert inst.formula.m == 2 * nu + 2 * inst.m_dbhp

    def test_or_yes_planted_satisfies_all(self):
        for seed in range(20):
            inst = gen_gap_instance(small_params(seed), "YES", "or")
            assert val_of(inst.formula, inst.planted) == inst.formula.m

    def test_or_no_planted_one_per_pair(self):
        inst = gen_gap_instance(small_params(9), "NO", "or")
        nu_clauses = inst.formula.m - 2 * inst.m_dbhp
        assert val_of(inst.formula, inst.planted) == nu_clauses + inst.m_dbhp

    def test_bad_reduction(self):
        with pytest.raises(ValueError):
            gen_gap_instance(small_params(0), "YES", "cut")

    def test_determinism(self):
        a = gen_gap_instance(small_params(11), "NO", "eand")
        b = gen_gap_instance(small_params(11), "NO", "eand")
        assert a.formula.clauses == b.formula.clauses
        assert np.array_equal(a.planted, b.planted)


class TestXorToOr:
    def test_single_edge(self):
        f = parse_text("p mcsp 2 1\nx 1 2 0\n")
        g = xor_to_or(f)
        assert g.m == 2 and exact_val(g).val == 2

    def test_triangle(self):
        f = parse_text("p mcsp 3 3\nx 1 2 0\nx 2 3 0\nx 1 3 0\n")
        g = xor_to_or(f)
        assert g.m == 6 and exact_val(g).val == 5

    def test_identity_random(self):
        rng = np.random.default_rng(81)
        for _ in range(200):
            f = rand_xor_formula(rng, n=8)
            g = xor_to_or(f)
            assert exact_val(g).val == f.m + exact_val(f).val

    def test_rejects_non_xor(self):
        with pytest.raises(ValueError):
            xor_to_or(parse_text("p mcsp 2 1\no 1 2 0\n"))


class TestMCross:
    def test_sigma_equals_planted_no_case(self):
        inst = gen_gap_instance(small_params(13), "NO", "eand")
        assert m_cross(inst, inst.planted) == 0
        assert m_cross(inst, 1 - inst.planted) == 0

    def test_matches_double_loop(self):
        rng = np.random.default_rng(82)
        for seed in range(20):
            inst = gen_gap_instance(small_params(seed), "NO", "eand")
            sigma = rand_assignment(rng, inst.params.n)
            expect = 0
            for i, j in inst.marked_edges.tolist():
                if sigma[i] != sigma[j] and inst.planted[i] == inst.planted[j]:
                    expect += 1
            assert m_cross(inst, sigma) == expect


class TestIO:
    def test_write_read_roundtrip(self):
        inst = gen_gap_instance(small_params(15), "YES", "or")
        buf = io.StringIO()
        write_instance(inst, buf)
        buf.seek(0)
        formula, planted, case = read_instance(buf)
        assert formula.clauses == inst.formula.clauses
        assert np.array_equal(planted, inst.planted)
        assert case == "YES"
