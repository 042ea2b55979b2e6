import numpy as np

from streamcsp.formula import parse_text
from streamcsp.verify import verify_formula

from corpus import (rand_and_formula, rand_eor_formula, rand_ksat_formula, rand_mixed_formula,
                    rand_or_formula, rand_xor_formula)


def names(results):
    return [r.name for r in results]


def all_ok(results):
    return all(r.ok for r in results), [(r.name, r.detail) for r in results if not r.ok]


class TestSuiteSelection:
    def test_and_instance(self):
        res = verify_formula(parse_text("p mcsp 2 3\na 1 2 0\na -1 2 0\na 1 -2 0\n"))
        got = names(res)
        assert "and_greedy_lower" in got and "and_quad_lower" in got
        assert "estimate_sound" in got
        ok, bad = all_ok(res)
        assert ok, bad

    def test_or_instance(self):
        res = verify_formula(parse_text("p mcsp 2 3\nu 1 0\nu -1 0\no 1 2 0\n"))
        got = names(res)
        assert "or_quad_lower" in got and "ksat_upper" in got
        ok, bad = all_ok(res)
        assert ok, bad

    def test_xor_instance(self):
        res = verify_formula(parse_text("p mcsp 3 3\nx 1 2 0\nx 2 3 0\nx 1 3 0\n"))
        assert "xor_or_identity" in names(res)
        ok, bad = all_ok(res)
        assert ok, bad

    def test_mixed_instance_decomposes(self):
        res = verify_formula(parse_text("p mcsp 2 3\no 1 2 0\na 1 2 0\nx 1 2 0\n"))
        assert "decompose_identity" in names(res)
        ok, bad = all_ok(res)
        assert ok, bad

    def test_ksat_instance(self):
        res = verify_formula(parse_text("p cnf 3 2\n1 2 3 0\n-1 0\n"))
        got = names(res)
        assert "ksat_quad_lower" in got and "or_val_le_m" not in got
        ok, bad = all_ok(res)
        assert ok, bad


class TestRandomCorpora:
    def test_random_instances_all_pass(self):
        rng = np.random.default_rng(91)
        builders = [rand_and_formula, rand_or_formula, rand_eor_formula,
                    rand_ksat_formula, rand_xor_formula, rand_mixed_formula]
        for build in builders:
            for _ in range(50):
                f = build(rng, n=6, m=15)
                ok, bad = all_ok(verify_formula(f))
                assert ok, (build.__name__, bad)

    def test_empty_formula(self):
        from streamcsp.formula import Formula
        res = verify_formula(Formula(n=2))
        ok, bad = all_ok(res)
        assert ok, bad
