"""Exact-arithmetic inequality suite tying bias, counts and the true optimum.

All comparisons are integer-scaled (multiplied through by denominators) or use
rationals, so a failure is a genuine violation rather than a float artifact.
Writing S for the integer 2^(k_max-1)-scaled total bias (bias = S/2 at
k_max = 2), the checks are:

2AND (all And2 clauses):
    S <= 2 val                       greedy lower bound
    4 val <= 2m + S                  counting upper bound
    9 val >= 2m + S                  biased-coin lower bound
    16 val (m-S) >= 4m(m-S) + S^2    quadratic lower bound (when 3S <= 2m)

unit / 2OR:
    val <= m1 + m2
    4 val <= 2 m1 + 4 m2 + S         counting upper bound
    4 val >= 2 (m1 + m2) + S         all-ones lower bound
    16 m2 val >= 8 m1 m2 + 12 m2^2 + S^2   quadratic bound (when S <= 2 m2)

kSAT (OR clauses of arity <= k, exact rationals):
    val <= min(m, bias/2 + sum ((2^j + j - 2)/2^j) m_j)
    val >= sum (j/2^j) m_j + bias/2
    val >= sum (1 - 2^-j) m_j + bias^2/(4D)   (when bias <= D, D > 0)

pure 2XOR:
    val_OR(image) = m + val_XOR

Every run also checks the dispatched estimator: v <= val <= certified_ub and
v >= (alpha - 1e-12) val.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bias import BiasAccumulator
from .estimators import dispatch
from .formula import ClauseKind, Formula, decompose_to_and, stats
from .gapgen import xor_to_or
from .oracle import exact_val

__all__ = ["CheckResult", "verify_formula"]


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _scaled_bias(formula: Formula, k_max: int) -> int:
    acc = BiasAccumulator(mode="exact", k_max=k_max)
    acc.ingest_formula(formula)
    return acc.total_bias_scaled()


def _check(results, name, ok, detail=""):
    results.append(CheckResult(name, bool(ok), detail))


def verify_and_suite(formula: Formula, val_core: int, results) -> None:
    m = formula.m
    S = _scaled_bias(formula, 2)  # S = 2 * bias
    _check(results, "and_greedy_lower", S <= 2 * val_core, "S=%d val=%d" % (S, val_core))
    _check(results, "and_count_upper", 4 * val_core <= 2 * m + S, "m=%d S=%d val=%d" % (m, S, val_core))
    _check(results, "and_coin_lower", 9 * val_core >= 2 * m + S, "m=%d S=%d val=%d" % (m, S, val_core))
    if 3 * S <= 2 * m and m > S:
        lhs = 16 * val_core * (m - S)
        rhs = 4 * m * (m - S) + S * S
        _check(results, "and_quad_lower", lhs >= rhs, "m=%d S=%d val=%d" % (m, S, val_core))


def verify_or_suite(formula: Formula, val_core: int, results) -> None:
    st = stats(formula)
    m1, m2 = st.m_j(1), st.m_j(2)
    S = _scaled_bias(formula, 2)
    _check(results, "or_val_le_m", val_core <= m1 + m2)
    _check(results, "or_count_upper", 4 * val_core <= 2 * m1 + 4 * m2 + S,
           "m1=%d m2=%d S=%d val=%d" % (m1, m2, S, val_core))
    _check(results, "or_ones_lower", 4 * val_core >= 2 * (m1 + m2) + S,
           "m1=%d m2=%d S=%d val=%d" % (m1, m2, S, val_core))
    if m2 > 0 and S <= 2 * m2:
        lhs = 16 * m2 * val_core
        rhs = 8 * m1 * m2 + 12 * m2 * m2 + S * S
        _check(results, "or_quad_lower", lhs >= rhs, "m1=%d m2=%d S=%d val=%d" % (m1, m2, S, val_core))


def verify_ksat_suite(formula: Formula, val_core: int, results) -> None:
    st = stats(formula)
    k = max(st.max_arity, 1)
    unit = 1 << (k - 1)
    bias = Fraction(_scaled_bias(formula, k), unit)
    m = st.total_m
    v = Fraction(val_core)
    ub_terms = sum(Fraction(2**j + j - 2, 2**j) * st.m_j(j) for j in st.m)
    _check(results, "ksat_upper", v <= min(Fraction(m), bias / 2 + ub_terms),
           "bias=%s val=%d" % (bias, val_core))
    lo_linear = sum(Fraction(j, 2**j) * st.m_j(j) for j in st.m) + bias / 2
    _check(results, "ksat_linear_lower", v >= lo_linear, "bias=%s val=%d" % (bias, val_core))
    D = sum(Fraction(2**j - j - 1, 2 ** (j - 2)) * st.m_j(j) for j in st.m if j >= 2)
    if D > 0 and bias <= D:
        lo_quad = sum((1 - Fraction(1, 2**j)) * st.m_j(j) for j in st.m) + bias**2 / (4 * D)
        _check(results, "ksat_quad_lower", v >= lo_quad, "bias=%s D=%s val=%d" % (bias, D, val_core))


def verify_xor_suite(formula: Formula, val_core: int, results, n_limit: int) -> None:
    image = xor_to_or(formula)
    image.tautology_count = 0  # compare core values only
    val_or = exact_val(image, n_limit).val
    _check(results, "xor_or_identity", val_or == formula.m + val_core,
           "val_or=%d m=%d val_xor=%d" % (val_or, formula.m, val_core))


def verify_formula(formula: Formula, n_limit: int = 24) -> list:
    """Run every applicable suite; returns a list of CheckResult."""
    results: list = []
    val = exact_val(formula, n_limit).val
    val_core = val - formula.tautology_count
    kinds = {c.kind for c in formula.clauses}
    st = stats(formula)

    if formula.clauses:
        if kinds <= {ClauseKind.AND2}:
            verify_and_suite(formula, val_core, results)
        if kinds <= {ClauseKind.UNIT, ClauseKind.OR} and st.max_arity <= 2:
            verify_or_suite(formula, val_core, results)
        if kinds <= {ClauseKind.UNIT, ClauseKind.OR}:
            verify_ksat_suite(formula, val_core, results)
        if kinds == {ClauseKind.XOR2}:
            verify_xor_suite(formula, val_core, results, n_limit)
        if ClauseKind.AND2 in kinds or ClauseKind.GENERIC in kinds or ClauseKind.XOR2 in kinds:
            if kinds != {ClauseKind.AND2} and kinds != {ClauseKind.XOR2}:
                # mixed instance: check through the 2AND decomposition
                and_clauses = []
                const = 0
                for c in formula.clauses:
                    sub, sat = decompose_to_and(c)
                    and_clauses.extend(sub)
                    const += sat
                decomposed = Formula(n=formula.n, clauses=and_clauses)
                val_dec = exact_val(decomposed, n_limit).val
                _check(results, "decompose_identity", val_dec + const == val_core,
                       "val_dec=%d const=%d val=%d" % (val_dec, const, val_core))
                verify_and_suite(decomposed, val_dec, results)

    try:
        est = dispatch(formula, backend="exact")
        ok = (est.v <= val + 1e-9) and (val <= est.certified_ub + 1e-9) and \
            (est.v >= (est.alpha - 1e-12) * val - 1e-9)
        _check(results, "estimate_sound", ok,
               "v=%g alpha=%g ub=%g val=%d" % (est.v, est.alpha, est.certified_ub, val))
    except ValueError as e:
        _check(results, "estimate_sound", False, "dispatch failed: %s" % e)
    return results
