"""Single-pass value estimators with certified upper bounds.

Each estimator consumes clause counts plus a (1 +/- delta)-approximation B of
the total bias and outputs a value v with a guaranteed approximation ratio
alpha:  val >= v >= (alpha - epsilon) * val at the sketch's confidence.
With the exact backend delta = 0 and the ratio holds exactly.

Ratios by instance class:

    units only (TR)              alpha = 1       (v = (m + bias)/2 is exact)
    2-clause OR only             alpha = 3/4     (trivial)
    units + 2-clause OR          alpha = sqrt(2)/2
    XOR present, no AND          alpha = 1/2     (trivial)
    any AND-type present         alpha = 4/9     (decompose to 2AND)
    OR clauses of arity <= k     alpha = sqrt(2)/2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bias import BiasAccumulator
from .formula import Clause, ClauseKind, Formula, PredClass, decompose_to_and, stats

__all__ = [
    "Estimate",
    "trivial_estimate",
    "tr_exact_estimate",
    "and_estimate",
    "or_estimate",
    "ksat_estimate",
    "cut_estimate_via_eor",
    "dispatch",
    "ALPHA_TR",
    "ALPHA_OR_TRIVIAL",
    "ALPHA_XOR",
    "ALPHA_AND",
    "ALPHA_ROOT2",
]

ALPHA_TR = 1.0
ALPHA_OR_TRIVIAL = 0.75
ALPHA_XOR = 0.5
ALPHA_AND = 4.0 / 9.0
ALPHA_ROOT2 = math.sqrt(2.0) / 2.0

PROVEN_EPS_MAX = 0.01


@dataclass
class Estimate:
    v: float
    alpha: float
    epsilon: float
    branch: str
    certified_ub: float
    digest: dict = field(default_factory=dict)
    regime: str = "proven"

    def __post_init__(self):
        if self.v < 0:
            raise ValueError("estimate must be nonnegative")

    def to_kv(self) -> str:
        return "v=%r alpha=%r eps=%r branch=%s ub=%r" % (
            self.v, self.alpha, self.epsilon, self.branch, self.certified_ub)


def _regime(epsilon: float) -> str:
    if epsilon == 0.0:
        return "exact"
    return "proven" if 0.0 < epsilon <= PROVEN_EPS_MAX else "outside_proven_regime"


def _ones_fraction(clause: Clause) -> float:
    k = clause.kind
    if k is ClauseKind.UNIT:
        return 0.5
    if k is ClauseKind.OR:
        return 1.0 - 2.0 ** (-clause.arity)
    if k is ClauseKind.XOR2:
        return 0.5
    if k is ClauseKind.AND2:
        return 0.25
    return bin(clause.truth_table).count("1") / 4.0


def trivial_estimate(formula: Formula, epsilon: float = 0.0) -> Estimate:
    """Output (min ones-fraction among predicates present) * m.

    A uniformly random assignment satisfies each clause with probability equal
    to its ones fraction, so v is a guaranteed lower bound on val while
    val <= m gives the ratio.
    """
    m = formula.m
    if m == 0:
        return Estimate(0.0, 1.0, epsilon, "trivial", 0.0, {"m": 0}, _regime(epsilon))
    frac = min(_ones_fraction(c) for c in formula.clauses)
    return Estimate(frac * m, frac, epsilon, "trivial", float(m), {"m": m}, _regime(epsilon))


def tr_exact_estimate(m: int, B: float, delta: float, epsilon: float = 0.0) -> Estimate:
    """Units-only estimator: val = (m + bias)/2 exactly, so v = (m + B/(1+delta))/2."""
    if B < 0:
        raise ValueError("negative bias estimate")
    v = (m + B / (1.0 + delta)) / 2.0
    ub = min(float(m), (m + B / (1.0 - delta)) / 2.0) if delta < 1.0 else float(m)
    return Estimate(v, ALPHA_TR, epsilon, "tr_exact", ub,
                    {"m": m, "B": B, "delta": delta}, _regime(epsilon))


def and_estimate(m: int, B: float, delta: float, epsilon: float = 0.0) -> Estimate:
    """Max-2AND estimator (all clauses And2).

    Low-bias branch uses the biased-coin bound 2(m + bias)/9; high-bias branch
    returns the greedy bound bias itself.  Certified upper bound (m + bias)/2.
    """
    if B < 0:
        raise ValueError("negative bias estimate")
    if m == 0:
        return Estimate(0.0, ALPHA_AND, epsilon, "and_low_bias", 0.0, {"m": 0, "B": B}, _regime(epsilon))
    if B <= (m / 3.0) * (1.0 - delta):
        v = 2.0 * (m + B) / (9.0 * (1.0 + delta))
        branch = "and_low_bias"
    else:
        v = B / (1.0 + delta)
        branch = "and_high_bias"
    ub = (m + B / (1.0 - delta)) / 2.0
    return Estimate(v, ALPHA_AND, epsilon, branch, ub,
                    {"m": m, "B": B, "delta": delta}, _regime(epsilon))


def or_estimate(m1: int, m2: int, B: float, delta: float, epsilon: float = 0.0) -> Estimate:
    """Estimator for mixed unit / 2-clause OR instances (ratio sqrt(2)/2)."""
    if m1 < 0 or m2 < 0:
        raise ValueError("negative clause counts")
    if B < 0:
        raise ValueError("negative bias estimate")
    m = m1 + m2
    if m == 0:
        return Estimate(0.0, ALPHA_ROOT2, epsilon, "or_low_bias", 0.0, {"m1": 0, "m2": 0, "B": B}, _regime(epsilon))
    if B <= (1.0 - delta) * m2:
        # m2 = 0 forces B = 0 here; B^2/m2 tends to 0
        ratio = (B * B / m2) if m2 > 0 else 0.0
        v = (1.0 - delta) ** 2 * (2.0 * m1 + 3.0 * m2 + ratio) / 4.0
        branch = "or_low_bias"
    else:
        v = (1.0 - delta) * (m1 + m2 + B) / 2.0
        branch = "or_high_bias"
    ub = min(float(m), (m1 + 2.0 * m2 + B / (1.0 - delta)) / 2.0)
    return Estimate(v, ALPHA_ROOT2, epsilon, branch, ub,
                    {"m1": m1, "m2": m2, "B": B, "delta": delta}, _regime(epsilon))


def ksat_D(m_vec: dict) -> float:
    """D = sum over j >= 2 of (2^j - j - 1)/2^(j-2) * m_j."""
    return sum(((2.0**j - j - 1.0) / 2.0 ** (j - 2)) * cnt for j, cnt in m_vec.items() if j >= 2)


def ksat_estimate(m_vec: dict, B: float, delta: float, epsilon: float = 0.0) -> Estimate:
    """Max-kSAT estimator over arity counts m_vec = {j: m_j} (ratio sqrt(2)/2)."""
    if B < 0:
        raise ValueError("negative bias estimate")
    if any(j < 1 or cnt < 0 for j, cnt in m_vec.items()):
        raise ValueError("invalid arity counts")
    m = sum(m_vec.values())
    if m == 0:
        return Estimate(0.0, ALPHA_ROOT2, epsilon, "ksat_low_bias", 0.0, {"m_vec": {}, "B": B}, _regime(epsilon))
    D = ksat_D(m_vec)
    sum_hi = sum((1.0 - 2.0 ** (-j)) * cnt for j, cnt in m_vec.items())
    sum_lo = sum((j / 2.0**j) * cnt for j, cnt in m_vec.items())
    if D > 0 and B <= (1.0 - delta) * D:
        v = sum_hi + (1.0 - delta) ** 2 * B * B / (4.0 * D)
        branch = "ksat_low_bias"
    else:
        v = sum_lo + (1.0 - delta) * B / 2.0
        branch = "ksat_high_bias"
    ub_terms = sum(((2.0**j + j - 2.0) / 2.0**j) * cnt for j, cnt in m_vec.items())
    ub = min(float(m), B / (2.0 * (1.0 - delta)) + ub_terms)
    return Estimate(v, ALPHA_ROOT2, epsilon, branch, ub,
                    {"m_vec": dict(m_vec), "B": B, "delta": delta}, _regime(epsilon))


def cut_estimate_via_eor(xor_m: int, eor_estimate_v: float) -> float:
    """Value estimate for a 2XOR instance from an estimate v on its OR image.

    If v <= val_OR then m/2 <= max(m/2, v - m) <= val_XOR.
    """
    return max(xor_m / 2.0, eor_estimate_v - xor_m)


# -- dispatch ----------------------------------------------------------------


def _bias_B(clauses, mode: str, k_max: int, delta: float, t: int, seed: int):
    if mode == "sketched":
        acc = BiasAccumulator(mode="sketched", k_max=k_max, delta=delta, t=t, seed=seed)
    else:
        acc = BiasAccumulator(mode="exact", k_max=k_max)
    for c in clauses:
        acc.ingest_clause(c)
    B = acc.total_bias()
    if mode == "sketched":
        cells = acc.backend.memory_cells
    else:
        cells = len(acc.backend.counts)
    return B, cells


def dispatch(formula: Formula, epsilon: float = 0.01, backend: str = "exact",
             seed: int = 0, t: int = 1, k_max: int = 63) -> Estimate:
    """Classify the predicates present and run the matching estimator.

    Mixed arity > 2 instances must be pure OR-form (units + OR clauses); any
    AND-type binary predicate routes everything through 2AND decomposition.
    Tautologies removed at parse are added back to both v and the certified
    upper bound, mirroring the exact solver.
    """
    if backend not in ("exact", "sketch"):
        raise ValueError("backend must be 'exact' or 'sketch'")
    if backend == "sketch" and not 0.0 < epsilon < 0.5:
        raise ValueError("epsilon must be in (0, 0.5)")
    st = stats(formula)
    classes = st.classes
    eps_rec = epsilon if backend == "sketch" else 0.0
    mode = "sketched" if backend == "sketch" else "exact"

    if "kOR" in classes:
        bad = classes - {PredClass.TR, PredClass.OR, "kOR"}
        if bad:
            raise ValueError("arity > 2 supported only for pure OR-form instances")
        if st.max_arity > k_max:
            raise ValueError("clause arity exceeds k_max")
        delta = eps_rec / 8.0
        B, cells = _bias_B(formula.clauses, mode, k_max, delta, t, seed)
        est = ksat_estimate(dict(st.m), B, delta, eps_rec)
        est.digest["memory_cells"] = cells
    elif PredClass.AND in classes:
        and_clauses = []
        const = 0
        for c in formula.clauses:
            sub, sat = decompose_to_and(c)
            and_clauses.extend(sub)
            const += sat
        delta = eps_rec / 2.0
        B, cells = _bias_B(and_clauses, mode, 2, delta, t, seed)
        est = and_estimate(len(and_clauses), B, delta, eps_rec)
        est.digest["memory_cells"] = cells
        est.v += const
        est.certified_ub += const
    elif PredClass.XOR in classes:
        est = trivial_estimate(formula, eps_rec)
    elif PredClass.OR in classes and PredClass.TR in classes:
        delta = eps_rec / 4.0
        B, cells = _bias_B(formula.clauses, mode, 2, delta, t, seed)
        est = or_estimate(st.m_j(1), st.m_j(2), B, delta, eps_rec)
        est.digest["memory_cells"] = cells
    elif PredClass.OR in classes:
        est = trivial_estimate(formula, eps_rec)
    elif PredClass.TR in classes:
        delta = eps_rec / 2.0
        B, cells = _bias_B(formula.clauses, mode, 2, delta, t, seed)
        est = tr_exact_estimate(formula.m, B, delta, eps_rec)
        est.digest["memory_cells"] = cells
    else:  # no clauses at all
        est = Estimate(0.0, 1.0, eps_rec, "trivial", 0.0, {"m": 0}, _regime(eps_rec))

    if formula.tautology_count:
        est.v += formula.tautology_count
        est.certified_ub += formula.tautology_count
    return est
