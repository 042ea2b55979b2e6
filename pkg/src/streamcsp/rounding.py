"""Assignment constructors: greedy bias rounding and biased-coin samplers.

Every sampler first flips (negates) the variables whose signed occurrence
count is negative, so each variable's bias points toward 1, then assigns 1
independently with probability 1/2 + gamma.  The flip vector is recorded in
the plan so sampled assignments map back to the original variables.

Expected satisfied-clause counts:

    2AND, gamma = bias/(2(m - 2 bias)) (valid when bias <= m/3):
        E >= m/4 + bias^2 / (4(m - 2 bias)) >= 2(m + bias)/9
    2OR,  gamma = bias/(2 m2) when bias <= m2:
        E >= m1/2 + 3 m2/4 + bias^2/(4 m2)
          gamma = 1/2 otherwise:  value >= (m1 + m2 + bias)/2
    kSAT, gamma = bias/(2 D), D = sum_{j>=2} (2^j - j - 1)/2^(j-2) m_j:
        E >= sum_j (1 - 2^-j) m_j + bias^2/(4 D)
          greedy all-ones otherwise: value >= sum_j (j/2^j) m_j + bias/2

Sampling uses a counter-based Philox generator, so identical seeds reproduce
assignments bit-exactly across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bias import BiasAccumulator
from .estimators import ksat_D
from .formula import Formula, stats

__all__ = [
    "Assignment",
    "RoundingPlan",
    "greedy_bias_assignment",
    "gamma_and",
    "gamma_or",
    "gamma_ksat",
    "make_plan_and",
    "make_plan_or",
    "make_plan_ksat",
    "sample_and",
    "sample_or",
    "sample_ksat",
]


@dataclass
class Assignment:
    bits: np.ndarray  # 0/1 per variable

    @property
    def n(self) -> int:
        return int(self.bits.shape[0])

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    @classmethod
    def from_string(cls, s: str) -> "Assignment":
        return cls(np.array([1 if ch == "1" else 0 for ch in s], dtype=np.uint8))


@dataclass
class RoundingPlan:
    gamma: float
    per_variable_flip: np.ndarray  # bool, length n; True = variable was negated
    mode: str = "iid"  # 'iid' Bernoulli(1/2+gamma) or 'greedy' all-ones

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 0.5:
            raise ValueError("gamma must lie in [0, 0.5]")


def _signed_counts(formula: Formula, k_max: int = 2) -> np.ndarray:
    """Integer signed occurrence counts t_i (bias scaling), index 0..n-1."""
    acc = BiasAccumulator(mode="exact", k_max=k_max)
    acc.ingest_formula(formula)
    out = np.zeros(formula.n, dtype=np.int64)
    for i, v in acc.backend.counts.items():
        out[i - 1] = v
    return out


def _flip_vector(formula: Formula, k_max: int = 2) -> np.ndarray:
    return _signed_counts(formula, k_max) < 0


def greedy_bias_assignment(formula: Formula) -> Assignment:
    """Set x_i = 1 iff its positive occurrences are >= negative ones (ties -> 1).

    On 2AND instances this satisfies at least bias(formula) clauses.
    """
    t = _signed_counts(formula, max(stats(formula).max_arity, 1))
    return Assignment((t >= 0).astype(np.uint8))


def gamma_and(m: int, bias: float) -> float:
    if bias < 0 or bias > m / 3.0:
        raise ValueError("gamma_and requires 0 <= bias <= m/3")
    if bias == 0:
        return 0.0
    return bias / (2.0 * (m - 2.0 * bias))


def gamma_or(m2: int, bias: float) -> float:
    if bias < 0:
        raise ValueError("negative bias")
    if bias <= m2 and m2 > 0:
        return bias / (2.0 * m2)
    if bias == 0:
        return 0.0
    return 0.5


def gamma_ksat(D: float, bias: float) -> float:
    if bias < 0:
        raise ValueError("negative bias")
    if D > 0 and bias <= D:
        return bias / (2.0 * D)
    if bias == 0:
        return 0.0
    return 0.5


def make_plan_and(formula: Formula) -> RoundingPlan:
    """Biased-coin plan for 2AND; requires bias <= m/3 (else use greedy)."""
    acc = BiasAccumulator(mode="exact", k_max=2)
    acc.ingest_formula(formula)
    bias = float(acc.total_bias())
    return RoundingPlan(gamma_and(formula.m, bias), _flip_vector(formula))


def make_plan_or(formula: Formula) -> RoundingPlan:
    st = stats(formula)
    acc = BiasAccumulator(mode="exact", k_max=2)
    acc.ingest_formula(formula)
    bias = float(acc.total_bias())
    return RoundingPlan(gamma_or(st.m_j(2), bias), _flip_vector(formula))


def make_plan_ksat(formula: Formula, k_max: int = 63) -> RoundingPlan:
    st = stats(formula)
    if st.max_arity > k_max:
        raise ValueError("clause arity exceeds k_max")
    # scale by the actual max arity so integer counters stay small
    k = max(st.max_arity, 1)
    acc = BiasAccumulator(mode="exact", k_max=k)
    acc.ingest_formula(formula)
    bias = float(acc.total_bias())
    D = ksat_D(dict(st.m))
    if D > 0 and bias <= D:
        return RoundingPlan(gamma_ksat(D, bias), _flip_vector(formula, k))
    # high-bias branch: greedy all-ones on flip-adjusted variables
    return RoundingPlan(0.5, _flip_vector(formula, k), mode="greedy")


def _sample(plan: RoundingPlan, n: int, rng_seed: int, count: int | None = None):
    flip = plan.per_variable_flip.astype(np.uint8)
    if flip.shape[0] != n:
        raise ValueError("plan flip vector length %d != n=%d" % (flip.shape[0], n))
    shape = (n,) if count is None else (count, n)
    if plan.mode == "greedy" or plan.gamma >= 0.5:
        bits = np.ones(shape, dtype=np.uint8)
    else:
        rng = np.random.Generator(np.random.Philox(key=rng_seed))
        bits = (rng.random(shape) < 0.5 + plan.gamma).astype(np.uint8)
    return bits ^ flip


def sample_and(plan: RoundingPlan, n: int, rng_seed: int) -> Assignment:
    return Assignment(_sample(plan, n, rng_seed))


def sample_or(plan: RoundingPlan, n: int, rng_seed: int) -> Assignment:
    return Assignment(_sample(plan, n, rng_seed))


def sample_ksat(plan: RoundingPlan, n: int, rng_seed: int) -> Assignment:
    return Assignment(_sample(plan, n, rng_seed))


def sample_many(plan: RoundingPlan, n: int, rng_seed: int, count: int) -> np.ndarray:
    """(count, n) matrix of i.i.d. sampled assignments (for Monte-Carlo tests)."""
    return _sample(plan, n, rng_seed, count)
