"""Exact and sketched accumulation of the bias vector.

The bias of variable i weights each literal occurrence by 2^(1-r) for an
r-clause and takes the absolute value of the signed total; the total bias is
the l1 norm of the per-variable vector.  For 2CSP (k_max = 2) this reduces to

    bias_i = 1/2 * |2*pos1_i + pos2_i - 2*neg1_i - neg2_i|

All increments are scaled by 2^(k_max - 1) so the exact backend is
integer-exact: a literal in an r-clause contributes +/- 2^(k_max - r) to the
integer counter t_i and bias_i = |t_i| / 2^(k_max - 1).
"""

from __future__ import annotations

from fractions import Fraction

from .formula import Clause, Formula
from .l1sketch import ExactL1, L1Sketch

__all__ = ["BiasAccumulator"]


class BiasAccumulator:
    """Accumulates per-variable signed occurrence counts.

    mode='exact' keeps a dense integer counter per variable; mode='sketched'
    streams the same integers into an L1Sketch, so memory is O(sketch width).
    """

    def __init__(self, mode: str = "exact", k_max: int = 63, delta: float = 0.1,
                 t: int = 1, seed: int = 0):
        if mode not in ("exact", "sketched"):
            raise ValueError("mode must be 'exact' or 'sketched'")
        if k_max < 1:
            raise ValueError("k_max must be >= 1")
        self.mode = mode
        self.k_max = int(k_max)
        self.unit = 1 << (self.k_max - 1)  # integer scale: 2^(k_max-1)
        if mode == "exact":
            self.backend = ExactL1(scale=float(self.unit))
        else:
            self.backend = L1Sketch(delta=delta, t=t, seed=seed, scale=float(self.unit))

    @property
    def delta(self) -> float:
        return self.backend.delta

    def ingest_clause(self, clause: Clause) -> None:
        r = clause.arity
        if r > self.k_max:
            raise ValueError("clause arity %d exceeds k_max %d" % (r, self.k_max))
        weight = 1 << (self.k_max - r)
        for lit in clause.literals:
            self.backend.update(lit.var, -weight if lit.negated else weight)

    def ingest_formula(self, formula: Formula) -> None:
        for c in formula.clauses:
            self.ingest_clause(c)

    def total_bias(self) -> float:
        """Exact mode: the exact total bias.  Sketched mode: B with
        B in (1 +/- delta) * bias at the sketch's confidence."""
        return self.backend.estimate()

    def error_bracket(self) -> tuple:
        return self.backend.error_bracket()

    # -- exact-mode accessors for integer-arithmetic lemma checks -----------

    def total_bias_scaled(self) -> int:
        """Sum of |t_i| in integer stream units (total bias * 2^(k_max-1))."""
        if self.mode != "exact":
            raise ValueError("scaled bias requires exact mode")
        return self.backend.estimate_scaled()

    def total_bias_fraction(self) -> Fraction:
        return Fraction(self.total_bias_scaled(), self.unit)

    def signed_count(self, i: int) -> int:
        """Integer counter t_i (exact mode)."""
        if self.mode != "exact":
            raise ValueError("per-variable counts require exact mode")
        return self.backend.counts.get(i, 0)

    def bias_of(self, i: int) -> Fraction:
        return Fraction(abs(self.signed_count(i)), self.unit)


def bias_of_formula(formula: Formula, k_max: int = 63) -> BiasAccumulator:
    """Convenience: exact accumulator over a whole formula."""
    acc = BiasAccumulator(mode="exact", k_max=k_max)
    acc.ingest_formula(formula)
    return acc
