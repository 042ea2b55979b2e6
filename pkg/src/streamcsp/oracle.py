"""Exact optimum by exhaustive search, vectorized over assignment blocks.

Assignments are enumerated as integers; variable i's value is bit i-1.  Blocks
of up to 2^16 assignments are evaluated at once: each variable expands to a
uint8 value array and every clause becomes a handful of elementwise ops, so
(n=16, m=300) finishes well under a second.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .formula import Clause, ClauseKind, Formula

__all__ = ["OracleResult", "exact_val", "val_of", "batch_val"]

_BLOCK_BITS = 16


@dataclass
class OracleResult:
    val: int
    argmax: np.ndarray  # 0/1 per variable, length n
    evaluated: int


def _clause_sat(clause: Clause, var_bits) -> np.ndarray:
    """Vectorized satisfaction of one clause; var_bits maps var -> uint8 array."""
    lits = clause.literals
    lv = [var_bits(l.var) ^ np.uint8(1) if l.negated else var_bits(l.var) for l in lits]
    k = clause.kind
    if k is ClauseKind.UNIT:
        return lv[0]
    if k is ClauseKind.OR:
        sat = lv[0]
        for x in lv[1:]:
            sat = sat | x
        return sat
    if k is ClauseKind.XOR2:
        return lv[0] ^ lv[1]
    if k is ClauseKind.AND2:
        return lv[0] & lv[1]
    tt = np.array([(clause.truth_table >> row) & 1 for row in range(4)], dtype=np.uint8)
    return tt[2 * lv[0].astype(np.intp) + lv[1].astype(np.intp)]


def exact_val(formula: Formula, n_limit: int = 24) -> OracleResult:
    """Exhaustive maximum satisfied-clause count (plus tautology_count)."""
    n = formula.n
    if n > n_limit:
        raise ValueError("n=%d exceeds oracle limit %d" % (n, n_limit))
    total = 1 << n
    best = -1
    best_idx = 0
    block = 1 << min(n, _BLOCK_BITS)
    for start in range(0, total, block):
        idx = np.arange(start, start + block, dtype=np.uint64)
        cols = {}

        def var_bits(v, idx=idx, cols=cols):
            arr = cols.get(v)
            if arr is None:
                arr = ((idx >> np.uint64(v - 1)) & np.uint64(1)).astype(np.uint8)
                cols[v] = arr
            return arr

        acc = np.zeros(block, dtype=np.uint32)
        for c in formula.clauses:
            acc += _clause_sat(c, var_bits)
        k = int(np.argmax(acc))
        if int(acc[k]) > best:
            best = int(acc[k])
            best_idx = start + k
    if best < 0:  # no clauses evaluated (m = 0)
        best = 0
    bits = np.array([(best_idx >> (i - 1)) & 1 for i in range(1, n + 1)], dtype=np.uint8)
    return OracleResult(val=best + formula.tautology_count, argmax=bits, evaluated=total)


def val_of(formula: Formula, bits) -> int:
    """Satisfied-clause count of one assignment (plus tautology_count)."""
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.shape[0] != formula.n:
        raise ValueError("assignment length %d != n=%d" % (bits.shape[0], formula.n))
    return int(batch_val(formula, bits.reshape(1, -1))[0])


def batch_val(formula: Formula, bits_matrix) -> np.ndarray:
    """Satisfied-clause counts for S assignments given as an (S, n) 0/1 matrix."""
    bm = np.asarray(bits_matrix, dtype=np.uint8)
    if bm.ndim != 2 or bm.shape[1] != formula.n:
        raise ValueError("expected (S, n) matrix with n=%d" % formula.n)
    acc = np.zeros(bm.shape[0], dtype=np.uint32)

    def var_bits(v):
        return bm[:, v - 1]

    for c in formula.clauses:
        acc += _clause_sat(c, var_bits)
    return acc + np.uint32(formula.tautology_count)
