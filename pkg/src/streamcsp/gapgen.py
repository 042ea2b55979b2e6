"""Hard YES/NO instance generators.

A hidden partition X* of the variables is drawn uniformly; T rounds of sparse
random graphs G(n, 2 beta / n) are sampled and each edge is marked according
to the case: in YES instances the marked edges are exactly those crossing X*,
in NO instances exactly those inside a side.  The marked edges plus fresh
one-sided samples ("Alice part") are compiled into 2AND or unit/2OR formulas
whose optimum is m in the YES case but bounded away from m in the NO case.

Also provides the XOR -> OR clause-pair rewriting with val_OR = m + val_XOR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .formula import Clause, ClauseKind, Formula, Literal, parse

__all__ = [
    "DbhpParams",
    "GapInstance",
    "gen_dbhp",
    "reduce_eand",
    "reduce_or",
    "gen_gap_instance",
    "xor_to_or",
    "m_cross",
    "write_instance",
    "read_instance",
]

SQRT2 = math.sqrt(2.0)


@dataclass
class DbhpParams:
    n: int
    beta: float
    T: int
    epsilon: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.beta <= 0.0 or 2.0 * self.beta / self.n > 1.0:
            raise ValueError("edge probability 2*beta/n must lie in (0, 1]")
        if self.T < 0:
            raise ValueError("T must be nonnegative")

    @classmethod
    def asymptotic_defaults(cls, n: int, epsilon: float, c: float = 1.0, seed: int = 0) -> "DbhpParams":
        """Asymptotic parameter schedule: T = (10000/eps^2)^3 (10c)^2 and
        beta = (10 c T)^(-2/3), so beta*T = 10000/eps^2.  Desk-scale runs
        should pass explicit (beta, T) instead."""
        T = int((10000.0 / epsilon**2) ** 3 * (10.0 * c) ** 2)
        beta = (10.0 * c * T) ** (-2.0 / 3.0)
        return cls(n=n, beta=beta, T=T, epsilon=epsilon, seed=seed)


@dataclass
class GapInstance:
    formula: Formula
    planted: np.ndarray  # X*, 0/1 per variable
    case: str  # 'YES' | 'NO'
    params: DbhpParams
    m_dbhp: int
    marked_edges: np.ndarray = field(default_factory=lambda: np.zeros((0, 2), dtype=np.int64))


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def _sample_round_edges(rng: np.random.Generator, n: int, p: float) -> np.ndarray:
    """Distinct unordered pairs of one G(n, p) round, as an (k, 2) array of
    0-based endpoints with i < j."""
    npairs = n * (n - 1) // 2
    k = int(rng.binomial(npairs, p))
    if k == 0:
        return np.zeros((0, 2), dtype=np.int64)
    chosen: set = set()
    while len(chosen) < k:
        need = k - len(chosen)
        a = rng.integers(0, n, size=2 * need + 8)
        b = rng.integers(0, n, size=2 * need + 8)
        for i, j in zip(a.tolist(), b.tolist()):
            if i == j:
                continue
            e = (i, j) if i < j else (j, i)
            chosen.add(e)
            if len(chosen) == k:
                break
    return np.array(sorted(chosen), dtype=np.int64)


def gen_dbhp(params: DbhpParams, case: str):
    """Draw (X*, marked edge list) for the given case.

    YES marks exactly the crossing edges, NO exactly the non-crossing ones.
    Degenerate all-0 / all-1 partitions are resampled.
    """
    if case not in ("YES", "NO"):
        raise ValueError("case must be 'YES' or 'NO'")
    rng = _rng(params.seed)
    n = params.n
    while True:
        xstar = rng.integers(0, 2, size=n).astype(np.uint8)
        if 0 < int(xstar.sum()) < n:
            break
    p = 2.0 * params.beta / n
    marked = []
    for _ in range(params.T):
        edges = _sample_round_edges(rng, n, p)
        if edges.shape[0] == 0:
            continue
        crossing = xstar[edges[:, 0]] != xstar[edges[:, 1]]
        keep = crossing if case == "YES" else ~crossing
        marked.append(edges[keep])
    if marked:
        marked_arr = np.concatenate(marked, axis=0)
    else:
        marked_arr = np.zeros((0, 2), dtype=np.int64)
    return xstar, marked_arr, rng


def reduce_eand(xstar, marked_edges, params: DbhpParams, rng) -> GapInstance:
    """2AND instance: floor(beta n T / 4) clauses (x_i and not x_j) with i drawn
    from X*, j from its complement, plus per marked edge the pair
    (x_i and not x_j), (not x_i and x_j)."""
    inside = np.flatnonzero(xstar == 1)
    outside = np.flatnonzero(xstar == 0)
    if inside.size == 0 or outside.size == 0:
        raise ValueError("planted partition must have both sides nonempty")
    na = int(params.beta * params.n * params.T / 4.0)
    clauses = []
    if na > 0:
        ii = rng.choice(inside, size=na)
        jj = rng.choice(outside, size=na)
        for i, j in zip(ii.tolist(), jj.tolist()):
            clauses.append(Clause(ClauseKind.AND2, (Literal(i + 1), Literal(j + 1, True))))
    for i, j in marked_edges.tolist():
        clauses.append(Clause(ClauseKind.AND2, (Literal(i + 1), Literal(j + 1, True))))
        clauses.append(Clause(ClauseKind.AND2, (Literal(i + 1, True), Literal(j + 1))))
    formula = Formula(n=params.n, clauses=clauses)
    return GapInstance(formula, xstar, "", params, int(marked_edges.shape[0]),
                       np.asarray(marked_edges, dtype=np.int64))


def reduce_or(xstar, marked_edges, params: DbhpParams, rng) -> GapInstance:
    """Unit/2OR instance: floor((sqrt(2)-1)/2 * beta n T) unit clauses (x_i)
    with i from X* and as many (not x_j) with j from the complement, plus per
    marked edge the pair (x_i or x_j), (not x_i or not x_j)."""
    inside = np.flatnonzero(xstar == 1)
    outside = np.flatnonzero(xstar == 0)
    if inside.size == 0 or outside.size == 0:
        raise ValueError("planted partition must have both sides nonempty")
    nu = int((SQRT2 - 1.0) / 2.0 * params.beta * params.n * params.T)
    clauses = []
    if nu > 0:
        ii = rng.choice(inside, size=nu)
        jj = rng.choice(outside, size=nu)
        for i in ii.tolist():
            clauses.append(Clause(ClauseKind.UNIT, (Literal(i + 1),)))
        for j in jj.tolist():
            clauses.append(Clause(ClauseKind.UNIT, (Literal(j + 1, True),)))
    for i, j in marked_edges.tolist():
        clauses.append(Clause(ClauseKind.OR, (Literal(i + 1), Literal(j + 1))))
        clauses.append(Clause(ClauseKind.OR, (Literal(i + 1, True), Literal(j + 1, True))))
    formula = Formula(n=params.n, clauses=clauses)
    return GapInstance(formula, xstar, "", params, int(marked_edges.shape[0]),
                       np.asarray(marked_edges, dtype=np.int64))


def gen_gap_instance(params: DbhpParams, case: str, reduction: str) -> GapInstance:
    """Generate a full instance; reduction in {'eand', 'or'}."""
    xstar, marked, rng = gen_dbhp(params, case)
    if reduction == "eand":
        inst = reduce_eand(xstar, marked, params, rng)
    elif reduction == "or":
        inst = reduce_or(xstar, marked, params, rng)
    else:
        raise ValueError("reduction must be 'eand' or 'or'")
    inst.case = case
    return inst


def xor_to_or(xor_formula: Formula) -> Formula:
    """Rewrite each (l1 xor l2) as the pair (l1 or l2), (not l1 or not l2).

    An assignment satisfies both clauses of a pair iff it satisfies the XOR,
    and exactly one otherwise, so val_OR = m + val_XOR.
    """
    clauses = []
    for c in xor_formula.clauses:
        if c.kind is not ClauseKind.XOR2:
            raise ValueError("xor_to_or requires a pure Xor2 formula")
        l1, l2 = c.literals
        clauses.append(Clause(ClauseKind.OR, (l1, l2)))
        clauses.append(Clause(ClauseKind.OR, (l1.negate(), l2.negate())))
    return Formula(n=xor_formula.n, clauses=clauses,
                   tautology_count=xor_formula.tautology_count,
                   contradiction_count=xor_formula.contradiction_count)


def m_cross(instance: GapInstance, sigma) -> int:
    """Marked edges whose endpoints agree under X* but disagree under sigma."""
    edges = instance.marked_edges
    if edges.shape[0] == 0:
        return 0
    s = np.asarray(sigma, dtype=np.uint8)
    xs = instance.planted
    disagree = s[edges[:, 0]] != s[edges[:, 1]]
    same_side = xs[edges[:, 0]] == xs[edges[:, 1]]
    return int(np.count_nonzero(disagree & same_side))


def write_instance(instance: GapInstance, stream) -> None:
    """Formula file plus sidecar comments carrying the planted partition."""
    from .formula import serialize

    stream.write("c case %s\n" % instance.case)
    stream.write("c planted %s\n" % "".join(str(int(b)) for b in instance.planted))
    stream.write(serialize(instance.formula))


def read_instance(stream):
    """Read back (formula, planted bits or None, case or None)."""
    lines = stream.read().splitlines(keepends=True)
    planted = None
    case = None
    for line in lines:
        toks = line.split()
        if len(toks) >= 3 and toks[0] == "c" and toks[1] == "planted":
            planted = np.array([1 if ch == "1" else 0 for ch in toks[2]], dtype=np.uint8)
        elif len(toks) >= 3 and toks[0] == "c" and toks[1] == "case":
            case = toks[2]
    import io

    formula = parse(io.StringIO("".join(lines)))
    return formula, planted, case
