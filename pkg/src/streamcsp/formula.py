"""Data model, parsing, normalization and statistics for Max-CSP instances.

A formula is a list of clauses over 1-based Boolean variables.  Clause kinds:

- ``Unit``     single literal
- ``Or``       disjunction of >= 1 literals (arity 2 for 2CSP, more for kSAT)
- ``Xor2``     exclusive or of exactly two literals
- ``And2``     conjunction of exactly two literals (may repeat a literal)
- ``Generic``  arbitrary 4-bit truth table over two literals (API-level only;
  the parser normalizes every generic clause to one of the kinds above)

File grammar (ASCII, whitespace separated, one clause per line):

    c <comment>
    p mcsp <n> <m>        or        p cnf <n> <m>
    <kind> <lit> ... 0            (mcsp; kind in {u,o,x,a,g})
    <lit> ... 0                   (cnf; every line is an OR clause)

A ``g`` line carries a 4-bit truth table token (e.g. ``0111``) before its two
literals; the table reads f(0,0) f(0,1) f(1,0) f(1,1) left to right and
applies to the literal values.

Normalization drops clauses that are always true (tautology_count) or never
satisfiable (contradiction_count), collapses (x v x) to Unit(x), and keeps
(x ^ x) as a repeated-literal And2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

__all__ = [
    "Literal",
    "ClauseKind",
    "Clause",
    "Formula",
    "FormulaStats",
    "ParseError",
    "PredClass",
    "parse",
    "parse_text",
    "serialize",
    "classify_predicate",
    "decompose_to_and",
    "stats",
    "tt_from_string",
    "tt_to_string",
]


@dataclass(frozen=True)
class Literal:
    """A possibly negated occurrence of variable ``var`` (1-based)."""

    var: int
    negated: bool = False

    def __post_init__(self):
        if self.var < 1:
            raise ValueError("variable index must be >= 1, got %r" % (self.var,))

    @classmethod
    def from_int(cls, v: int) -> "Literal":
        if v == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(v), v < 0)

    def to_int(self) -> int:
        return -self.var if self.negated else self.var

    def negate(self) -> "Literal":
        return Literal(self.var, not self.negated)

    def value(self, bit: int) -> int:
        """Evaluate the literal on a variable value (0/1)."""
        return (1 - bit) if self.negated else bit


class ClauseKind(enum.Enum):
    UNIT = "u"
    OR = "o"
    XOR2 = "x"
    AND2 = "a"
    GENERIC = "g"


class PredClass(enum.Enum):
    """Predicate type of a binary Boolean function."""

    TR = "TR"
    OR = "OR"
    XOR = "XOR"
    AND = "AND"


@dataclass(frozen=True)
class Clause:
    kind: ClauseKind
    literals: tuple
    truth_table: int | None = None  # Generic only; bit (2a+b) holds f(a,b)

    def __post_init__(self):
        k, lits = self.kind, self.literals
        if k is ClauseKind.UNIT and len(lits) != 1:
            raise ValueError("unit clause needs exactly 1 literal")
        if k in (ClauseKind.XOR2, ClauseKind.AND2, ClauseKind.GENERIC) and len(lits) != 2:
            raise ValueError("%s clause needs exactly 2 literals" % k.value)
        if k is ClauseKind.OR and len(lits) < 1:
            raise ValueError("or clause needs >= 1 literal")
        if k is ClauseKind.GENERIC and not (self.truth_table is not None and 0 <= self.truth_table <= 15):
            raise ValueError("generic clause needs a 4-bit truth table")

    @property
    def arity(self) -> int:
        return len(self.literals)

    def evaluate(self, bits) -> int:
        """Evaluate on an assignment (sequence indexable by var-1, values 0/1)."""
        vals = [lit.value(int(bits[lit.var - 1])) for lit in self.literals]
        if self.kind is ClauseKind.UNIT:
            return vals[0]
        if self.kind is ClauseKind.OR:
            return 1 if any(vals) else 0
        if self.kind is ClauseKind.XOR2:
            return vals[0] ^ vals[1]
        if self.kind is ClauseKind.AND2:
            return vals[0] & vals[1]
        return (self.truth_table >> (2 * vals[0] + vals[1])) & 1

    def effective_table(self) -> int:
        """4-bit truth table over the clause's two literal values (arity 2 only)."""
        if self.arity != 2:
            raise ValueError("effective_table requires arity 2")
        if self.kind is ClauseKind.OR:
            return 0b1110  # rows 01,10,11
        if self.kind is ClauseKind.XOR2:
            return 0b0110
        if self.kind is ClauseKind.AND2:
            return 0b1000  # row 11 only
        return self.truth_table


@dataclass
class Formula:
    n: int
    clauses: list = field(default_factory=list)
    tautology_count: int = 0
    contradiction_count: int = 0

    @property
    def m(self) -> int:
        return len(self.clauses)


class ParseError(ValueError):
    def __init__(self, line_no: int, msg: str):
        super().__init__("line %d: %s" % (line_no, msg))
        self.line_no = line_no


def tt_from_string(s: str) -> int:
    """Parse a truth-table token f(0,0)f(0,1)f(1,0)f(1,1), e.g. '0111'."""
    if len(s) != 4 or any(ch not in "01" for ch in s):
        raise ValueError("truth table must be 4 bits of 0/1, got %r" % (s,))
    tt = 0
    for row, ch in enumerate(s):
        if ch == "1":
            tt |= 1 << row
    return tt


def tt_to_string(tt: int) -> str:
    return "".join("1" if (tt >> row) & 1 else "0" for row in range(4))


def classify_predicate(tt: int) -> PredClass:
    """Classify a 4-bit truth table (bit 2a+b = f(a,b)).

    TR if the function depends on at most one input; OR for exactly three 1s;
    AND for exactly one 1; XOR for the two balanced tables that depend on both
    inputs.
    """
    if not 0 <= tt <= 15:
        raise ValueError("truth table out of range")
    f = [(tt >> row) & 1 for row in range(4)]  # f[2a+b]
    dep_a = f[0] != f[2] or f[1] != f[3]
    dep_b = f[0] != f[1] or f[2] != f[3]
    if not (dep_a and dep_b):
        return PredClass.TR
    ones = sum(f)
    if ones == 3:
        return PredClass.OR
    if ones == 1:
        return PredClass.AND
    return PredClass.XOR


def decompose_to_and(clause: Clause) -> tuple:
    """Rewrite an arity <= 2 clause as a list of And2 clauses, one per
    satisfying row, plus a count of constant-true rows absorbed.

    For every assignment exactly one output clause is satisfied iff the input
    clause is satisfied.  A constant-true clause yields ([], 1).
    """
    if clause.arity > 2:
        raise ValueError("decompose_to_and requires arity <= 2")
    if clause.kind is ClauseKind.UNIT:
        lit = clause.literals[0]
        return [Clause(ClauseKind.AND2, (lit, lit))], 0
    tt = clause.effective_table()
    if tt == 0b1111:
        return [], 1
    l1, l2 = clause.literals
    out = []
    for a in (0, 1):
        for b in (0, 1):
            if (tt >> (2 * a + b)) & 1:
                la = l1 if a else l1.negate()
                lb = l2 if b else l2.negate()
                out.append(Clause(ClauseKind.AND2, (la, lb)))
    return out, 0


def _normalize_generic(tt: int, l1: Literal, l2: Literal):
    """Reduce a generic (tt, l1, l2) clause to a canonical kind.

    Returns one of: ('taut',), ('contra',), ('clause', Clause).
    The table applies to the literal values; negations are folded into a
    variable-level table first.
    """
    # variable-level table: g(a,b) = f(l1.value(a), l2.value(b))
    g = 0
    for a in (0, 1):
        for b in (0, 1):
            fa = (1 - a) if l1.negated else a
            fb = (1 - b) if l2.negated else b
            if (tt >> (2 * fa + fb)) & 1:
                g |= 1 << (2 * a + b)
    v1, v2 = l1.var, l2.var
    if v1 == v2:
        d0 = (g >> 0) & 1  # g(0,0)
        d1 = (g >> 3) & 1  # g(1,1)
        if d0 and d1:
            return ("taut",)
        if not d0 and not d1:
            return ("contra",)
        neg = bool(d0)  # satisfied at 0 => clause is (not x)
        return ("clause", Clause(ClauseKind.UNIT, (Literal(v1, neg),)))
    f = [(g >> row) & 1 for row in range(4)]
    ones = sum(f)
    if ones == 0:
        return ("contra",)
    if ones == 4:
        return ("taut",)
    cls = classify_predicate(g)
    if cls is PredClass.TR:
        dep_a = f[0] != f[2] or f[1] != f[3]
        if dep_a:
            neg = bool(f[0])  # true at a=0 => (not x_a)
            return ("clause", Clause(ClauseKind.UNIT, (Literal(v1, neg),)))
        neg = bool(f[0])
        return ("clause", Clause(ClauseKind.UNIT, (Literal(v2, neg),)))
    if cls is PredClass.OR:
        zero_row = f.index(0)
        a0, b0 = zero_row >> 1, zero_row & 1
        return ("clause", Clause(ClauseKind.OR, (Literal(v1, a0 == 1), Literal(v2, b0 == 1))))
    if cls is PredClass.AND:
        one_row = f.index(1)
        a1, b1 = one_row >> 1, one_row & 1
        return ("clause", Clause(ClauseKind.AND2, (Literal(v1, a1 == 0), Literal(v2, b1 == 0))))
    # XOR: 0110 -> x1 xor x2; 1001 -> (not x1) xor x2
    neg = bool(f[0])
    return ("clause", Clause(ClauseKind.XOR2, (Literal(v1, neg), Literal(v2, False))))


def normalize_clause(clause: Clause):
    """Normalize a raw clause.  Returns ('taut',), ('contra',) or ('clause', c)."""
    k = clause.kind
    lits = clause.literals
    if k is ClauseKind.GENERIC:
        return _normalize_generic(clause.truth_table, lits[0], lits[1])
    if k is ClauseKind.OR or k is ClauseKind.UNIT:
        seen = {}
        out = []
        for lit in lits:
            if lit.var in seen:
                if seen[lit.var] != lit.negated:
                    return ("taut",)
                continue  # duplicate literal collapses
            seen[lit.var] = lit.negated
            out.append(lit)
        if len(out) == 1:
            return ("clause", Clause(ClauseKind.UNIT, (out[0],)))
        return ("clause", Clause(ClauseKind.OR, tuple(out)))
    if k is ClauseKind.XOR2:
        l1, l2 = lits
        if l1.var == l2.var:
            return ("taut",) if l1.negated != l2.negated else ("contra",)
        # fold negations: odd parity sits on the first literal
        parity = l1.negated != l2.negated
        return ("clause", Clause(ClauseKind.XOR2, (Literal(l1.var, parity), Literal(l2.var, False))))
    if k is ClauseKind.AND2:
        l1, l2 = lits
        if l1.var == l2.var and l1.negated != l2.negated:
            return ("contra",)
        return ("clause", clause)
    raise ValueError("unknown clause kind %r" % (k,))


_KIND_TAGS = {"u": ClauseKind.UNIT, "o": ClauseKind.OR, "x": ClauseKind.XOR2, "a": ClauseKind.AND2, "g": ClauseKind.GENERIC}


def parse(stream: TextIO) -> Formula:
    """Parse a formula from a text stream (see module docstring grammar)."""
    formula = None
    is_cnf = False
    for line_no, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if formula is not None:
                raise ParseError(line_no, "duplicate header")
            if len(toks) != 4 or toks[1] not in ("mcsp", "cnf"):
                raise ParseError(line_no, "malformed header, expected 'p mcsp <n> <m>' or 'p cnf <n> <m>'")
            try:
                n, m_decl = int(toks[2]), int(toks[3])
            except ValueError:
                raise ParseError(line_no, "non-integer header fields") from None
            if n < 0 or m_decl < 0:
                raise ParseError(line_no, "negative header fields")
            is_cnf = toks[1] == "cnf"
            formula = Formula(n=n)
            continue
        if formula is None:
            raise ParseError(line_no, "clause before header")
        if is_cnf:
            kind = ClauseKind.OR
            lit_toks = toks
            tt = None
        else:
            tag = toks[0]
            if tag not in _KIND_TAGS:
                raise ParseError(line_no, "unknown clause kind %r" % tag)
            kind = _KIND_TAGS[tag]
            tt = None
            lit_toks = toks[1:]
            if kind is ClauseKind.GENERIC:
                if not lit_toks:
                    raise ParseError(line_no, "generic clause missing truth table")
                try:
                    tt = tt_from_string(lit_toks[0])
                except ValueError as e:
                    raise ParseError(line_no, str(e)) from None
                lit_toks = lit_toks[1:]
        if not lit_toks or lit_toks[-1] != "0":
            raise ParseError(line_no, "clause not terminated by 0")
        lits = []
        for tok in lit_toks[:-1]:
            try:
                v = int(tok)
            except ValueError:
                raise ParseError(line_no, "bad literal token %r" % tok) from None
            if v == 0:
                raise ParseError(line_no, "0 terminator inside clause")
            if abs(v) > formula.n:
                raise ParseError(line_no, "variable %d exceeds declared n=%d" % (abs(v), formula.n))
            lits.append(Literal.from_int(v))
        try:
            raw_clause = Clause(kind, tuple(lits), truth_table=tt)
        except ValueError as e:
            raise ParseError(line_no, str(e)) from None
        result = normalize_clause(raw_clause)
        if result[0] == "taut":
            formula.tautology_count += 1
        elif result[0] == "contra":
            formula.contradiction_count += 1
        else:
            formula.clauses.append(result[1])
    if formula is None:
        raise ParseError(0, "missing header")
    return formula


def parse_text(text: str) -> Formula:
    import io

    return parse(io.StringIO(text))


def serialize(formula: Formula) -> str:
    """Render a normalized formula in the mcsp grammar; parse(serialize(f))
    reproduces f's clause list and n exactly."""
    lines = ["p mcsp %d %d" % (formula.n, formula.m)]
    for c in formula.clauses:
        lits = " ".join(str(l.to_int()) for l in c.literals)
        if c.kind is ClauseKind.GENERIC:
            lines.append("g %s %s 0" % (tt_to_string(c.truth_table), lits))
        else:
            lines.append("%s %s 0" % (c.kind.value, lits))
    return "\n".join(lines) + "\n"


@dataclass
class FormulaStats:
    """Per-arity clause counts and per-variable literal occurrence counts.

    ``m[j]`` counts j-clauses (all kinds; Xor2/And2 count as arity 2).
    ``pos[j][i]`` / ``neg[j][i]`` count positive / negative occurrences of
    variable i inside j-clauses, indexed 1..n.
    """

    n: int
    m: dict
    pos: dict
    neg: dict
    kind_counts: dict
    classes: set

    @property
    def total_m(self) -> int:
        return sum(self.m.values())

    @property
    def max_arity(self) -> int:
        return max(self.m) if self.m else 0

    def m_j(self, j: int) -> int:
        return self.m.get(j, 0)

    def pos_count(self, i: int, j: int) -> int:
        arr = self.pos.get(j)
        return int(arr[i]) if arr is not None else 0

    def neg_count(self, i: int, j: int) -> int:
        arr = self.neg.get(j)
        return int(arr[i]) if arr is not None else 0


def clause_class(clause: Clause) -> PredClass | str:
    """Predicate class of a clause; arity >= 3 OR clauses report 'kOR'."""
    if clause.kind is ClauseKind.UNIT:
        return PredClass.TR
    if clause.kind is ClauseKind.OR:
        return PredClass.OR if clause.arity == 2 else "kOR"
    if clause.kind is ClauseKind.XOR2:
        return PredClass.XOR
    if clause.kind is ClauseKind.AND2:
        return PredClass.AND
    return classify_predicate(clause.effective_table())


def stats(formula: Formula) -> FormulaStats:
    """Single-pass exact counts."""
    m: dict = {}
    pos: dict = {}
    neg: dict = {}
    kind_counts: dict = {}
    classes: set = set()
    n = formula.n
    for c in formula.clauses:
        j = c.arity
        m[j] = m.get(j, 0) + 1
        kind_counts[c.kind] = kind_counts.get(c.kind, 0) + 1
        classes.add(clause_class(c))
        if j not in pos:
            pos[j] = np.zeros(n + 1, dtype=np.int64)
            neg[j] = np.zeros(n + 1, dtype=np.int64)
        for lit in c.literals:
            if lit.negated:
                neg[j][lit.var] += 1
            else:
                pos[j][lit.var] += 1
    return FormulaStats(n=n, m=m, pos=pos, neg=neg, kind_counts=kind_counts, classes=classes)
