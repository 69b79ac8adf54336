"""CNF formulas, truth assignments, and DIMACS serialization.

Literals use the signed-integer convention throughout: literal ``v`` (1-based)
is the positive occurrence of variable ``v``, ``-v`` the negative one.
Assignments are boolean numpy arrays of length ``n`` (index 0 holds variable 1).
Formulas are immutable once built and safe to share across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class DimacsParseError(ValueError):
    """Malformed DIMACS input; ``line`` is the 1-based offending line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Formula:
    """A width-k CNF formula over variables 1..n.

    ``clauses`` is an (m, k) int32 array of signed literals. The clause
    sequence and the literal order inside each clause are preserved exactly
    as constructed, so serialization is byte-deterministic and equality is
    sequence equality.
    """

    n: int
    clauses: np.ndarray
    k: int = field(default=-1)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.clauses, dtype=np.int32)
        if arr.ndim != 2:
            if arr.size == 0:
                arr = arr.reshape(0, max(self.k, 0))
            else:
                raise ValueError("clauses must be a 2-d array of signed literals")
        object.__setattr__(self, "clauses", arr)
        if self.k == -1:
            object.__setattr__(self, "k", arr.shape[1])
        if arr.shape[1] != self.k:
            raise ValueError(f"clause width {arr.shape[1]} != k={self.k}")
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if arr.size:
            v = np.abs(arr)
            if v.min() < 1 or v.max() > self.n:
                raise ValueError(f"literal variable out of range 1..{self.n}")
        arr.setflags(write=False)

    @property
    def m(self) -> int:
        return self.clauses.shape[0]

    def clause(self, i: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.clauses[i])

    def iter_clauses(self):
        for row in self.clauses:
            yield tuple(int(x) for x in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Formula):
            return NotImplemented
        if self.n != other.n or self.m != other.m:
            return False
        if self.m == 0:
            return True  # k is not recoverable from an empty clause list
        return self.k == other.k and bool(np.array_equal(self.clauses, other.clauses))

    def __repr__(self) -> str:
        return f"Formula(n={self.n}, k={self.k}, m={self.m})"


def _as_assignment(values, n: int) -> np.ndarray:
    a = np.asarray(values, dtype=bool)
    if a.ndim != 1 or a.shape[0] != n:
        raise ValueError(f"assignment length {a.shape} does not match n={n}")
    return a


def complement(assignment: np.ndarray) -> np.ndarray:
    return ~np.asarray(assignment, dtype=bool)


def evaluate(formula: Formula, assignment) -> int:
    """Number of clauses the assignment leaves unsatisfied (0 means SAT)."""
    a = _as_assignment(assignment, formula.n)
    if formula.m == 0:
        return 0
    lits = formula.clauses
    lit_true = a[np.abs(lits) - 1] ^ (lits < 0)
    return int(formula.m - np.count_nonzero(lit_true.any(axis=1)))


def overlap_alpha(a, b) -> float:
    """Fraction of positions on which two assignments agree."""
    a = np.asarray(a, dtype=bool)
    b = np.asarray(b, dtype=bool)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ValueError("assignments must be equal-length non-empty vectors")
    return float(np.count_nonzero(a == b) / a.size)


def write_dimacs(formula: Formula, hidden=None) -> str:
    """Serialize to DIMACS CNF text (ASCII, '\\n' newlines).

    When ``hidden`` is given, a ``c hidden <signed vars>`` comment precedes
    the header so the planted assignment survives a round trip.
    """
    lines = []
    if hidden is not None:
        h = _as_assignment(hidden, formula.n)
        signed = " ".join(str(i + 1 if h[i] else -(i + 1)) for i in range(formula.n))
        lines.append(f"c hidden {signed}")
    lines.append(f"p cnf {formula.n} {formula.m}")
    for row in formula.clauses:
        lines.append(" ".join(str(int(x)) for x in row) + " 0")
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[Formula, np.ndarray | None]:
    """Parse DIMACS CNF text; returns (formula, hidden-or-None).

    Inverse of write_dimacs on its output; arbitrary comment lines are
    tolerated. Clauses must be one per line and 0-terminated.
    """
    n = m = None
    hidden_tokens = None
    rows: list[list[int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 2 and parts[0] == "c" and parts[1] == "hidden":
                hidden_tokens = (parts[2:], lineno)
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsParseError("malformed problem header", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsParseError("non-integer header fields", lineno) from None
            if n < 0 or m < 0:
                raise DimacsParseError("negative header fields", lineno)
            continue
        if n is None:
            raise DimacsParseError("clause before 'p cnf' header", lineno)
        try:
            toks = [int(t) for t in line.split()]
        except ValueError:
            raise DimacsParseError("non-integer clause token", lineno) from None
        if not toks or toks[-1] != 0:
            raise DimacsParseError("clause not terminated by 0", lineno)
        lits = toks[:-1]
        if 0 in lits:
            raise DimacsParseError("unexpected 0 inside clause", lineno)
        if any(abs(v) > n for v in lits):
            raise DimacsParseError(f"variable index exceeds n={n}", lineno)
        if rows and len(lits) != len(rows[0]):
            raise DimacsParseError("inconsistent clause width", lineno)
        rows.append(lits)
    if n is None:
        raise DimacsParseError("missing 'p cnf' header", len(text.splitlines()) or 1)
    if len(rows) != m:
        raise DimacsParseError(
            f"header declares {m} clauses, found {len(rows)}",
            len(text.splitlines()),
        )
    k = len(rows[0]) if rows else 0
    formula = Formula(n=n, clauses=np.array(rows, dtype=np.int32).reshape(len(rows), k), k=k)
    hidden = None
    if hidden_tokens is not None:
        toks, lineno = hidden_tokens
        try:
            signed = [int(t) for t in toks]
        except ValueError:
            raise DimacsParseError("non-integer entry in hidden comment", lineno) from None
        if sorted(abs(v) for v in signed) != list(range(1, n + 1)):
            raise DimacsParseError("hidden comment does not cover variables 1..n", lineno)
        hidden = np.zeros(n, dtype=bool)
        for v in signed:
            hidden[abs(v) - 1] = v > 0
    return formula, hidden
