"""Reference solvers: unit-clause heuristic, randomized DPLL, WalkSAT-style
local search, and the majority heuristic.

Effort is a machine-independent count whose meaning is solver-specific:
free-step rounds for the unit-clause heuristic, splitting assignments for
DPLL, total variable flips for the local search. Every satisfying outcome
is re-checked against the formula before being returned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .formula import Formula, evaluate

SAT = "sat"
UNSAT = "unsat"
GAVE_UP = "gaveup"


@dataclass(frozen=True)
class SolveOutcome:
    status: str
    assignment: np.ndarray | None
    effort: int
    # DPLL only: whether the search ever backtracked (None for other solvers)
    backtrack_free: bool | None = None

    @property
    def is_sat(self) -> bool:
        return self.status == SAT


@dataclass(frozen=True)
class WalkSatParams:
    """Restart local-search budget and policy.

    ``noise`` is the per-step probability of a random (vs greedy) flip;
    ``greedy`` selects the greedy score: "break" (default, clauses a flip
    would falsify) or "gain" (break minus clauses it would repair).
    """

    max_flips: int = 10_000
    max_tries: int = 10_000
    noise: float = 0.5
    seed: int = 0
    greedy: str = "break"

    def __post_init__(self):
        if self.max_flips < 0 or self.max_tries < 1:
            raise ValueError("need max_flips >= 0 and max_tries >= 1")
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError(f"noise must lie in [0, 1], got {self.noise}")
        if self.greedy not in ("break", "gain"):
            raise ValueError(f"greedy must be 'break' or 'gain', got {self.greedy!r}")

    @property
    def flip_budget(self) -> int:
        return self.max_flips * self.max_tries


def _flat(formula: Formula):
    """Flat literal array plus clause-occurrence lists indexed by literal
    code 2*(v-1)+polarity."""
    lits = np.ascontiguousarray(formula.clauses, dtype=np.int32).ravel()
    k = formula.k
    n = formula.n
    if lits.size:
        codes = 2 * (np.abs(lits) - 1) + (lits > 0)
        order = np.argsort(codes, kind="stable")
        occ_list = (order // k).astype(np.int32)
        counts = np.bincount(codes, minlength=2 * n)
    else:
        occ_list = np.zeros(0, np.int32)
        counts = np.zeros(2 * n, np.int64)
    occ_start = np.zeros(2 * n + 1, np.int64)
    np.cumsum(counts, out=occ_start[1:])
    return lits, occ_start, occ_list


def _checked_sat(formula: Formula, value: np.ndarray, effort: int,
                 backtrack_free: bool | None = None) -> SolveOutcome:
    assignment = value == 1
    if evaluate(formula, assignment) != 0:
        raise RuntimeError("solver returned a non-satisfying assignment")
    return SolveOutcome(status=SAT, assignment=assignment, effort=effort,
                        backtrack_free=backtrack_free)


def uc_run(formula: Formula, seed: int = 0) -> SolveOutcome:
    """One pass of the unit-clause heuristic (no backtracking).

    Rounds of a free step (satisfy a uniformly random literal over the
    unset variables) followed by exhaustive unit propagation; gives up at
    the first empty clause. Effort counts free steps.
    """
    lits, occ_start, occ_list = _flat(formula)
    status, rounds, value = _kernels.uc_run_kernel(
        formula.n, formula.k, lits, occ_start, occ_list, np.uint64(seed & (2**64 - 1)))
    if status == _kernels.STATUS_SAT:
        return _checked_sat(formula, value, rounds)
    return SolveOutcome(status=GAVE_UP, assignment=None, effort=rounds)


def dpll_solve(formula: Formula, seed: int = 0, node_limit: int | None = None) -> SolveOutcome:
    """Complete randomized DPLL: random splitting variable, random value
    order, unit propagation at every node. Effort counts splitting
    assignments (both branches); propagation is free."""
    if node_limit is not None and node_limit <= 0:
        raise ValueError(f"node_limit must be positive, got {node_limit}")
    lits, occ_start, occ_list = _flat(formula)
    status, nodes, backtracked, value = _kernels.dpll_kernel(
        formula.n, formula.k, lits, occ_start, occ_list,
        np.uint64(seed & (2**64 - 1)), 0 if node_limit is None else node_limit)
    if status == _kernels.STATUS_SAT:
        return _checked_sat(formula, value, nodes, backtrack_free=not backtracked)
    if status == _kernels.STATUS_UNSAT:
        return SolveOutcome(status=UNSAT, assignment=None, effort=nodes,
                            backtrack_free=not backtracked)
    return SolveOutcome(status=GAVE_UP, assignment=None, effort=nodes,
                        backtrack_free=not backtracked)


def walksat_solve(formula: Formula, params: WalkSatParams = WalkSatParams()) -> SolveOutcome:
    """Restart local search; see WalkSatParams for the step policy.

    Deterministic for a given (formula, params.seed). Effort is the total
    number of flips across all tries at return time.
    """
    lits, occ_start, occ_list = _flat(formula)
    status, flips, value = _kernels.walksat_kernel(
        formula.n, formula.k, lits, occ_start, occ_list,
        params.max_flips, params.max_tries, params.noise,
        params.greedy == "gain", np.uint64(params.seed & (2**64 - 1)))
    if status == _kernels.STATUS_SAT:
        return _checked_sat(formula, value, flips)
    return SolveOutcome(status=GAVE_UP, assignment=None, effort=flips)


def majority_assignment(formula: Formula, seed: int = 0) -> np.ndarray:
    """Set each variable to the polarity of the majority of its literal
    occurrences; ties (including unused variables) are seeded coin flips."""
    lits = formula.clauses.ravel()
    pos = np.bincount(np.abs(lits[lits > 0]) - 1, minlength=formula.n)
    neg = np.bincount(np.abs(lits[lits < 0]) - 1, minlength=formula.n)
    rng = np.random.default_rng(seed)
    coins = rng.random(formula.n) < 0.5
    out = pos > neg
    ties = pos == neg
    out[ties] = coins[ties]
    return out
