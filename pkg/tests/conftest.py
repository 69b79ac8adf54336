"""Shared test utilities: independent brute-force oracles kept deliberately
separate from the package's own code paths."""

import numpy as np
import pytest

from qsat import Formula


def all_assignments(n: int) -> np.ndarray:
    """(2^n, n) boolean matrix of every assignment, row index = bit pattern."""
    return ((np.arange(2**n)[:, None] >> np.arange(n)) & 1).astype(bool)


def sat_mask(formula: Formula, assignments: np.ndarray) -> np.ndarray:
    """Boolean mask over assignment rows: which ones satisfy the formula."""
    lits = formula.clauses
    if lits.shape[0] == 0:
        return np.ones(assignments.shape[0], dtype=bool)
    lit_true = assignments[:, np.abs(lits) - 1] ^ (lits < 0)
    return lit_true.any(axis=2).all(axis=1)


def brute_force_satisfiable(formula: Formula) -> bool:
    return bool(sat_mask(formula, all_assignments(formula.n)).any())


@pytest.fixture(scope="session")
def golden() -> float:
    return (5.0**0.5 - 1.0) / 2.0
