"""Clause-density flow model of the unit-clause heuristic (k = 3).

Tracks the densities s_{i,j} (count / n of length-i clauses with j positive
literals) as a function of the fraction x of variables set, treating the
planted assignment as all-true by symmetry. Unit clauses are not density
variables: within a round they form a two-type branching process (types =
forced-false / forced-true settings) whose transition matrix M determines
the expected settings per round. The heuristic stops succeeding where the
process turns critical (largest eigenvalue of M reaches 1), and
``uc_threshold`` locates the separating density by bisection.

The initial 3-clause densities are scaled by the clause density r so that
their total equals m/n at x = 0; with that normalization the critical
density in the balanced case reproduces the classic 8/3 of plain random
3-SAT.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import uc_ode_kernel


@dataclass(frozen=True)
class UcState:
    """Densities at algorithm time x: s3[j] for j = 0..3, s2[j] for j = 0..2."""

    x: float
    s3: np.ndarray
    s2: np.ndarray


@dataclass(frozen=True)
class BranchingStats:
    """Unit-clause branching data at one state.

    ``critical`` marks lambda_max >= 1, where the round sums (m_false,
    m_true) stop existing; they are NaN there.
    """

    M: np.ndarray
    lambda_max: float
    m_false: float
    m_true: float
    critical: bool


@dataclass(frozen=True)
class UcTrajectory:
    """Sampled states plus the outcome: subcritical to the end, or the
    first x where the branching process is critical."""

    states: list[UcState]
    critical_x: float | None
    r: float
    q: float

    @property
    def is_subcritical(self) -> bool:
        return self.critical_x is None


def initial_state(r: float, q: float, k: int = 3) -> UcState:
    """Densities at x = 0: no 2-clauses, no fully-disagreeing 3-clauses,
    and s_{3,j} proportional to C(3,j) q^j with total r."""
    _check_params(r, q, k)
    denom = (1.0 + q) ** 3 - 1.0
    s3 = np.array([0.0, r * 3.0 * q / denom, r * 3.0 * q * q / denom, r * q**3 / denom])
    return UcState(x=0.0, s3=s3, s2=np.zeros(3))


def branching_stats(state: UcState) -> BranchingStats:
    """Transition matrix, its largest eigenvalue in closed form, and the
    expected false/true settings per round (I - M)^-1 (1/2, 1/2)."""
    x = state.x
    if not 0.0 <= x < 1.0:
        raise ValueError(f"need 0 <= x < 1, got {x}")
    s20, s21, s22 = (float(v) for v in state.s2)
    M = np.array([[s21, 2.0 * s20], [2.0 * s22, s21]]) / (1.0 - x)
    lam = (s21 + 2.0 * math.sqrt(s20 * s22)) / (1.0 - x)
    if lam >= 1.0:
        return BranchingStats(M=M, lambda_max=lam, m_false=math.nan, m_true=math.nan, critical=True)
    mf, mt = np.linalg.solve(np.eye(2) - M, np.array([0.5, 0.5]))
    return BranchingStats(M=M, lambda_max=lam, m_false=float(mf), m_true=float(mt), critical=False)


def integrate(r: float, q: float, step: float = 1e-4, k: int = 3,
              sample_dx: float = 1e-2) -> UcTrajectory:
    """Fixed-step RK4 from x = 0 to 1 - 1e-6, stopping early when the
    branching process turns critical. States are sampled every sample_dx
    (plus the final state) for inspection."""
    _check_params(r, q, k)
    if not 0.0 < step <= 0.1:
        raise ValueError(f"step must lie in (0, 0.1], got {step}")
    status, crit_x, samples, ns = uc_ode_kernel(r, q, step, sample_dx)
    if status == 2:
        raise RuntimeError(
            f"integrator produced a negative density at x={crit_x}; reduce the step")
    states = [
        UcState(x=float(row[0]), s3=row[1:5].copy(), s2=row[5:8].copy())
        for row in samples[:ns]
    ]
    return UcTrajectory(states=states, critical_x=float(crit_x) if status == 1 else None,
                        r=r, q=q)


def uc_threshold(q: float, tolerance: float = 1e-3, step: float = 1e-4) -> float:
    """Critical density separating subcritical integrations from critical
    ones, by bisection on r. Brackets within r in (0, 20]."""
    if tolerance <= 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    lo = 0.1
    if not integrate(lo, q, step=step).is_subcritical:
        raise ValueError(f"integration already critical at r={lo} for q={q}")
    hi = None
    for cand in (4.0, 8.0, 12.0, 16.0, 20.0):
        if not integrate(cand, q, step=step).is_subcritical:
            hi = cand
            break
        lo = cand
    if hi is None:
        raise ValueError(f"no critical density found for q={q} within r <= 20")
    while hi - lo > tolerance:
        mid = 0.5 * (lo + hi)
        if integrate(mid, q, step=step).is_subcritical:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _check_params(r: float, q: float, k: int) -> None:
    if k != 3:
        raise ValueError(f"the density flow is written for k=3, got k={k}")
    if not r > 0:
        raise ValueError(f"density r must be positive, got {r}")
    if not 0.0 < q <= 1.0:
        raise ValueError(f"q must lie in (0, 1], got {q}")
