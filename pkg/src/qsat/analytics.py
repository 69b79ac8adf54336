"""First-moment analytics for planted-assignment formulas.

``f_alpha`` is the n-th root of the expected number of satisfying
assignments that agree with the planted assignment on a fraction ``alpha``
of the variables, in the large-n limit. ``expected_solutions_exact`` is the
same expectation at finite n without any asymptotic approximation (exact
binomial coefficient), assuming the with-replacement position convention.
``rc_upper_bound`` locates the density above which the expected number of
"alternate" solutions (alpha <= 1/2) is exponentially small; this is an
upper bound on the conjectured threshold where those solutions disappear,
not the threshold itself.

Everything here is a pure function; log-space is used wherever counts can
overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .generator import qstar

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _clause_factor(k: int, q: float, alpha: float) -> float:
    # probability a random biased-pattern clause is satisfied by an
    # assignment agreeing with the planted one on a fraction alpha
    denom = (1.0 + q) ** k - 1.0
    return 1.0 - ((q * (1.0 - alpha) + alpha) ** k - alpha**k) / denom


def log_f_alpha(k: int, r: float, q: float, alpha: float) -> float:
    """log of f_alpha, with the 0**0 = 1 convention at alpha in {0, 1}."""
    _check(k, q, r=r)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    entropy = 0.0
    if 0.0 < alpha < 1.0:
        entropy = -alpha * math.log(alpha) - (1.0 - alpha) * math.log(1.0 - alpha)
    return entropy + r * math.log(_clause_factor(k, q, alpha))


def f_alpha(k: int, r: float, q: float, alpha: float) -> float:
    """n-th root of the expected solution count at agreement fraction alpha."""
    return math.exp(log_f_alpha(k, r, q, alpha))


def f_prime_half(k: int, r: float, q: float, h: float = 1e-5) -> float:
    """Central finite difference of f at alpha = 1/2 (step h = 1e-5).

    Only the sign is contractual: positive means the local solution-density
    gradient at a random assignment points toward the planted assignment,
    negative means it points away (deceptive regime), and it vanishes at
    q = qstar(k).
    """
    return (f_alpha(k, r, q, 0.5 + h) - f_alpha(k, r, q, 0.5 - h)) / (2.0 * h)


def log_expected_solutions_exact(n: int, m: int, k: int, q: float, alpha: float) -> float:
    """log E[number of solutions agreeing on exactly alpha*n variables].

    Exact finite-n form: C(n, alpha*n) times the clause-satisfaction
    probability to the m-th power, where that probability is
    1 - sum_t C(k,t) q^t (1-alpha)^t alpha^(k-t) / ((1+q)^k - 1).
    alpha*n must be integral (the caller owns the grid).
    """
    _check(k, q)
    if n <= 0 or m < 0:
        raise ValueError(f"need n > 0 and m >= 0, got n={n}, m={m}")
    j = alpha * n
    if abs(j - round(j)) > 1e-9:
        raise ValueError(f"alpha*n = {j} is not integral")
    j = round(j)
    if not 0 <= j <= n:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    a = j / n
    denom = (1.0 + q) ** k - 1.0
    p_violate = sum(
        math.comb(k, t) * q**t * (1.0 - a) ** t * a ** (k - t) for t in range(1, k + 1)
    ) / denom
    return math.log(math.comb(n, j)) + m * math.log1p(-p_violate)


def expected_solutions_exact(n: int, m: int, k: int, q: float, alpha: float) -> float:
    """Linear-scale companion of log_expected_solutions_exact (may overflow
    to inf for large n; use the log form then)."""
    return math.exp(log_expected_solutions_exact(n, m, k, q, alpha))


@dataclass(frozen=True)
class DensityCurve:
    """f sampled on a uniform alpha grid at fixed (k, r, q)."""

    k: int
    r: float
    q: float
    alphas: np.ndarray
    values: np.ndarray


def density_curve(k: int, r: float, q: float, grid: float = 1e-3) -> DensityCurve:
    """Sample f on a uniform alpha grid over [0, 1] (endpoints included)."""
    if not 0 < grid <= 0.5:
        raise ValueError(f"grid step must lie in (0, 0.5], got {grid}")
    npts = int(round(1.0 / grid))
    alphas = np.linspace(0.0, 1.0, npts + 1)
    values = np.array([f_alpha(k, r, q, a) for a in alphas])
    return DensityCurve(k=k, r=r, q=q, alphas=alphas, values=values)


@dataclass(frozen=True)
class RcBound:
    """Density at which max{f(alpha) : alpha <= 1/2} crosses 1."""

    k: int
    q: float
    r_upper: float
    argmax_alpha: float


def max_f_below_half(k: int, r: float, q: float) -> tuple[float, float]:
    """(argmax, max) of f over alpha in [0, 1/2].

    Coarse 1e-3 grid to bracket the global maximum (f can have an interior
    local maximum below 1/2), then golden-section refinement to 1e-7.
    """
    grid = np.linspace(0.0, 0.5, 501)
    logs = np.array([log_f_alpha(k, r, q, a) for a in grid])
    i = int(np.argmax(logs))
    lo = float(grid[max(i - 1, 0)])
    hi = float(grid[min(i + 1, len(grid) - 1)])
    x, logv = _golden_max(lambda a: log_f_alpha(k, r, q, a), lo, hi, tol=1e-7)
    return float(x), math.exp(logv)


def rc_upper_bound(k: int, q: float, r_tol: float = 1e-4) -> RcBound:
    """Solve max{f(alpha) : alpha <= 1/2} = 1 for the density r.

    Valid for 0 < q <= qstar(k) (balanced or deceptive bias); above that the
    alternate-solution bound is not meaningful and a ValueError is raised.
    The maximum of f is strictly decreasing in r (the clause factor is < 1
    for alpha <= 1/2), so outer bisection on r brackets the crossing.
    """
    _check(k, q)
    if q > qstar(k) + 1e-12:
        raise ValueError(
            f"q={q} exceeds the balanced value qstar({k})={qstar(k):.6f}; "
            "the alternate-solution bound applies only for q <= qstar"
        )
    lo, hi = 0.25, 8.0
    if max_f_below_half(k, lo, q)[1] <= 1.0:
        raise ValueError(f"max f already below 1 at r={lo}; no crossing to bracket")
    while max_f_below_half(k, hi, q)[1] > 1.0:
        hi *= 2.0
        if hi > 512.0:
            raise ValueError(f"no density up to {hi} brings max f below 1")
    while hi - lo > r_tol:
        mid = 0.5 * (lo + hi)
        if max_f_below_half(k, mid, q)[1] > 1.0:
            lo = mid
        else:
            hi = mid
    r_upper = 0.5 * (lo + hi)
    argmax, _ = max_f_below_half(k, r_upper, q)
    return RcBound(k=k, q=q, r_upper=r_upper, argmax_alpha=argmax)


def _golden_max(fun, lo: float, hi: float, tol: float) -> tuple[float, float]:
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = fun(x1), fun(x2)
    while hi - lo > tol:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = fun(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = fun(x1)
    x = 0.5 * (lo + hi)
    return x, fun(x)


def _check(k: int, q: float, r: float | None = None) -> None:
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    if not (0.0 < q <= 1.0):
        raise ValueError(f"q must lie in (0, 1], got {q}")
    if r is not None and not r > 0:
        raise ValueError(f"density r must be positive, got {r}")
