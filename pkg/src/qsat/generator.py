"""Random k-SAT instance generators with planted (hidden) assignments.

Four schemes share one seeded code path:

* ``zero``: plain random k-SAT, every literal polarity a fair coin, no
  planted assignment.
* ``one``: clauses drawn uniformly among those satisfied by a planted
  assignment (identical to ``q`` with q = 1).
* ``two``: clauses satisfied by both the planted assignment and its
  complement (sign patterns with 1 <= t <= k-1 agreeing literals, uniform).
* ``q``: a clause whose sign pattern has t agreeing literals is drawn with
  probability proportional to q**t, which biases literals away from the
  planted assignment as q shrinks (balanced at q = qstar(k), deceptive
  below it).

A clause's sign pattern "agrees" on a position when that literal evaluates
true under the planted assignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .formula import Formula

MODES = ("zero", "one", "two", "q")


def sign_pattern_distribution(k: int, q: float) -> np.ndarray:
    """Probability table over t = 1..k agreeing literals per clause.

    Returns an array ``p`` of length k+1 with ``p[t]`` the probability that
    a generated clause has exactly t literals agreeing with the planted
    assignment (``p[0]`` is 0: fully disagreeing clauses are never drawn).
    """
    _check_kq(k, q)
    denom = (1.0 + q) ** k - 1.0
    p = np.zeros(k + 1)
    for t in range(1, k + 1):
        p[t] = math.comb(k, t) * q**t / denom
    return p


def expected_agree_fraction(k: int, q: float) -> float:
    """Probability that a uniformly chosen literal occurrence agrees with
    the planted assignment; exactly 1/2 at q = qstar(k)."""
    _check_kq(k, q)
    return q * (1.0 + q) ** (k - 1) / ((1.0 + q) ** k - 1.0)


def qstar(k: int) -> float:
    """The bias value in (0,1) at which literal occurrences are equally
    likely to agree or disagree with the planted assignment.

    Root of (1-q)(1+q)**(k-1) - 1 = 0, located by bisection to float
    precision. k=2 is degenerate (the root collapses to q=0, outside the
    generator's valid range).
    """
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 3, got {k!r}")
    if k == 2:
        raise ValueError("k=2 is degenerate: the balance equation has no root in (0,1)")

    def g(q: float) -> float:
        return (1.0 - q) * (1.0 + q) ** (k - 1) - 1.0

    lo, hi = 1e-9, 1.0
    if g(lo) <= 0.0:
        raise ValueError(f"no bracketing interval for k={k}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class GeneratorParams:
    """Full recipe for one instance: scheme, size, density, bias, seed.

    Exactly one of ``r`` (clause density m/n) and ``m`` may be given; with
    ``r`` the clause count is round(r*n), ties to even. ``distinct_vars``
    selects the production convention (k distinct variables per clause);
    the with-replacement variant exists to match closed-form calculations
    that assume independent positions, and may repeat variables in a clause.
    """

    mode: str
    n: int
    r: float | None = None
    m: int | None = None
    k: int = 3
    q: float | None = None
    seed: int = 0
    distinct_vars: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (self.n >= self.k >= 2):
            raise ValueError(f"need n >= k >= 2, got n={self.n}, k={self.k}")
        if (self.r is None) == (self.m is None):
            raise ValueError("give exactly one of r and m")
        if self.r is not None and not self.r > 0:
            raise ValueError(f"density r must be positive, got {self.r}")
        if self.m is not None and self.m < 0:
            raise ValueError(f"clause count m must be >= 0, got {self.m}")
        if self.mode == "q":
            if self.q is None:
                raise ValueError("mode 'q' requires the bias parameter q")
            _check_kq(self.k, self.q)
        elif self.q is not None:
            raise ValueError(f"mode {self.mode!r} does not take a q parameter")

    @property
    def num_clauses(self) -> int:
        return self.m if self.m is not None else round(self.r * self.n)

    @property
    def density(self) -> float:
        return self.r if self.r is not None else self.m / self.n


@dataclass(frozen=True)
class GeneratedInstance:
    """A generated formula plus the assignment planted in it (if any)."""

    formula: Formula
    hidden: np.ndarray | None
    params: GeneratorParams

    def metadata(self) -> dict:
        """Flat sidecar record identifying the instance and its conventions."""
        p = self.params
        return {
            "mode": p.mode,
            "q": p.q,
            "k": p.k,
            "n": p.n,
            "r": p.density,
            "m": p.num_clauses,
            "seed": p.seed,
            "variable_selection": "distinct" if p.distinct_vars else "with-replacement",
        }


def generate(params: GeneratorParams) -> GeneratedInstance:
    """Generate one instance; identical params reproduce it byte-for-byte.

    All randomness comes from a single sequential PCG64 stream seeded with
    ``params.seed``: first the planted assignment (hidden modes), then per
    clause the variable tuple, the agreeing-literal count t, and the set of
    agreeing positions.
    """
    p = params
    rng = np.random.default_rng(p.seed)
    n, k, m = p.n, p.k, p.num_clauses

    hidden = None
    if p.mode != "zero":
        hidden = rng.random(n) < 0.5

    if m == 0:
        formula = Formula(n=n, clauses=np.zeros((0, k), dtype=np.int32), k=k)
        return GeneratedInstance(formula=formula, hidden=hidden, params=p)

    variables = rng.integers(1, n + 1, size=(m, k), dtype=np.int64)
    if p.distinct_vars:
        while True:
            srt = np.sort(variables, axis=1)
            bad = (srt[:, 1:] == srt[:, :-1]).any(axis=1)
            if not bad.any():
                break
            variables[bad] = rng.integers(1, n + 1, size=(int(bad.sum()), k), dtype=np.int64)

    if p.mode == "zero":
        positive = rng.random((m, k)) < 0.5
    else:
        if p.mode == "two":
            weights = np.zeros(k + 1)
            for t in range(1, k):
                weights[t] = math.comb(k, t)
            table = weights / weights.sum()
        else:  # "one" and "q" share the biased-pattern path
            q = 1.0 if p.mode == "one" else p.q
            table = sign_pattern_distribution(k, q)
        cdf = np.cumsum(table)
        t_counts = np.searchsorted(cdf, rng.random(m), side="right")
        # rank < t marks a uniformly random size-t subset of positions
        ranks = rng.random((m, k)).argsort(axis=1).argsort(axis=1)
        agree = ranks < t_counts[:, None]
        positive = agree == hidden[variables - 1]

    clauses = np.where(positive, variables, -variables).astype(np.int32)
    formula = Formula(n=n, clauses=clauses, k=k)
    return GeneratedInstance(formula=formula, hidden=hidden, params=p)


def with_replacement_variant(params: GeneratorParams) -> GeneratorParams:
    """The analysis-matching variant of a recipe (positions drawn independently)."""
    return replace(params, distinct_vars=False)


def _check_kq(k: int, q: float) -> None:
    if not isinstance(k, int) or k < 2:
        raise ValueError(f"k must be an integer >= 2, got {k!r}")
    if not (0.0 < q <= 1.0):
        raise ValueError(f"q must lie in (0, 1], got {q}")
