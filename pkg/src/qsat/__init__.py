"""Hard satisfiable random k-SAT benchmarks with planted assignments.

Generators for the zero/one/two/q-hidden schemes, closed-form
solution-density analytics, a clause-flow model of the unit-clause
heuristic, reference solvers, and a sweep harness. See the per-module
docstrings for details; the ``qsat`` command exposes the lot on the
command line.
"""

from .analytics import (
    DensityCurve,
    RcBound,
    density_curve,
    expected_solutions_exact,
    f_alpha,
    f_prime_half,
    log_expected_solutions_exact,
    log_f_alpha,
    rc_upper_bound,
)
from .formula import (
    DimacsParseError,
    Formula,
    complement,
    evaluate,
    overlap_alpha,
    parse_dimacs,
    write_dimacs,
)
from .generator import (
    MODES,
    GeneratedInstance,
    GeneratorParams,
    expected_agree_fraction,
    generate,
    qstar,
    sign_pattern_distribution,
    with_replacement_variant,
)
from .solvers import (
    GAVE_UP,
    SAT,
    UNSAT,
    SolveOutcome,
    WalkSatParams,
    dpll_solve,
    majority_assignment,
    uc_run,
    walksat_solve,
)
from .uc_ode import (
    BranchingStats,
    UcState,
    UcTrajectory,
    branching_stats,
    initial_state,
    integrate,
    uc_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "DensityCurve", "RcBound", "density_curve", "expected_solutions_exact",
    "f_alpha", "f_prime_half", "log_expected_solutions_exact", "log_f_alpha",
    "rc_upper_bound",
    "DimacsParseError", "Formula", "complement", "evaluate", "overlap_alpha",
    "parse_dimacs", "write_dimacs",
    "MODES", "GeneratedInstance", "GeneratorParams", "expected_agree_fraction",
    "generate", "qstar", "sign_pattern_distribution", "with_replacement_variant",
    "GAVE_UP", "SAT", "UNSAT", "SolveOutcome", "WalkSatParams", "dpll_solve",
    "majority_assignment", "uc_run", "walksat_solve",
    "BranchingStats", "UcState", "UcTrajectory", "branching_stats",
    "initial_state", "integrate", "uc_threshold",
    "__version__",
]
