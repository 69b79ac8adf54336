"""Experiment harness: seeded parameter sweeps, median statistics, an
external-solver adapter, and CSV emission.

Each (mode, q, n, r) sweep point gets ``trials`` instances whose seeds are
derived by hashing the master seed with the point coordinates and trial
index, so cells are self-contained and any execution order yields the same
records. Output is one flat CSV schema::

    mode,q,k,n,r,m,trial,seed,solver,status,metric,value,wall_ms

followed by per-point summary rows (median effort, gave-up fraction) with
trial = -1. Wall times are recorded only when ``wall_time`` is enabled or
an external solver runs; they are zeroed otherwise so that identical
configs produce byte-identical CSV.
"""

from __future__ import annotations

import hashlib
import shlex
import statistics
import subprocess
import time
from dataclasses import dataclass, field
from pathlib import Path

from .formula import evaluate, write_dimacs
from .generator import GeneratorParams, generate
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

INTERNAL_SOLVERS = ("walksat", "dpll", "uc", "majority")

_METRIC = {"walksat": "flips", "dpll": "nodes", "uc": "rounds", "majority": "unsat_clauses"}

CSV_HEADER = "mode,q,k,n,r,m,trial,seed,solver,status,metric,value,wall_ms"


def derive_seed(master: int, *parts) -> int:
    """Stable 64-bit seed from the master seed and arbitrary coordinates."""
    text = repr(int(master)) + "".join("|" + repr(p) for p in parts)
    return int.from_bytes(hashlib.blake2b(text.encode(), digest_size=8).digest(), "little")


@dataclass(frozen=True)
class ExternalSolverSpec:
    """Subprocess adapter for DIMACS-speaking solvers.

    ``command`` must contain exactly one ``{cnf}`` placeholder for the
    instance path; stdout is scanned for the conventional
    ``s SATISFIABLE`` / ``s UNSATISFIABLE`` line.
    """

    command: str
    timeout_s: float = 60.0

    def __post_init__(self):
        if self.command.count("{cnf}") != 1:
            raise ValueError("command template needs exactly one {cnf} placeholder")
        if self.timeout_s <= 0:
            raise ValueError(f"timeout must be positive, got {self.timeout_s}")


@dataclass(frozen=True)
class SweepConfig:
    """One sweep: cross product of modes, q, n, r with per-point trials."""

    modes: tuple[str, ...]
    q_values: tuple[float, ...] = ()
    k: int = 3
    n_values: tuple[int, ...] = (100,)
    r_values: tuple[float, ...] = (4.0,)
    trials: int = 49
    solver: str = "walksat"
    solver_params: dict = field(default_factory=dict)
    seed: int = 0
    out: str | None = None
    keep_cnf: str | None = None
    wall_time: bool = False

    def __post_init__(self):
        if not self.modes:
            raise ValueError("at least one mode is required")
        if "q" in self.modes and not self.q_values:
            raise ValueError("mode 'q' requires q values")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.solver not in INTERNAL_SOLVERS + ("external",):
            raise ValueError(f"unknown solver {self.solver!r}")
        if self.solver == "external":
            ExternalSolverSpec(
                command=self.solver_params.get("command", ""),
                timeout_s=float(self.solver_params.get("timeout", 60.0)),
            )

    def points(self):
        for mode in self.modes:
            q_list = self.q_values if mode == "q" else (None,)
            for q in q_list:
                for n in self.n_values:
                    for r in self.r_values:
                        yield mode, q, n, r


@dataclass(frozen=True)
class BenchRecord:
    """One (instance, solver, outcome) row; trial -1 marks summary rows."""

    mode: str
    q: float | None
    k: int
    n: int
    r: float
    m: int
    trial: int
    seed: int
    solver: str
    status: str
    metric: str
    value: float
    wall_ms: float = 0.0

    def csv_row(self) -> str:
        q = "" if self.q is None else repr(self.q)
        value = repr(int(self.value)) if float(self.value).is_integer() else repr(self.value)
        wall = repr(int(self.wall_ms)) if float(self.wall_ms).is_integer() else f"{self.wall_ms:.3f}"
        return (
            f"{self.mode},{q},{self.k},{self.n},{repr(self.r)},{self.m},"
            f"{self.trial},{self.seed},{self.solver},{self.status},"
            f"{self.metric},{value},{wall}"
        )


def _run_internal(solver: str, formula, solver_seed: int, params: dict) -> tuple[str, str, float]:
    """Returns (status, metric, value) for one internal-solver cell."""
    if solver == "walksat":
        wp = WalkSatParams(
            max_flips=int(params.get("max_flips", 10_000)),
            max_tries=int(params.get("max_tries", 10_000)),
            noise=float(params.get("noise", 0.5)),
            greedy=params.get("greedy", "break"),
            seed=solver_seed,
        )
        out = walksat_solve(formula, wp)
    elif solver == "dpll":
        limit = params.get("node_limit")
        out = dpll_solve(formula, seed=solver_seed, node_limit=int(limit) if limit else None)
    elif solver == "uc":
        out = uc_run(formula, seed=solver_seed)
    elif solver == "majority":
        assignment = majority_assignment(formula, seed=solver_seed)
        unsat = evaluate(formula, assignment)
        out = SolveOutcome(status=SAT if unsat == 0 else GAVE_UP, assignment=assignment, effort=unsat)
    else:
        raise ValueError(f"unknown internal solver {solver!r}")
    return out.status, _METRIC[solver], float(out.effort)


def run_external(spec: ExternalSolverSpec, cnf_path: str) -> tuple[str, float]:
    """Launch the external command on one instance; (status, wall_ms).

    Timeouts give 'gaveup'; a missing binary or output with no parseable
    status line gives 'error'. The sweep always continues past errors.
    """
    cmd = shlex.split(spec.command.replace("{cnf}", str(cnf_path)))
    t0 = time.perf_counter()
    try:
        proc = subprocess.run(cmd, capture_output=True, text=True, timeout=spec.timeout_s)
    except subprocess.TimeoutExpired:
        return GAVE_UP, (time.perf_counter() - t0) * 1000.0
    except (FileNotFoundError, OSError):
        return "error", (time.perf_counter() - t0) * 1000.0
    wall = (time.perf_counter() - t0) * 1000.0
    for line in proc.stdout.splitlines():
        line = line.strip()
        if line.startswith("s "):
            verdict = line[2:].strip()
            if verdict == "SATISFIABLE":
                return SAT, wall
            if verdict == "UNSATISFIABLE":
                return UNSAT, wall
            if verdict == "UNKNOWN":
                return GAVE_UP, wall
    return "error", wall


def run_sweep(config: SweepConfig) -> list[BenchRecord]:
    """Generate, solve and record every (point, trial) cell, then append
    the per-point summary rows. Records come out in canonical order
    (config listing order, then trial index) regardless of how cells were
    executed."""
    records: list[BenchRecord] = []
    summaries: list[BenchRecord] = []
    keep_dir = Path(config.keep_cnf) if config.keep_cnf else None
    if keep_dir:
        keep_dir.mkdir(parents=True, exist_ok=True)

    for mode, q, n, r in config.points():
        point_records = [
            _run_cell(config, mode, q, n, r, trial, keep_dir)
            for trial in range(config.trials)
        ]
        records.extend(point_records)
        efforts = [rec.value for rec in point_records]
        gaveup = sum(rec.status == GAVE_UP for rec in point_records) / len(point_records)
        base = point_records[0]
        summaries.append(BenchRecord(
            mode=mode, q=q, k=config.k, n=n, r=r, m=base.m, trial=-1, seed=0,
            solver=base.solver, status="summary",
            metric=f"median_{base.metric}", value=float(statistics.median(efforts)),
        ))
        summaries.append(BenchRecord(
            mode=mode, q=q, k=config.k, n=n, r=r, m=base.m, trial=-1, seed=0,
            solver=base.solver, status="summary",
            metric="gaveup_fraction", value=gaveup,
        ))
    records.extend(summaries)

    if config.out:
        write_csv(records, config.out)
    return records


def _run_cell(config: SweepConfig, mode, q, n, r, trial, keep_dir) -> BenchRecord:
    inst_seed = derive_seed(config.seed, "instance", mode, q, n, r, trial)
    solver_seed = derive_seed(config.seed, "solver", mode, q, n, r, trial)
    gp = GeneratorParams(mode=mode, n=n, r=r, k=config.k, q=q, seed=inst_seed)
    inst = generate(gp)

    cnf_path = None
    if keep_dir is not None:
        qtag = "na" if q is None else repr(q)
        cnf_path = keep_dir / f"{mode}_q{qtag}_n{n}_r{repr(r)}_t{trial}.cnf"
        cnf_path.write_text(write_dimacs(inst.formula, inst.hidden), encoding="ascii")

    wall_ms = 0.0
    if config.solver == "external":
        spec = ExternalSolverSpec(
            command=config.solver_params["command"],
            timeout_s=float(config.solver_params.get("timeout", 60.0)),
        )
        if cnf_path is None:
            import tempfile

            with tempfile.NamedTemporaryFile("w", suffix=".cnf", delete=False) as tf:
                tf.write(write_dimacs(inst.formula))
                tmp = Path(tf.name)
            try:
                status, wall_ms = run_external(spec, str(tmp))
            finally:
                tmp.unlink(missing_ok=True)
        else:
            status, wall_ms = run_external(spec, str(cnf_path))
        metric, value = "wall_ms", wall_ms
    else:
        t0 = time.perf_counter()
        try:
            status, metric, value = _run_internal(
                config.solver, inst.formula, solver_seed, config.solver_params)
        except Exception:
            status, metric, value = "error", _METRIC[config.solver], 0.0
        if config.wall_time:
            wall_ms = (time.perf_counter() - t0) * 1000.0

    return BenchRecord(
        mode=mode, q=q, k=config.k, n=n, r=r, m=gp.num_clauses, trial=trial,
        seed=inst_seed, solver=config.solver, status=status, metric=metric,
        value=value, wall_ms=wall_ms,
    )


def write_csv(records: list[BenchRecord], path: str) -> None:
    lines = [CSV_HEADER] + [rec.csv_row() for rec in records]
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def write_plot_data(records: list[BenchRecord], path: str) -> None:
    """Two-column (x, median) gnuplot blocks, one block per summary group.

    The x axis is whichever of r, n, q varies across the summary rows
    (priority r, n, q); blocks are separated by blank lines.
    """
    rows = [rec for rec in records if rec.status == "summary" and rec.metric.startswith("median_")]
    if not rows:
        raise ValueError("no summary rows to plot")
    axes = {
        "r": sorted({rec.r for rec in rows}),
        "n": sorted({rec.n for rec in rows}),
        "q": sorted({rec.q for rec in rows}, key=lambda v: (v is None, v)),
    }
    axis = next((name for name in ("r", "n", "q") if len(axes[name]) > 1), "r")
    def group_key(rec):
        parts = [f"mode={rec.mode}"]
        if axis != "q":
            parts.append(f"q={'' if rec.q is None else repr(rec.q)}")
        if axis != "n":
            parts.append(f"n={rec.n}")
        if axis != "r":
            parts.append(f"r={repr(rec.r)}")
        return " ".join(parts)

    blocks: dict[str, list[str]] = {}
    for rec in rows:
        x = getattr(rec, axis)
        x_repr = "" if x is None else repr(x)
        blocks.setdefault(group_key(rec), []).append(f"{x_repr} {repr(rec.value)}")
    out = []
    for key in blocks:
        out.append(f"# {key}")
        out.extend(blocks[key])
        out.append("")
    Path(path).write_text("\n".join(out), encoding="ascii")


@dataclass(frozen=True)
class RcEstimate:
    """Empirical hardness-transition density from a median-effort r scan."""

    q: float
    r_estimate: float
    low_confidence: bool
    medians: tuple[tuple[float, float], ...]


def estimate_rc_empirical(
    q: float,
    n: int,
    r_grid,
    trials: int,
    solver: str = "walksat",
    solver_params: dict | None = None,
    master_seed: int = 0,
    k: int = 3,
) -> RcEstimate:
    """Locate the density where the solver's median effort blows up.

    For WalkSAT-style solvers: the smallest grid density whose median
    effort reaches the flip budget; if no point does, the argmax of the
    median (flagged low-confidence when the grid is flat). For DPLL the
    estimate is the argmax of the median node count.
    """
    r_grid = list(r_grid)
    if len(r_grid) < 3:
        raise ValueError(f"need at least 3 grid densities, got {len(r_grid)}")
    if any(b <= a for a, b in zip(r_grid, r_grid[1:])):
        raise ValueError("r grid must be strictly ascending")
    solver_params = dict(solver_params or {})
    config = SweepConfig(
        modes=("q",), q_values=(q,), k=k, n_values=(n,), r_values=tuple(r_grid),
        trials=trials, solver=solver, solver_params=solver_params, seed=master_seed,
    )
    records = run_sweep(config)
    medians = [
        (rec.r, rec.value)
        for rec in records
        if rec.status == "summary" and rec.metric.startswith("median_")
    ]
    medians.sort()
    values = [v for _, v in medians]
    low_confidence = max(values) == min(values)
    if solver == "walksat":
        ceiling = float(
            int(solver_params.get("max_flips", 10_000)) * int(solver_params.get("max_tries", 10_000)))
        for r, v in medians:
            if v >= ceiling:
                return RcEstimate(q=q, r_estimate=r, low_confidence=low_confidence,
                                  medians=tuple(medians))
        low_confidence = True
    best_r = max(medians, key=lambda rv: rv[1])[0]
    return RcEstimate(q=q, r_estimate=best_r, low_confidence=low_confidence,
                      medians=tuple(medians))


def parse_sweep_config(text: str) -> SweepConfig:
    """Parse the flat key = value sweep format ('#' comments, lists comma
    separated). Solver knobs (max_flips, max_tries, noise, greedy,
    node_limit, command, timeout) pass through to the solver."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, value = line.split("=", 1)
        raw[key.strip()] = value.strip()

    def split_list(val):
        return tuple(x.strip() for x in val.split(",") if x.strip())

    known_solver_keys = ("max_flips", "max_tries", "noise", "greedy", "node_limit",
                        "command", "timeout")
    solver_params = {key: raw.pop(key) for key in list(raw) if key in known_solver_keys}
    kwargs: dict = {}
    if "modes" in raw:
        kwargs["modes"] = split_list(raw.pop("modes"))
    if "q" in raw:
        kwargs["q_values"] = tuple(float(x) for x in split_list(raw.pop("q")))
    if "k" in raw:
        kwargs["k"] = int(raw.pop("k"))
    if "n" in raw:
        kwargs["n_values"] = tuple(int(x) for x in split_list(raw.pop("n")))
    if "r" in raw:
        kwargs["r_values"] = tuple(float(x) for x in split_list(raw.pop("r")))
    if "trials" in raw:
        kwargs["trials"] = int(raw.pop("trials"))
    if "solver" in raw:
        kwargs["solver"] = raw.pop("solver")
    if "seed" in raw:
        kwargs["seed"] = int(raw.pop("seed"))
    if "out" in raw:
        kwargs["out"] = raw.pop("out")
    if "keep_cnf" in raw:
        kwargs["keep_cnf"] = raw.pop("keep_cnf")
    if "wall_time" in raw:
        kwargs["wall_time"] = raw.pop("wall_time").lower() in ("1", "true", "yes", "on")
    if raw:
        raise ValueError(f"unknown config keys: {sorted(raw)}")
    if "modes" not in kwargs:
        raise ValueError("config must set 'modes'")
    kwargs["solver_params"] = solver_params
    return SweepConfig(**kwargs)
