"""Command-line front end: gen, solve, analyze, uc-ode, bench.

``solve`` follows solver-competition conventions: an ``s`` status line, a
``v`` model line when satisfiable, a ``c effort`` comment, and exit codes
10 (sat) / 20 (unsat) / 0 (unknown).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bench, uc_ode
from .analytics import density_curve, qstar, rc_upper_bound
from .formula import evaluate, parse_dimacs, write_dimacs
from .generator import MODES, GeneratorParams, generate
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


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance as DIMACS CNF")
    p.add_argument("--mode", choices=MODES, required=True)
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--r", type=float, help="clause density m/n")
    group.add_argument("--m", type=int, help="explicit clause count")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--q", type=float, help="bias for mode 'q'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--meta", help="write a JSON metadata sidecar here")
    p.add_argument("--hidden-comment", action="store_true",
                   help="embed the planted assignment as a 'c hidden' line")

    p = sub.add_parser("solve", help="run a reference solver on a CNF file")
    p.add_argument("--solver", choices=("uc", "dpll", "walksat", "majority"), required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-flips", type=int, default=10_000)
    p.add_argument("--max-tries", type=int, default=10_000)
    p.add_argument("--noise", type=float, default=0.5)
    p.add_argument("--greedy", choices=("break", "gain"), default="break")
    p.add_argument("--node-limit", type=int)

    p = sub.add_parser("analyze", help="closed-form solution-density analytics")
    asub = p.add_subparsers(dest="analyze_command", required=True)
    pa = asub.add_parser("falpha", help="CSV of (alpha, f) on a uniform grid")
    pa.add_argument("--k", type=int, default=3)
    pa.add_argument("--r", type=float, required=True)
    pa.add_argument("--q", type=float, required=True)
    pa.add_argument("--grid", type=float, default=1e-3)
    pa = asub.add_parser("qstar", help="balanced bias value for width k")
    pa.add_argument("--k", type=int, default=3)
    pa = asub.add_parser("rc", help="alternate-solution density bound")
    pa.add_argument("--k", type=int, default=3)
    pa.add_argument("--q", type=float, required=True)

    p = sub.add_parser("uc-ode", help="unit-clause heuristic density flow")
    usub = p.add_subparsers(dest="uc_command", required=True)
    pu = usub.add_parser("trajectory", help="CSV of the sampled trajectory")
    pu.add_argument("--r", type=float, required=True)
    pu.add_argument("--q", type=float, required=True)
    pu.add_argument("--step", type=float, default=1e-4)
    pu = usub.add_parser("threshold", help="critical density for given q")
    pu.add_argument("--q", type=float, required=True)
    pu.add_argument("--tol", type=float, default=1e-3)

    p = sub.add_parser("bench", help="experiment harness")
    bsub = p.add_subparsers(dest="bench_command", required=True)
    pb = bsub.add_parser("sweep", help="run a sweep from a config file")
    pb.add_argument("--config", required=True)
    pb.add_argument("--plot-data", help="also write two-column gnuplot data here")
    pb = bsub.add_parser("rc", help="empirical hardness-transition estimate")
    pb.add_argument("--q", type=float, action="append", required=True)
    pb.add_argument("--solver", choices=("walksat", "dpll"), default="walksat")
    pb.add_argument("--n", type=int, default=150)
    pb.add_argument("--trials", type=int, default=9)
    pb.add_argument("--grid", default="4.0:7.0:0.5", help="lo:hi:step densities")
    pb.add_argument("--max-flips", type=int, default=5000)
    pb.add_argument("--max-tries", type=int, default=60)
    pb.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_gen(args) -> int:
    params = GeneratorParams(mode=args.mode, n=args.n, r=args.r, m=args.m,
                             k=args.k, q=args.q, seed=args.seed)
    inst = generate(params)
    text = write_dimacs(inst.formula, inst.hidden if args.hidden_comment else None)
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
    else:
        sys.stdout.write(text)
    if args.meta:
        Path(args.meta).write_text(json.dumps(inst.metadata(), indent=2) + "\n", encoding="ascii")
    return 0


def _cmd_solve(args) -> int:
    formula, _hidden = parse_dimacs(Path(args.infile).read_text(encoding="ascii"))
    if args.solver == "uc":
        out = uc_run(formula, seed=args.seed)
    elif args.solver == "dpll":
        out = dpll_solve(formula, seed=args.seed, node_limit=args.node_limit)
    elif args.solver == "walksat":
        out = walksat_solve(formula, WalkSatParams(
            max_flips=args.max_flips, max_tries=args.max_tries,
            noise=args.noise, greedy=args.greedy, seed=args.seed))
    else:
        assignment = majority_assignment(formula, seed=args.seed)
        unsat = evaluate(formula, assignment)
        out = SolveOutcome(status=SAT if unsat == 0 else GAVE_UP,
                           assignment=assignment if unsat == 0 else None, effort=unsat)
    print(f"c effort {out.effort}")
    if out.status == SAT:
        print("s SATISFIABLE")
        lits = " ".join(str(i + 1 if out.assignment[i] else -(i + 1)) for i in range(formula.n))
        print(f"v {lits} 0")
        return 10
    if out.status == UNSAT:
        print("s UNSATISFIABLE")
        return 20
    print("s UNKNOWN")
    return 0


def _cmd_analyze(args) -> int:
    if args.analyze_command == "falpha":
        curve = density_curve(args.k, args.r, args.q, grid=args.grid)
        print("alpha,f")
        for a, v in zip(curve.alphas, curve.values):
            print(f"{float(a)!r},{float(v)!r}")
    elif args.analyze_command == "qstar":
        print(repr(qstar(args.k)))
    else:
        bound = rc_upper_bound(args.k, args.q)
        print("q,r_upper,argmax_alpha")
        print(f"{bound.q!r},{bound.r_upper!r},{bound.argmax_alpha!r}")
    return 0


def _cmd_uc_ode(args) -> int:
    if args.uc_command == "trajectory":
        traj = uc_ode.integrate(args.r, args.q, step=args.step)
        print("x,s30,s31,s32,s33,s20,s21,s22,lambda,mF,mT")
        for st in traj.states:
            stats = uc_ode.branching_stats(st)
            row = [st.x, *st.s3, *st.s2, stats.lambda_max, stats.m_false, stats.m_true]
            print(",".join(repr(float(v)) for v in row))
        if traj.critical_x is not None:
            print(f"# critical at x = {traj.critical_x!r}")
    else:
        thr = uc_ode.uc_threshold(args.q, tolerance=args.tol)
        print("q,r_threshold")
        print(f"{args.q!r},{thr!r}")
    return 0


def _cmd_bench(args) -> int:
    if args.bench_command == "sweep":
        config = bench.parse_sweep_config(Path(args.config).read_text(encoding="ascii"))
        records = bench.run_sweep(config)
        if config.out is None:
            print(bench.CSV_HEADER)
            for rec in records:
                print(rec.csv_row())
        if args.plot_data:
            bench.write_plot_data(records, args.plot_data)
    else:
        lo, hi, step = (float(x) for x in args.grid.split(":"))
        grid = []
        r = lo
        while r <= hi + 1e-9:
            grid.append(round(r, 10))
            r += step
        print("q,r_estimate,low_confidence")
        for q in args.q:
            est = bench.estimate_rc_empirical(
                q, n=args.n, r_grid=grid, trials=args.trials, solver=args.solver,
                solver_params={"max_flips": args.max_flips, "max_tries": args.max_tries},
                master_seed=args.seed)
            print(f"{q!r},{est.r_estimate!r},{int(est.low_confidence)}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "gen": _cmd_gen,
        "solve": _cmd_solve,
        "analyze": _cmd_analyze,
        "uc-ode": _cmd_uc_ode,
        "bench": _cmd_bench,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
