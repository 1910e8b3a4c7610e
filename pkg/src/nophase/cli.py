"""Command-line interface.

Subcommands:
  solve    build and solve a problem, write a bounds report as JSON
  verify   solve and cross-check against an independent ODE integrator
  sweep    run a list of lambdas and write per-lambda metrics as CSV
  selftest run the packaged invariant test suite

Exit codes: 0 success, 1 certification failure, 2 numerical failure.
"""

import argparse
import json
import sys

import numpy as np

from .errors import (ConfigurationError, ConvergenceError, NophaseError,
                     NumericalError)
from .grid import linf_norm
from .oracle import basis_error
from .phase import build_phase, interior_nodes, kummer_residual
from .problem import build_problem, load_problem_file
from .solver import solve_problem
from .sweep import run_sweep

EXIT_OK = 0
EXIT_CERTIFICATION = 1
EXIT_NUMERICAL = 2


def _resolve_lambda(config, args):
    lam = getattr(args, "lam", None)
    if lam is None:
        lam = config.lam
    if lam is None:
        raise NumericalError("no lambda given on the command line or in the "
                             "problem file")
    return float(lam)


def _solve(config, lam, grid_L=None, grid_N=None, tol=1e-14):
    L = grid_L if grid_L is not None else config.grid_L
    N = grid_N if grid_N is not None else config.grid_N
    prob = build_problem(config.coefficient, lam, L=L, N=N)
    result, state = solve_problem(prob, tol=tol)
    return prob, result, state


def cmd_solve(args):
    config = load_problem_file(args.problem)
    lam = _resolve_lambda(config, args)
    prob, result, _ = _solve(config, lam, grid_L=args.grid_L,
                             grid_N=args.grid_N, tol=args.tol)
    report = result.bounds_report
    payload = report.as_dict()
    if args.out:
        with open(args.out, "w") as handle:
            json.dump(payload, handle, indent=2)
    else:
        json.dump(payload, sys.stdout, indent=2)
        print()
    ok = (report.certified and report.sigma_support_ok
          and report.sigma_decay_ok and report.nu_bound_ok)
    print(f"solve: lambda={lam:g} iterations={report.iterations} "
          f"nu_inf={report.nu_inf:.3e} certified={report.certified}",
          file=sys.stderr)
    return EXIT_OK if ok else EXIT_CERTIFICATION


def cmd_verify(args):
    config = load_problem_file(args.problem)
    lam = _resolve_lambda(config, args)
    prob, result, _ = _solve(config, lam)
    phase = build_phase(result, prob)
    nodes = interior_nodes(phase.a, phase.b)
    res = float(np.max(np.abs(
        kummer_residual(phase, prob.coefficient.q, nodes))))
    err_u, err_v = basis_error(phase, prob, tol=args.oracle_tol)
    nu_inf = linf_norm(result.nu)

    res_tol = 1e-8 * lam ** 2
    err_tol = max(1e4 * args.oracle_tol, 1e-9)
    res_ok = res <= res_tol
    err_ok = err_u <= err_tol and err_v <= err_tol
    print(f"verify: lambda={lam:g}")
    print(f"  phase-equation residual  {res:.3e}  "
          f"(tol {res_tol:.1e}) {'ok' if res_ok else 'FAIL'}")
    print(f"  basis error u            {err_u:.3e}  "
          f"(tol {err_tol:.1e}) {'ok' if err_u <= err_tol else 'FAIL'}")
    print(f"  basis error v            {err_v:.3e}  "
          f"(tol {err_tol:.1e}) {'ok' if err_v <= err_tol else 'FAIL'}")
    print(f"  nu_inf                   {nu_inf:.3e}")
    return EXIT_OK if (res_ok and err_ok) else EXIT_CERTIFICATION


def cmd_sweep(args):
    lambdas = [float(s) for s in args.lambdas.split(",") if s.strip()]
    report = run_sweep(args.problem, lambdas, args.out, tol=args.tol)
    failed = [row for row in report.rows if row.error is not None]
    for row in failed:
        print(f"sweep: lambda={row.lam:g} failed: {row.error}",
              file=sys.stderr)
    print(f"sweep: {len(report.rows) - len(failed)}/{len(report.rows)} "
          f"lambdas completed -> {args.out}")
    return EXIT_OK if not failed else EXIT_NUMERICAL


def cmd_selftest(args):
    import pytest

    code = pytest.main([_tests_dir(), "-q", "-p", "no:cacheprovider"])
    return EXIT_OK if code == 0 else EXIT_NUMERICAL


def _tests_dir():
    import pathlib

    here = pathlib.Path(__file__).resolve()
    for parent in here.parents:
        candidate = parent / "tests"
        if candidate.is_dir():
            return str(candidate)
    raise NumericalError("test suite not found alongside the package")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nophase",
        description="Nonoscillatory phase functions for y'' + l^2 q y = 0 "
                    "via band-limited fixed-point iteration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve and write a bounds report")
    p_solve.add_argument("problem", help="problem definition JSON file")
    p_solve.add_argument("--lambda", dest="lam", type=float, default=None)
    p_solve.add_argument("--grid-N", dest="grid_N", type=int, default=None)
    p_solve.add_argument("--grid-L", dest="grid_L", type=float, default=None)
    p_solve.add_argument("--tol", type=float, default=1e-14)
    p_solve.add_argument("--out", default=None, help="report JSON path")
    p_solve.set_defaults(func=cmd_solve)

    p_verify = sub.add_parser(
        "verify", help="solve and cross-check against an ODE integrator")
    p_verify.add_argument("problem")
    p_verify.add_argument("--lambda", dest="lam", type=float, default=None)
    p_verify.add_argument("--oracle-tol", dest="oracle_tol", type=float,
                          default=1e-13)
    p_verify.set_defaults(func=cmd_verify)

    p_sweep = sub.add_parser("sweep", help="per-lambda metrics as CSV")
    p_sweep.add_argument("problem")
    p_sweep.add_argument("--lambdas", required=True,
                         help="comma-separated list, e.g. 20,40,80")
    p_sweep.add_argument("--out", required=True, help="CSV output path")
    p_sweep.add_argument("--tol", type=float, default=1e-14)
    p_sweep.set_defaults(func=cmd_sweep)

    p_self = sub.add_parser("selftest", help="run the invariant test suite")
    p_self.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigurationError, ConvergenceError, NumericalError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NophaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CERTIFICATION


if __name__ == "__main__":
    sys.exit(main())
