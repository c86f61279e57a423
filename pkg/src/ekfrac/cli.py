"""``ek`` command-line interface.

Every subcommand prints CSV to standard output (or ``--out FILE``). Exit codes:
0 on success, 2 for invalid arguments, 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import sys

from .errors import NumericalError, ParameterError
from .operators import OperatorParams
from .solver import SolverConfig
from .studies import (
    HEADERS,
    INITIAL_CONDITIONS,
    OPERATOR_FUNCTIONS,
    StudySpec,
    format_csv,
    operator_convergence_study,
    solve_trace,
    solver_convergence_study,
    spectral_convergence_study,
    stability_sweep,
    weights_table,
    write_csv,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3

# operator studies beyond this many steps need --large
LARGE_THRESHOLD = 40_000


def _int_list(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _params_args(p: argparse.ArgumentParser):
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)


def _out_arg(p: argparse.ArgumentParser):
    p.add_argument("--out", metavar="FILE", help="write CSV here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ek", description="Erdelyi-Kober operators and Hermite-Galerkin diffusion solver."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("weights", help="quadrature weights c_{n,i} (and d_{n,i})")
    _params_args(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--with-d", action="store_true", help="add the d_{n,i} column")
    _out_arg(p)

    p = sub.add_parser("op-order", help="operator errors and Aitken orders")
    _params_args(p)
    p.add_argument("--fn", choices=OPERATOR_FUNCTIONS[:3], required=True)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--grid", type=_int_list, required=True)
    p.add_argument(
        "--large", action="store_true", help=f"allow grids beyond n={LARGE_THRESHOLD}"
    )
    _out_arg(p)

    p = sub.add_parser("solve", help="run the solver and trace ||U^n||")
    _params_args(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--ic", choices=INITIAL_CONDITIONS, default="gauss")
    _out_arg(p)

    p = sub.add_parser("solver-order", help="temporal convergence of the solver")
    _params_args(p)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--ic", choices=INITIAL_CONDITIONS, default="gauss")
    p.add_argument("--grid", type=_int_list, required=True)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument(
        "--mode",
        choices=("auto", "aitken", "exact"),
        default="auto",
        help="error measure; auto uses the exact solution when beta=1 with gauss data",
    )
    _out_arg(p)

    p = sub.add_parser("spectral-order", help="convergence in the truncation index N")
    _params_args(p)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--grid", type=_int_list, required=True)
    p.add_argument("--reference-N", type=int, default=60)
    p.add_argument("--exact", action="store_true", help="compare with the exact solution")
    p.add_argument("--ic", choices=INITIAL_CONDITIONS, default="gauss")
    p.add_argument("--T", type=float, default=1.0)
    _out_arg(p)

    p = sub.add_parser("stability-sweep", help="max ||U^n||/||U^0|| over an (alpha, beta) grid")
    p.add_argument("--grid-alpha", type=_float_list, required=True)
    p.add_argument("--grid-beta", type=_float_list, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--N", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--init", choices=("random", "unit", "zero"), default="random")
    _out_arg(p)
    return parser


def _run(args) -> tuple[tuple, list]:
    cmd = args.command
    if cmd == "stability-sweep":
        spec = StudySpec(
            "stability-sweep",
            alphas=args.grid_alpha,
            betas=args.grid_beta,
            n_steps=args.steps,
            N=args.N,
            seed=args.seed,
            init=args.init,
        )
        return HEADERS[cmd], stability_sweep(spec)

    params = OperatorParams(args.alpha, args.beta)
    if cmd == "weights":
        if args.n < 1:
            raise ParameterError(f"--n must be >= 1, got {args.n}")
        header = ("i", "c", "d") if args.with_d else ("i", "c")
        return header, weights_table(params, args.n, args.with_d)
    if cmd == "op-order":
        if args.grid and max(args.grid) > LARGE_THRESHOLD and not args.large:
            raise ParameterError(
                f"grid values above {LARGE_THRESHOLD} take minutes; pass --large to run them"
            )
        spec = StudySpec("operator-order", params, args.grid, args.fn, args.t)
        return HEADERS["operator-order"], operator_convergence_study(spec)
    if cmd == "solve":
        config = SolverConfig(params, args.N, args.steps, args.T)
        return HEADERS[cmd], solve_trace(config, args.ic)
    if cmd == "solver-order":
        spec = StudySpec("solver-order", params, args.grid, args.ic, args.T, N=args.N, mode=args.mode)
        return HEADERS[cmd], solver_convergence_study(spec)
    if cmd == "spectral-order":
        spec = StudySpec(
            "spectral-order",
            params,
            args.grid,
            args.ic,
            args.T,
            n_steps=args.steps,
            reference_N=args.reference_N,
            mode="exact" if args.exact else "reference",
        )
        return HEADERS[cmd], spectral_convergence_study(spec)
    raise ParameterError(f"unknown command {cmd!r}")  # pragma: no cover


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        header, rows = _run(args)
    except ParameterError as exc:
        print(f"ek: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, OverflowError) as exc:
        print(f"ek: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.out:
        write_csv(args.out, header, rows)
    else:
        sys.stdout.write(format_csv(header, rows))
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
