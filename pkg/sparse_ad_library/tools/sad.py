"""
sad: command-line front end of the Sparse AD Library.

    sad pattern       --model lorenz [--swap-roles] | --model microgrid -N 30 [--out mm:pattern.mtx]
    sad jacobian      --model lorenz [--swap-roles] [--out PATH|mm:PATH]
    sad solve         --model lorenz [--x0 5,5,20]  | --model microgrid -N 5
    sad simulate      --model microgrid -N 1 --h 1e-5 --t-end 0.1 [--out traj.csv]
    sad bench-scaling -N 100,200,300,400,500,600 [--reps 30] [--out bench.csv]
    sad bench-dense   -N 50,100,200 [--reps 30]

Data (Matlab text, CSV) goes to stdout or --out, summaries to stdout, log
records to stderr. Exit codes: 0 success, 1 numerical failure, 2 usage
error. SAD_LOG sets the log level (debug, info, warning).
 """

__version__ = "0.1.0"
__status__ = "Development"

import argparse
import logging
import sys

import numpy as np

from sparse_ad_library.dae_integrator import (DaeConfig, consistent_init, dae_integrate,
                                              evaluate_dae, evaluate_dae_values)
from sparse_ad_library.errors import BenchmarkError, ConfigError, SadError
from sparse_ad_library.matrix_market import write_matrix_market
from sparse_ad_library.models import DAE_MODELS, MODELS, get_model
from sparse_ad_library.models.lorenz import STANDARD_PARAMS, lorenz_residual
from sparse_ad_library.newton_solver import NewtonConfig, newton_solve
from sparse_ad_library.structure import CsrMatrix, assemble_csr, print_matlab
from sparse_ad_library.tools import bench, utils
from sparse_ad_library.trajectory_processor import TrajectoryProcessor

# Init the logger.
log = logging.getLogger(__name__)

DEFAULT_STEP = {'microgrid': 1e-5, 'decay': 0.1}
DEFAULT_T_END = {'microgrid': 0.1, 'decay': 1.0}

DEFAULT_MODEL = {
    'pattern': 'lorenz',
    'jacobian': 'lorenz',
    'solve': 'lorenz',
    'simulate': 'microgrid',
    'bench-scaling': 'microgrid',
    'bench-dense': 'microgrid',
}

# Lorenz start vector for `solve`.
LORENZ_START = [5.0, 5.0, 20.0]


class UsageError(Exception):
    """ Invalid combination of command-line options (exit code 2). """


def _size_list(text):
    try:
        sizes = [int(s) for s in text.split(',') if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid load count list: '{text}'")
    if any(n < 0 for n in sizes):
        raise argparse.ArgumentTypeError("load counts must be nonnegative")
    return sizes


def _vector(text):
    try:
        return [float(s) for s in text.split(',')]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid vector: '{text}'")


def _single_n(args):
    if args.N is None:
        return 1
    if len(args.N) != 1:
        raise UsageError(f"'{args.command}' takes a single -N value")
    return args.N[0]


def _build_model(args, **kwargs):
    return get_model(args.model, N=_single_n(args), config=args.config,
                     swap_roles=args.swap_roles, **kwargs)


def _reference_jacobian(model, args) -> CsrMatrix:
    """
    Jacobian of one AD pass at the model's reference point: Lorenz at its
    fixed reference state and parameters, DAE models at a seeded random state
    with the BDF1 seeding for step --h.
    """
    if model.name == 'lorenz':
        # Which triple is variable is decided here, at run time.
        x, p = model.ad_arguments()
        f = [0.0] * 3
        lorenz_residual(f, x, p)
        return assemble_csr(f, 3)

    n = model.dimension
    if hasattr(model, 'random_state'):
        v = model.random_state(np.random.default_rng(args.seed))
    else:
        v = model.initial_state() or [0.0] * n
    h = args.h if args.h is not None else DEFAULT_STEP[model.name]
    if not h > 0.0:
        raise UsageError(f"Step size h must be positive, got {h}")
    return evaluate_dae(model, [0.0] * n, v, 0.0, 1.0 / h)


def _write_matrix(obj, args):
    kind, path = utils.parse_output(args.out)
    if kind == 'mm':
        write_matrix_market(obj, path, comment=f"{args.model} {args.command}")
        print(f"{args.command}: {obj.n_rows}x{obj.n_cols}, {obj.nnz} structural nonzeros -> {path}")
        return
    with utils.open_output(path) as out:
        out.write(print_matlab(obj) + "\n")


####################################################
# Commands

def cmd_pattern(args):
    """ Print the sparsity pattern in Matlab syntax (or write MatrixMarket). """
    model = _build_model(args)
    pattern = _reference_jacobian(model, args).pattern()
    log.info(f"Pattern of '{model.name}': {pattern.n_rows}x{pattern.n_cols}, nnz {pattern.nnz} "
             f"({100.0 * pattern.density:.2f}%)")
    _write_matrix(pattern, args)
    return utils.EXIT_OK


def cmd_jacobian(args):
    """ Print the Jacobian in Matlab syntax (or write MatrixMarket). """
    model = _build_model(args)
    _write_matrix(_reference_jacobian(model, args), args)
    return utils.EXIT_OK


def cmd_solve(args):
    """ Newton solve of the Lorenz steady state, or consistent initialization of a DAE. """
    if args.model == 'lorenz':
        model = _build_model(args, params=STANDARD_PARAMS)
        x0 = args.x0 or (model.unknowns() if args.swap_roles else LORENZ_START)
        if len(x0) != model.dimension:
            raise UsageError(f"--x0 needs {model.dimension} values")
        cfg = NewtonConfig(abs_tol=args.tol, max_iter=args.max_iter, damping=args.damping)
        x, stats = newton_solve(model, x0, cfg)
        print(", ".join(f"{n} = {v!r}" for n, v in zip(model.variable_names(), x)))
        print(f"iterations = {stats.iterations}, evaluations = {stats.evaluations}, "
              f"residual norm = {stats.residual_norm:.3e}")
        return utils.EXIT_OK

    model = _build_model(args)
    v = consistent_init(model, args.x0)
    norm = max(abs(r) for r in evaluate_dae_values(model, [0.0] * model.dimension, v, 0.0))
    kind, path = utils.parse_output(args.out)
    if kind == 'mm':
        raise UsageError("solve writes text; use --out PATH")
    with utils.open_output(path) as out:
        for name, value in zip(model.variable_names(), v):
            out.write(f"{name} = {value!r}\n")
    print(f"consistent initial state: residual norm = {norm:.3e}")
    return utils.EXIT_OK


def cmd_simulate(args):
    """ BDF1 simulation with a CSV trajectory and a summary line. """
    if args.model not in DAE_MODELS:
        raise UsageError(f"'{args.model}' is not a DAE model (choose from {', '.join(DAE_MODELS)})")
    kind, path = utils.parse_output(args.out)
    if kind == 'mm':
        raise UsageError("simulate writes CSV; use --out PATH")
    model = _build_model(args)
    h = args.h if args.h is not None else DEFAULT_STEP[model.name]
    t_end = args.t_end if args.t_end is not None else DEFAULT_T_END[model.name]
    try:
        cfg = DaeConfig(h=h, t_end=t_end)
    except ValueError as err:
        raise UsageError(str(err))

    v0 = model.initial_state()
    if v0 is None:
        v0 = consistent_init(model)
    trajectory = dae_integrate(model, v0, cfg)
    processor = TrajectoryProcessor()

    if model.name == 'microgrid':
        phase, neutral = (trajectory.names[i] for i in model.load_voltage_signal(0, 'a'))
        signals = [phase, neutral, 'v_ga', 'v_p', 'v_n', 'i_L']
    else:
        signals = list(trajectory.names)
    if path is not None:
        processor.save_trajectory_as_csv(trajectory, path, signals)

    print(f"steps = {trajectory.n_steps}, newton iterations = {trajectory.newton_iterations}, "
          f"evaluations = {trajectory.evaluations}")
    if model.name == 'microgrid':
        summary = processor.summarize(trajectory, phase, neutral)
        print(f"load 0 phase a: amplitude = {summary.amplitude:.6g} V, "
              f"frequency = {summary.frequency:.6g} Hz over [{summary.t_start:g}, {summary.t_end:g}] s")
    else:
        final = ", ".join(f"{n} = {float(v)!r}" for n, v in zip(trajectory.names, trajectory.final))
        print(f"t = {trajectory.t[-1]:g}: {final}")
    return utils.EXIT_OK


def _model_factory(args):
    if args.model not in DAE_MODELS:
        raise UsageError(f"Benchmarks need a DAE model (choose from {', '.join(DAE_MODELS)})")
    return lambda N: get_model(args.model, N=N, config=args.config)


def _emit_bench(records, notes, args, fit=None):
    kind, path = utils.parse_output(args.out)
    if kind == 'mm':
        raise UsageError("benchmarks write CSV; use --out PATH")
    with utils.open_output(path) as out:
        bench.write_csv(records, out)
    if path is None:
        # stdout is the CSV
        for note in notes:
            utils.errPrint(note)
        return
    with utils.open_output(path + ".gp") as out:
        out.write(bench.gnuplot_script(path, fit))
    for note in notes:
        print(note)


def cmd_bench_scaling(args):
    """ Per-call evaluation time against N, with a linear fit. """
    records = bench.bench_scaling(_model_factory(args), args.N or [], args.reps, args.seed)
    fit = bench.linear_fit(records)
    if fit is None:
        notes = ["fit skipped: fewer than two sizes"]
    else:
        notes = [f"fit per_call_us = {fit.slope:.6g} * dim + {fit.intercept:.6g}, "
                 f"R^2 = {fit.r_squared:.4f}"]
    for N, ratio in bench.doubling_ratios(records).items():
        notes.append(f"time(N={2 * N}) / time(N={N}) = {ratio:.3f}")
    _emit_bench(records, notes, args, fit)
    return utils.EXIT_OK


def cmd_bench_dense(args):
    """ Sparse against dense-gradient evaluation time. """
    records = bench.bench_dense(_model_factory(args), args.N or [], args.reps, args.seed)
    notes = [f"dense/sparse at N={N}: {ratio:.3f}"
             for N, ratio in bench.dense_sparse_ratios(records).items()]
    _emit_bench(records, notes, args)
    return utils.EXIT_OK


COMMANDS = {
    'pattern': cmd_pattern,
    'jacobian': cmd_jacobian,
    'solve': cmd_solve,
    'simulate': cmd_simulate,
    'bench-scaling': cmd_bench_scaling,
    'bench-dense': cmd_bench_dense,
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--model', default=None, help=f"Model name ({', '.join(MODELS)}).")
    common.add_argument('-N', type=_size_list, default=None,
                        help="Load count, or a comma separated list for the benchmarks.")
    common.add_argument('--h', type=float, default=None, help="Integrator step size (s).")
    common.add_argument('--t-end', type=float, default=None, help="Simulation end time (s).")
    common.add_argument('--seed', type=int, default=0, help="Seed of the random states.")
    common.add_argument('--swap-roles', action='store_true',
                        help="Lorenz: make (sigma, rho, beta) the unknowns.")
    common.add_argument('--out', metavar="PATH|mm:PATH", default=None,
                        help="Output file; mm:PATH writes MatrixMarket.")
    common.add_argument('--reps', type=int, default=30, help="Benchmark repetitions.")
    common.add_argument('--config', metavar="FILE", default=None,
                        help="key=value file overriding model parameters.")
    common.add_argument('--x0', type=_vector, default=None, help="Start vector for solve.")
    common.add_argument('--tol', type=float, default=1e-10, help="Newton residual tolerance.")
    common.add_argument('--max-iter', type=int, default=50, help="Newton iteration cap.")
    common.add_argument('--damping', type=float, default=1.0, help="Newton damping in (0, 1].")

    argparser = argparse.ArgumentParser(
        prog="sad",
        description="Sparse automatic differentiation: patterns, Jacobians, solves, "
                    "simulations and benchmarks.",
    )
    sub = argparser.add_subparsers(dest='command', metavar="COMMAND", required=True)
    for name, func in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=func.__doc__.strip())
        p.set_defaults(func=func)
    return argparser


def main(argv=None):
    """ Run the CLI and return the exit code. """
    utils.setup_logging()
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as err:
        return err.code if isinstance(err.code, int) else utils.EXIT_USAGE

    if args.model is None:
        args.model = DEFAULT_MODEL[args.command]
    try:
        if args.model not in MODELS:
            raise UsageError(f"Unknown model '{args.model}' (available: {', '.join(MODELS)})")
        return args.func(args)
    except (UsageError, ConfigError, BenchmarkError) as err:
        utils.errPrint(f"sad {args.command}: {err}")
        return utils.EXIT_USAGE
    except SadError as err:
        utils.errPrint(f"sad {args.command}: {err}")
        return utils.EXIT_NUMERICAL
    except ValueError as err:
        utils.errPrint(f"sad {args.command}: {err}")
        return utils.EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
