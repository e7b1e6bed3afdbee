"""
Benchmark harness: cost of one residual + Jacobian evaluation versus system
size, for the sparse `ADScalar` and for the dense-gradient `DenseADScalar`.

Every measurement evaluates the model at one fixed random state (seeded) with
the BDF1 seeding used by the integrator. Times are medians over the
repetitions after one warm-up call.
 """

__version__ = "0.1.0"
__status__ = "Development"

__all__ = ['BenchRecord', 'CSV_HEADER', 'DENSE_DIMENSION_CAP', 'evaluate_dense_dae',
           'time_evaluation', 'bench_scaling', 'bench_dense', 'linear_fit', 'doubling_ratios',
           'dense_sparse_ratios', 'write_csv', 'gnuplot_script']

import logging
import timeit
from dataclasses import dataclass

import numpy as np
import scipy.stats

from sparse_ad_library.dae_integrator import evaluate_dae
from sparse_ad_library.dense_scalar import DenseADScalar, register_dense_variables
from sparse_ad_library.errors import BenchmarkError

# Init the logger.
log = logging.getLogger(__name__)

CSV_HEADER = "model,N,dim,mode,calls,total_eval_s,per_call_us"

# Dense gradients take dim**2 floats per evaluation.
DENSE_DIMENSION_CAP = 20000

# Step size whose reciprocal seeds the time derivatives.
BENCH_STEP = 1e-5


@dataclass(frozen=True)
class BenchRecord:
    """
    One timing result. `total_eval_s` is the median call time multiplied by
    the number of timed calls.
    """
    model: str
    N: int
    dim: int
    mode: str
    calls: int
    total_eval_s: float

    @property
    def per_call_us(self):
        return self.total_eval_s * 1e6 / self.calls

    def as_csv(self):
        return (f"{self.model},{self.N},{self.dim},{self.mode},{self.calls},"
                f"{self.total_eval_s:.9g},{self.per_call_us:.6g}")


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    r_squared: float


def evaluate_dense_dae(model, vdot, v, t, alpha):
    """
    Dense counterpart of `dae_integrator.evaluate_dae`: returns the residual
    values and alpha * dF/dvdot + dF/dv as numpy arrays.
    """
    n = model.dimension
    vdot_ad = []
    for i in range(n):
        grad = np.zeros(n)
        grad[i] = alpha
        vdot_ad.append(DenseADScalar(vdot[i], grad))
    F = [0.0] * n
    model.residual(F, vdot_ad, register_dense_variables(v, n), t)
    values = np.array([f.value if isinstance(f, DenseADScalar) else float(f) for f in F])
    jac = np.array([f.grad if isinstance(f, DenseADScalar) else np.zeros(n) for f in F])
    return values, jac


def _state(model, rng):
    if hasattr(model, 'random_state'):
        return model.random_state(rng)
    return rng.uniform(-1.0, 1.0, model.dimension).tolist()


def time_evaluation(model, v, mode, reps, t=0.0, alpha=1.0 / BENCH_STEP):
    """
    Median wall time (s) of one evaluation in `mode` ('sparse' or 'dense').
    One untimed warm-up call precedes the `reps` timed calls; `timeit.Timer`
    keeps the cyclic garbage collector off while timing.
    """
    vdot = [0.0] * model.dimension
    if mode == 'sparse':
        call = lambda: evaluate_dae(model, vdot, v, t, alpha)
    elif mode == 'dense':
        call = lambda: evaluate_dense_dae(model, vdot, v, t, alpha)
    else:
        raise ValueError(f"Unknown benchmark mode '{mode}'")

    call()
    times = timeit.Timer(call).repeat(repeat=reps, number=1)
    return float(np.median(times))


def _check_request(sizes, reps):
    if not sizes:
        raise BenchmarkError("Benchmark needs at least one N")
    if reps < 1:
        raise BenchmarkError(f"Repetitions must be at least 1, got {reps}")
    if reps == 1:
        log.warning("Only one repetition per size: timings will be noisy")


def bench_scaling(model_factory, sizes, reps=30, seed=0, mode='sparse'):
    """
    Time evaluations for every N in `sizes`.

    ### Parameters:

        **model_factory**: callable
            model_factory(N) -> DaeModel

        **sizes**: sequence of int

        **reps**: int

        **seed**: int
            Seed of the random evaluation states.

    ### Returns:

        list of BenchRecord, in the order of `sizes`.
    """
    _check_request(sizes, reps)
    records = []
    for N in sizes:
        model = model_factory(N)
        v = _state(model, np.random.default_rng(seed))
        log.info(f"Timing {mode} evaluation of '{model.name}' with N = {N} (dimension {model.dimension})")
        median = time_evaluation(model, v, mode, reps)
        records.append(BenchRecord(model.name, N, model.dimension, mode, reps, median * reps))
    return records


def bench_dense(model_factory, sizes, reps=30, seed=0):
    """
    Paired sparse and dense timings for every N.

    ### Raises:

        **BenchmarkError** if a dimension exceeds `DENSE_DIMENSION_CAP`.
    """
    _check_request(sizes, reps)
    for N in sizes:
        dim = model_factory(N).dimension
        if dim > DENSE_DIMENSION_CAP:
            raise BenchmarkError(f"Dense mode is capped at dimension {DENSE_DIMENSION_CAP}; "
                                 f"N = {N} gives {dim}")
    records = []
    for N in sizes:
        records.extend(bench_scaling(model_factory, [N], reps, seed, 'sparse'))
        records.extend(bench_scaling(model_factory, [N], reps, seed, 'dense'))
    return records


def linear_fit(records):
    """
    Least-squares fit of per_call_us against dim, or None with fewer than two
    distinct sizes.
    """
    dims = [r.dim for r in records]
    if len(set(dims)) < 2:
        log.warning("Fewer than two sizes: linear fit skipped")
        return None
    res = scipy.stats.linregress(dims, [r.per_call_us for r in records])
    return LinearFit(res.slope, res.intercept, res.rvalue ** 2)


def doubling_ratios(records):
    """ {N: time(2N) / time(N)} for every N whose double was also measured. """
    by_n = {r.N: r.per_call_us for r in records}
    return {N: by_n[2 * N] / t for N, t in sorted(by_n.items()) if 2 * N in by_n and t > 0.0}


def dense_sparse_ratios(records):
    """ {N: dense per-call time / sparse per-call time}. """
    sparse = {r.N: r.per_call_us for r in records if r.mode == 'sparse'}
    dense = {r.N: r.per_call_us for r in records if r.mode == 'dense'}
    return {N: dense[N] / sparse[N] for N in sorted(sparse) if N in dense and sparse[N] > 0.0}


def write_csv(records, out):
    """ CSV header and one line per record. """
    out.write(CSV_HEADER + "\n")
    for r in records:
        out.write(r.as_csv() + "\n")


def gnuplot_script(csv_path, fit=None):
    """ gnuplot commands plotting per_call_us against dim from `csv_path`. """
    lines = [
        "set datafile separator ','",
        "set key autotitle columnhead",
        "set xlabel 'dimension'",
        "set ylabel 'time per call (us)'",
    ]
    plot = f"plot '{csv_path}' using 3:7 with linespoints title 'measured'"
    if fit is not None:
        plot += f", {fit.slope!r}*x + {fit.intercept!r} title 'linear fit'"
    lines.append(plot)
    return "\n".join(lines) + "\n"
