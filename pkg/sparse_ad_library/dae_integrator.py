"""
Sparse AD Library: fixed-step implicit Euler (BDF1) integration of DAEs
F(vdot, v, t) = 0.

Every step solves F((v - v_k) / h, v, t_k+1) = 0 for v with Newton. The
Newton matrix alpha dF/dvdot + dF/dv (alpha = 1/h) comes from a single
residual evaluation: vdot_i is seeded with the dependency {(i, alpha)} and
v_i with {(i, 1)}, and the derivative rules add the two contributions.

The library also provides `consistent_init()` to find an initial state with
F(0, v, 0) = 0, and `DaeSimulationThread`, a background thread that runs an
integration and reports progress through call-backs.

Workflow:
1) Define on_step_completed, on_simulation_complete and on_simulation_exception
call-backs in the user application (or pass an observer to dae_integrate),
2) Obtain initial values from consistent_init(model, guess),
3) Start a DaeSimulationThread (or call dae_integrate directly),
4) Post-process the returned Trajectory with the TrajectoryProcessor.
 """

__version__ = "0.1.0"
__status__ = "Development"

__all__ = ['DaeConfig', 'Trajectory', 'BdfStepSystem', 'evaluate_dae', 'evaluate_dae_values',
           'dae_integrate', 'consistent_init', 'DaeSimulationThread',
           'STEP_NEWTON_CONFIG', 'INIT_NEWTON_CONFIG']

import logging
import timeit
from dataclasses import dataclass, field
from threading import Thread
from typing import List, Optional

import numpy as np

from sparse_ad_library.ad_scalar import make_seeded, register_variables
from sparse_ad_library.errors import (ConvergenceError, DimensionError, InitializationError,
                                      IntegrationError, SingularMatrixError)
from sparse_ad_library.models.base import ResidualModel
from sparse_ad_library.newton_solver import NewtonConfig, newton_iterate
from sparse_ad_library.structure import CsrMatrix, assemble_csr

# Init the logger.
log = logging.getLogger(__name__)

# Newton settings for one implicit Euler step.
STEP_NEWTON_CONFIG = NewtonConfig(abs_tol=1e-8, max_iter=20, damping=1.0)

# Damped Newton for the initial state.
INIT_NEWTON_CONFIG = NewtonConfig(abs_tol=1e-8, max_iter=200, damping=0.5)


@dataclass(frozen=True)
class DaeConfig:
    """
    ### Parameters:

        **h**: float
            Step size in seconds.

        **t_end**: float
            End time in seconds; the integrator takes round(t_end / h) steps.

        **newton**: NewtonConfig
            Settings of the per-step Newton solve.
    """
    h: float
    t_end: float
    newton: NewtonConfig = STEP_NEWTON_CONFIG

    def __post_init__(self):
        if not self.h > 0.0:
            raise ValueError(f"Step size h must be positive, got {self.h}")
        if not self.t_end >= 0.0:
            raise ValueError(f"t_end must be nonnegative, got {self.t_end}")

    @property
    def alpha(self):
        """ Coefficient of dF/dvdot in the Newton matrix (1/h for BDF1). """
        return 1.0 / self.h

    @property
    def n_steps(self):
        return int(round(self.t_end / self.h))


@dataclass
class Trajectory:
    """
    Integration result.

    ### Parameters:

        **t**: numpy.ndarray, shape (n_steps + 1,)

        **v**: numpy.ndarray, shape (n_steps + 1, dimension)

        **names**: list of str
            Unknown names, one per column of `v`.

        **newton_iterations**: int
            Newton updates summed over all steps.

        **evaluations**: int
            Residual + Jacobian evaluations summed over all steps.

        **completed**: bool
            False if the run was stopped before t_end.
    """
    t: np.ndarray
    v: np.ndarray
    names: List[str] = field(default_factory=list)
    newton_iterations: int = 0
    evaluations: int = 0
    completed: bool = True

    @property
    def n_steps(self):
        return len(self.t) - 1

    @property
    def final(self):
        return self.v[-1]

    def column(self, name):
        """ Time series of the unknown called `name`. """
        try:
            return self.v[:, self.names.index(name)]
        except ValueError:
            raise KeyError(f"No unknown named '{name}' in trajectory")


def evaluate_dae(model, vdot, v, t, alpha) -> CsrMatrix:
    """
    One AD pass of a `DaeModel`. The returned matrix is
    alpha * dF/dvdot + dF/dv; its `rhs` holds F(vdot, v, t).
    """
    n = model.dimension
    if len(v) != n or len(vdot) != n:
        raise DimensionError(f"Model '{model.name}' has dimension {n}, got {len(vdot)} and {len(v)} values")
    vdot_ad = [make_seeded(vdot[i], i, alpha) for i in range(n)]
    F = [0.0] * n
    model.residual(F, vdot_ad, register_variables(v), t)
    return assemble_csr(F, n)


def evaluate_dae_values(model, vdot, v, t):
    """ F(vdot, v, t) with plain floats. """
    n = model.dimension
    F = [0.0] * n
    model.residual(F, [float(x) for x in vdot], [float(x) for x in v], t)
    return [float(x) for x in F]


class BdfStepSystem(ResidualModel):
    """
    The algebraic system solved in one implicit Euler step,
    g(v) = F(alpha (v - v_prev), v, t), as a `ResidualModel`.

    Its Jacobian is the one `evaluate_dae` builds by seeding, so it serves as a
    finite-difference reference for the seeded Jacobian.
    """

    def __init__(self, model, v_prev, t, alpha):
        self.model = model
        self.v_prev = [float(x) for x in v_prev]
        self.t = t
        self.alpha = alpha
        self.name = f"{model.name}-bdf1"

    @property
    def dimension(self):
        return self.model.dimension

    def residual(self, f, x):
        vdot = [(xi - pi) * self.alpha for xi, pi in zip(x, self.v_prev)]
        self.model.residual(f, vdot, x, self.t)

    def limited_indices(self):
        return self.model.limited_indices()

    def variable_names(self):
        return self.model.variable_names()


def dae_integrate(model, v0, cfg, observer=None, should_stop=None) -> Trajectory:
    """
    Integrate `model` from v0 at t = 0 to cfg.t_end with BDF1.

    ### Parameters:

        **model**: DaeModel

        **v0**: sequence of float
            Initial state, ideally from `consistent_init`.

        **cfg**: DaeConfig

        **observer**: callable, optional
            observer(step, t, v, newton_iterations, residual_norm) after every
            step. Exceptions raised by the observer propagate.

        **should_stop**: callable, optional
            Polled before every step; a true result ends the run early with
            `Trajectory.completed` False.

    ### Raises:

        **IntegrationError** with the step index and time when Newton fails.
    """
    n = model.dimension
    if len(v0) != n:
        raise DimensionError(f"Model '{model.name}' has dimension {n}, got {len(v0)} initial values")

    h, alpha, n_steps = cfg.h, cfg.alpha, cfg.n_steps
    limited = model.limited_indices()
    times = [0.0]
    states = [[float(x) for x in v0]]
    total_iterations = 0
    total_evaluations = 0
    completed = True

    log.info(f"Integrating '{model.name}' (dimension {n}) over {n_steps} steps of h = {h:g} s")
    start_time = timeit.default_timer()

    for step in range(1, n_steps + 1):
        if should_stop is not None and should_stop():
            log.info(f"Integration stopped at step {step - 1}")
            completed = False
            break

        t = step * h
        v_prev = states[-1]
        # Linear extrapolation as the Newton start value.
        if len(states) > 1:
            guess = [2.0 * a - b for a, b in zip(v_prev, states[-2])]
        else:
            guess = v_prev

        def evaluate(v, v_prev=v_prev, t=t):
            vdot = [(a - b) * alpha for a, b in zip(v, v_prev)]
            return evaluate_dae(model, vdot, v, t, alpha)

        try:
            v, stats = newton_iterate(evaluate, guess, cfg.newton, limited, label=f"{model.name} step {step}")
        except (ConvergenceError, SingularMatrixError) as err:
            raise IntegrationError(t, step, f"Integration of '{model.name}' failed at step {step} "
                                            f"(t = {t:.6g} s): {err}") from err

        total_iterations += stats.iterations
        total_evaluations += stats.evaluations
        times.append(t)
        states.append(v)
        log.debug(f"step {step}, t = {t:.6g} s, {stats.iterations} Newton iterations, "
                  f"residual norm {stats.residual_norm:.3e}")

        if observer is not None:
            observer(step, t, v, stats.iterations, stats.residual_norm)

    duration = timeit.default_timer() - start_time
    log.info(f"Integrated {len(times) - 1} steps in {duration:.2f} s "
             f"({total_iterations} Newton iterations, {total_evaluations} evaluations)")
    return Trajectory(np.asarray(times), np.asarray(states), model.variable_names(),
                      total_iterations, total_evaluations, completed)


def consistent_init(model, guess=None, cfg=INIT_NEWTON_CONFIG, t0=0.0):
    """
    Initial state with F(0, v, t0) = 0, found by damped Newton from `guess`
    (zeros if omitted). The differential unknowns start at the solved values.

    ### Raises:

        **InitializationError** if Newton fails; try a different guess.
    """
    n = model.dimension
    guess = [0.0] * n if guess is None else [float(x) for x in guess]
    if len(guess) != n:
        raise DimensionError(f"Model '{model.name}' has dimension {n}, got {len(guess)} guess values")
    zeros = [0.0] * n

    def evaluate(v):
        F = [0.0] * n
        model.residual(F, zeros, register_variables(v), t0)
        return assemble_csr(F, n)

    try:
        v, stats = newton_iterate(evaluate, guess, cfg, model.limited_indices(),
                                  label=f"{model.name} init")
    except (ConvergenceError, SingularMatrixError) as err:
        raise InitializationError(f"No consistent initial state for '{model.name}' from the given "
                                  f"guess ({err}); try a different guess") from err
    log.info(f"Consistent initial state for '{model.name}' after {stats.iterations} iterations "
             f"(residual norm {stats.residual_norm:.3e})")
    return v


class DaeSimulationThread(Thread):
    """
    Runs `dae_integrate` in the background and forwards progress to call-backs.

    ### Parameters:

        **name**: str
            Simulation name passed to every call-back.

        **model**: DaeModel

        **v0**: sequence of float

        **cfg**: DaeConfig

        **on_step_completed**: callable
            on_step_completed(name, step, t, v, newton_iterations, residual_norm)

        **on_simulation_complete**: callable
            on_simulation_complete(name, trajectory, duration_s)

        **on_simulation_exception**: callable
            on_simulation_exception(name, error)
    """

    def __init__(
        self,
        name,
        model,
        v0,
        cfg,
        on_step_completed,
        on_simulation_complete,
        on_simulation_exception,
    ):
        Thread.__init__(self, name=f"sad-{name}")

        # Used to trigger graceful exit of this thread
        self._stop_simulation = False

        log.info(f"Initializing simulation '{name}'...")
        self.simulation_name = name
        self.model = model
        self.v0 = list(v0)
        self.cfg = cfg
        self.on_step_completed_callback = on_step_completed
        self.on_simulation_complete_callback = on_simulation_complete
        self.on_simulation_exception = on_simulation_exception
        self.trajectory: Optional[Trajectory] = None

    def stop_thread(self):
        self._stop_simulation = True

    def _observe(self, step, t, v, iterations, norm):
        if self.on_step_completed_callback is not None:
            self.on_step_completed_callback(self.simulation_name, step, t, v, iterations, norm)

    ####################################################
    # Integrate the model and report through the call-backs
    def run(self):
        try:
            start_time = timeit.default_timer()
            self.trajectory = dae_integrate(self.model, self.v0, self.cfg, observer=self._observe,
                                            should_stop=lambda: self._stop_simulation)
            duration = timeit.default_timer() - start_time
            self.on_simulation_complete_callback(self.simulation_name, self.trajectory, duration)

        except Exception as err:
            # Pass any exceptions to exception callback.
            log.error(f"Simulation '{self.simulation_name}' failed: {err}")
            self.on_simulation_exception(self.simulation_name, err)
