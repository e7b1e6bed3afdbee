"""
Sparse AD Library: Newton solver and finite-difference Jacobian oracle.

Each Newton iteration evaluates the model exactly once with `ADScalar`
unknowns. That single pass yields the residual vector and the sparse Jacobian
(`structure.assemble_csr`), the update comes from a sparse direct solve and is
scaled by the damping factor. Models with exponential devices name the
unknowns whose update is clamped to `max_voltage_step` per iteration.

Workflow:
1) Build a `NewtonConfig` (tolerance, iteration cap, damping),
2) Call `newton_solve(model, x0, cfg)`,
3) Check the returned `NewtonStats`, or catch `ConvergenceError` / `SingularMatrixError`.
 """

__version__ = "0.1.0"
__status__ = "Development"

__all__ = ['NewtonConfig', 'NewtonStats', 'newton_solve', 'newton_iterate',
           'evaluate_jacobian', 'evaluate_values', 'fd_jacobian', 'FD_EPS_SCALE']

import logging
import math
from dataclasses import dataclass

import numpy as np

from sparse_ad_library.ad_scalar import register_variables
from sparse_ad_library.errors import ConvergenceError, DimensionError, SingularMatrixError
from sparse_ad_library.linalg import LINEAR_SOLVERS
from sparse_ad_library.structure import CsrMatrix, assemble_csr

# Init the logger.
log = logging.getLogger(__name__)

# sqrt(machine epsilon): the usual forward-difference step scale.
FD_EPS_SCALE = math.sqrt(np.finfo(float).eps)


@dataclass(frozen=True)
class NewtonConfig:
    """
    ### Parameters:

        **abs_tol**: float
            Converged when the residual infinity norm is at or below this.

        **max_iter**: int
            Maximum number of Newton updates.

        **damping**: float in (0, 1]
            Every update is multiplied by this factor.

        **max_voltage_step**: float
            Per-iteration clamp for the model's limited unknowns.

        **linear_solver**: str
            Key of `linalg.LINEAR_SOLVERS`.
    """
    abs_tol: float = 1e-10
    max_iter: int = 50
    damping: float = 1.0
    max_voltage_step: float = 1.0
    linear_solver: str = 'lu'

    def __post_init__(self):
        if not self.abs_tol > 0.0:
            raise ValueError(f"abs_tol must be positive, got {self.abs_tol}")
        if int(self.max_iter) < 1:
            raise ValueError(f"max_iter must be at least 1, got {self.max_iter}")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError(f"damping must lie in (0, 1], got {self.damping}")
        if not self.max_voltage_step > 0.0:
            raise ValueError(f"max_voltage_step must be positive, got {self.max_voltage_step}")
        if self.linear_solver not in LINEAR_SOLVERS:
            raise ValueError(f"Unknown linear solver '{self.linear_solver}' "
                             f"(available: {', '.join(LINEAR_SOLVERS)})")


@dataclass(frozen=True)
class NewtonStats:
    """ Newton updates performed, model evaluations and final residual norm. """
    iterations: int
    evaluations: int
    residual_norm: float


def evaluate_jacobian(model, x) -> CsrMatrix:
    """
    One AD pass of a `ResidualModel` at `x`: Jacobian in CSR form, residual
    values in its `rhs`.
    """
    n = model.dimension
    if len(x) != n:
        raise DimensionError(f"Model '{model.name}' has dimension {n}, got {len(x)} values")
    f = [0.0] * n
    model.residual(f, register_variables(x))
    return assemble_csr(f, n)


def evaluate_values(model, x):
    """ Residual values of a `ResidualModel` evaluated with plain floats. """
    n = model.dimension
    if len(x) != n:
        raise DimensionError(f"Model '{model.name}' has dimension {n}, got {len(x)} values")
    f = [0.0] * n
    model.residual(f, [float(v) for v in x])
    return [float(v) for v in f]


def _residual_norm(values):
    return max((abs(v) for v in values), default=0.0)


def newton_iterate(evaluate, x0, cfg=NewtonConfig(), limited=(), label="newton"):
    """
    Damped Newton iteration on a system given by its evaluation callback.

    ### Parameters:

        **evaluate**: callable
            evaluate(x) -> CsrMatrix with the Jacobian at x and the residual in `rhs`.

        **x0**: sequence of float
            Start vector; not modified.

        **cfg**: NewtonConfig

        **limited**: sequence of int
            Unknowns whose update magnitude is clamped to `cfg.max_voltage_step`.

        **label**: str
            Prefix for log messages.

    ### Returns:

        (x, NewtonStats)

    ### Raises:

        **ConvergenceError** after `cfg.max_iter` updates without convergence or
        on a non-finite residual.

        **SingularMatrixError** naming the iteration whose Jacobian was singular.
    """
    solve = LINEAR_SOLVERS[cfg.linear_solver]
    x = [float(v) for v in x0]
    limit = cfg.max_voltage_step
    evaluations = 0

    for iteration in range(cfg.max_iter + 1):
        jac = evaluate(x)
        evaluations += 1
        norm = _residual_norm(jac.rhs)
        log.debug(f"{label}: iteration {iteration}, residual norm {norm:.6e}")

        if not math.isfinite(norm):
            raise ConvergenceError(x, norm, iteration,
                                   f"{label}: residual is not finite after {iteration} iterations")
        if norm <= cfg.abs_tol:
            return x, NewtonStats(iteration, evaluations, norm)
        if iteration == cfg.max_iter:
            break

        try:
            dx = solve(jac, [-r for r in jac.rhs])
        except SingularMatrixError as err:
            raise SingularMatrixError(err.step, f"{label}: singular Jacobian at Newton iteration "
                                                f"{iteration} (pivot step {err.step})") from err

        damping = cfg.damping
        for i in range(len(x)):
            x[i] += damping * dx[i]
        for i in limited:
            step = damping * dx[i]
            if step > limit:
                x[i] += limit - step
            elif step < -limit:
                x[i] += -limit - step

    raise ConvergenceError(x, norm, cfg.max_iter)


def newton_solve(model, x0, cfg=NewtonConfig(), limited=None):
    """
    Solve the `ResidualModel` equations f(x) = 0 from `x0`.

    ### Parameters:

        **model**: ResidualModel

        **x0**: sequence of float

        **cfg**: NewtonConfig

        **limited**: sequence of int, optional
            Clamped unknowns; defaults to `model.limited_indices()` when the
            model has one.

    ### Returns:

        (x, NewtonStats) with max |f(x)| <= cfg.abs_tol.
    """
    if len(x0) != model.dimension:
        raise DimensionError(f"Model '{model.name}' has dimension {model.dimension}, "
                             f"got {len(x0)} start values")
    if limited is None:
        limited = model.limited_indices() if hasattr(model, 'limited_indices') else ()
    x, stats = newton_iterate(lambda v: evaluate_jacobian(model, v), x0, cfg, limited,
                              label=model.name or "newton")
    log.debug(f"{model.name}: converged in {stats.iterations} iterations, "
              f"residual norm {stats.residual_norm:.3e}")
    return x, stats


def fd_jacobian(model, x, eps_scale=FD_EPS_SCALE, central=False):
    """
    Finite-difference Jacobian of a `ResidualModel`, the verification oracle
    for the AD Jacobians.

    Column j uses the step eps_j = eps_scale * max(1, |x_j|); forward
    differences by default, central differences with `central=True`.

    ### Returns:

        numpy.ndarray of shape (n, n)
    """
    if not eps_scale > 0.0:
        raise ValueError(f"eps_scale must be positive, got {eps_scale}")
    x = np.asarray(x, dtype=float)
    n = model.dimension
    if x.shape != (n,):
        raise DimensionError(f"Model '{model.name}' has dimension {n}, got {x.shape[0]} values")

    jac = np.zeros((n, n))
    f0 = None if central else np.asarray(evaluate_values(model, x))
    for j in range(n):
        eps = eps_scale * max(1.0, abs(x[j]))
        xp = x.copy()
        xp[j] += eps
        fp = np.asarray(evaluate_values(model, xp))
        if central:
            xm = x.copy()
            xm[j] -= eps
            jac[:, j] = (fp - np.asarray(evaluate_values(model, xm))) / (2.0 * eps)
        else:
            jac[:, j] = (fp - f0) / eps
    return jac
