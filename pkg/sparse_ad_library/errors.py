"""
Exceptions raised by the Sparse AD Library.

Every exception derives from `SadError` and from the built-in exception that
best describes it, so callers can catch either `SadError` or e.g. `ValueError`.
"""

__all__ = ['SadError', 'AdDomainError', 'PatternIndexError', 'DimensionError',
           'SingularMatrixError', 'ConvergenceError', 'IntegrationError',
           'InitializationError', 'ConfigError', 'BenchmarkError']


class SadError(Exception):
    """ Base class for all library errors. """


class AdDomainError(SadError, ValueError):
    """ An elementary operation was evaluated outside its domain
        (division by zero, log of a negative number, ...).

        @ivar operation: Name of the failing operation, e.g. ``'log'``.
        @ivar value: The offending argument value.
    """

    def __init__(self, operation, value, message=None):
        self.operation = operation
        self.value = value
        if message is None:
            message = f"{operation}: argument {value!r} outside domain"
        super().__init__(message)


class PatternIndexError(SadError, IndexError):
    """ A dependency key does not fit into the requested column count. """

    def __init__(self, row, key, n_cols):
        self.row = row
        self.key = key
        self.n_cols = n_cols
        super().__init__(f"Row {row} depends on variable {key} but the system "
                         f"has only {n_cols} columns")


class DimensionError(SadError, ValueError):
    """ Vector or matrix sizes do not agree. """


class SingularMatrixError(SadError, ArithmeticError):
    """ LU factorization hit a zero (or negligible) pivot.

        @ivar step: Elimination step (column) at which no usable pivot exists.
    """

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"Matrix is singular at pivot step {step}")


class ConvergenceError(SadError, ArithmeticError):
    """ Newton iteration did not reach the requested tolerance.

        @ivar x: Last iterate.
        @ivar norm: Residual infinity norm at the last iterate.
        @ivar iterations: Number of Newton updates performed.
    """

    def __init__(self, x, norm, iterations, message=None):
        self.x = x
        self.norm = norm
        self.iterations = iterations
        super().__init__(message or f"Newton did not converge after {iterations} "
                                    f"iterations (residual norm {norm:.3e})")


class IntegrationError(SadError, RuntimeError):
    """ The integrator could not complete a step.

        @ivar t: Target time of the failed step.
        @ivar step: Index of the failed step.
    """

    def __init__(self, t, step, message=None):
        self.t = t
        self.step = step
        super().__init__(message or f"Integration failed at step {step} (t = {t:.6g} s)")


class InitializationError(SadError, RuntimeError):
    """ Consistent initial conditions could not be found. """


class ConfigError(SadError, ValueError):
    """ A configuration file or override is invalid. """


class BenchmarkError(SadError, ValueError):
    """ Invalid benchmark request (empty size list, dense cap exceeded). """
