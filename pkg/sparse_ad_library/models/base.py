"""
Residual model abstractions.

Models write their equations once, with ordinary arithmetic and the functions
of `sparse_ad_library.math_functions`, and are evaluated with plain floats,
`ADScalar` or `DenseADScalar` arguments without change. Which arguments are
unknowns and which are constants is decided by the caller at run time.
"""

__all__ = ['ResidualModel', 'DaeModel']

from abc import ABC, abstractmethod


class ResidualModel(ABC):
    """ Algebraic system f(x; p) = 0. """

    name = None

    @property
    @abstractmethod
    def dimension(self):
        """ Number of equations (= number of unknowns). """

    @abstractmethod
    def residual(self, f, x):
        """
        Fill the output list `f` (length `dimension`) with the residuals at `x`.

        ### Parameters:

            **f**: list
                Output; entries are overwritten.

            **x**: sequence of scalars
                Unknowns, any supported scalar type.
        """

    def variable_names(self):
        return [f"x{i}" for i in range(self.dimension)]


class DaeModel(ABC):
    """ Differential-algebraic system F(vdot, v, t) = 0. """

    name = None

    @property
    @abstractmethod
    def dimension(self):
        """ Number of equations (= number of unknowns). """

    @abstractmethod
    def residual(self, F, vdot, v, t):
        """ Fill `F` with the residuals for time derivatives `vdot`, state `v` at time `t` (s). """

    def variable_names(self):
        return [f"v{i}" for i in range(self.dimension)]

    def differential_indices(self):
        """ Unknowns whose time derivative enters the residual. """
        return list(range(self.dimension))

    def limited_indices(self):
        """
        Unknowns whose Newton update is clamped (node voltages next to
        exponential devices). Empty for models without such devices.
        """
        return []

    def initial_state(self):
        """
        Initial values for simulation, or None when they are to be found with
        `dae_integrator.consistent_init()` from a zero guess.
        """
        return None
