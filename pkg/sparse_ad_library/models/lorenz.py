"""
Steady state of the Lorenz system:

    0 = sigma (y - x)
    0 = x (rho - z) - y
    0 = x y - beta z

`lorenz_residual` is written once for any scalar type. `LorenzModel` decides
at run time which triple is unknown: the state (x, y, z) or, with
`swap_roles=True`, the parameters (sigma, rho, beta). Swapping roles changes
the sparsity pattern and the Jacobian without touching the equations.
"""

__all__ = ['LorenzParams', 'LorenzModel', 'lorenz_residual',
           'STANDARD_PARAMS', 'REFERENCE_PARAMS', 'REFERENCE_STATE']

from dataclasses import dataclass, astuple

from sparse_ad_library.ad_scalar import make_parameter, register_variables
from sparse_ad_library.errors import DimensionError
from sparse_ad_library.models.base import ResidualModel


@dataclass(frozen=True)
class LorenzParams:
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0

    def __post_init__(self):
        for name in ('sigma', 'rho', 'beta'):
            object.__setattr__(self, name, float(getattr(self, name)))

    def as_tuple(self):
        return astuple(self)


# Classic chaotic parameter set.
STANDARD_PARAMS = LorenzParams()

# Point used for the pattern/Jacobian dumps: rho and beta deliberately take
# the values 8/3 and 28.
REFERENCE_PARAMS = LorenzParams(sigma=10.0, rho=8.0 / 3.0, beta=28.0)
REFERENCE_STATE = (8.0, 20.0, 2.0 / 3.0)


def lorenz_residual(f, x, p):
    """
    Lorenz steady-state residuals.

    ### Parameters:

        **f**: list of length 3 (output)

        **x**: (x, y, z) scalars

        **p**: (sigma, rho, beta) scalars
    """
    if len(f) != 3 or len(x) != 3 or len(p) != 3:
        raise DimensionError("Lorenz residual needs f, x and p of length 3")
    sigma, rho, beta = p
    f[0] = sigma * (x[1] - x[0])
    f[1] = x[0] * (rho - x[2]) - x[1]
    f[2] = x[0] * x[1] - beta * x[2]


class LorenzModel(ResidualModel):
    """
    Lorenz steady state as a `ResidualModel`.

    ### Parameters:

        **params**: LorenzParams

        **state**: (x, y, z)
            Constant state used when `swap_roles` is set.

        **swap_roles**: bool
            If set, the unknowns are (sigma, rho, beta) and the state is fixed.
    """

    name = "lorenz"

    def __init__(self, params=STANDARD_PARAMS, state=REFERENCE_STATE, swap_roles=False):
        self.params = params
        self.state = tuple(float(v) for v in state)
        self.swap_roles = swap_roles

    @property
    def dimension(self):
        return 3

    def residual(self, f, x):
        if self.swap_roles:
            lorenz_residual(f, self.state, x)
        else:
            lorenz_residual(f, x, self.params.as_tuple())

    def unknowns(self):
        """ Current values of whichever triple is unknown. """
        return list(self.params.as_tuple() if self.swap_roles else self.state)

    def ad_arguments(self, offset=0):
        """
        (x, p) as `ADScalar` lists: the unknown triple registered as variables
        offset..offset+2, the other triple fixed.
        """
        if self.swap_roles:
            return ([make_parameter(v) for v in self.state],
                    register_variables(self.params.as_tuple(), offset))
        return (register_variables(self.state, offset),
                [make_parameter(v) for v in self.params.as_tuple()])

    def variable_names(self):
        return ['sigma', 'rho', 'beta'] if self.swap_roles else ['x', 'y', 'z']
