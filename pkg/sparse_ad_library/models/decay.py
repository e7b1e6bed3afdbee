"""
Scalar test DAEs with closed-form solutions: exponential decay v' + rate v = 0
and, with rate 0, the constant solution v' = 0.
"""

__all__ = ['DecayModel']

import math

from sparse_ad_library.errors import DimensionError
from sparse_ad_library.models.base import DaeModel


class DecayModel(DaeModel):
    """ F(vdot, v, t) = vdot + rate * v for every component. """

    name = "decay"

    def __init__(self, size=1, rate=1.0):
        if size < 1:
            raise ValueError(f"Decay model needs at least one unknown, got {size}")
        self.size = int(size)
        self.rate = float(rate)

    @property
    def dimension(self):
        return self.size

    def residual(self, F, vdot, v, t):
        if len(F) != self.size or len(v) != self.size or len(vdot) != self.size:
            raise DimensionError(f"Decay model needs vectors of length {self.size}")
        for i in range(self.size):
            F[i] = vdot[i] + self.rate * v[i]

    def exact(self, v0, t):
        """ Analytic solution v0 exp(-rate t) (component-wise). """
        return [x * math.exp(-self.rate * t) for x in v0]

    def initial_state(self):
        return [1.0] * self.size
