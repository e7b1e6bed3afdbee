"""
Sparse AD Library: dense-gradient scalar used as the benchmark baseline.

`DenseADScalar` stores the derivative as a numpy vector of the full system
dimension, so every elementary operation costs O(n) no matter how few
variables the value actually depends on. Only the sparse-vs-dense benchmark
uses it.
 """

__all__ = ['DenseADScalar', 'register_dense_variables']

import math

import numpy as np

from sparse_ad_library.ad_scalar import _is_real, _power_slope
from sparse_ad_library.errors import AdDomainError


class DenseADScalar:
    """
    Value plus dense gradient.

    ### Parameters:

        **value**: float

        **grad**: numpy.ndarray
            Gradient of length n (the system dimension). Not copied; instances
            never modify a gradient in place.
    """

    __slots__ = ("value", "grad")

    __hash__ = None

    __array_ufunc__ = None

    def __init__(self, value, grad):
        self.value = float(value)
        self.grad = grad

    @classmethod
    def variable(cls, value, index, n):
        grad = np.zeros(n)
        grad[index] = 1.0
        return cls(value, grad)

    @classmethod
    def constant(cls, value, n):
        return cls(value, np.zeros(n))

    @property
    def n(self):
        return self.grad.shape[0]

    def with_chain_rule(self, value, der):
        """ Result of a unary function with value `value` and derivative `der`. """
        if math.isinf(der):
            # Entries the value does not depend on stay zero.
            grad = np.zeros_like(self.grad)
            np.multiply(self.grad, der, out=grad, where=self.grad != 0.0)
            return DenseADScalar(value, grad)
        return DenseADScalar(value, self.grad * der)

    def _check(self, other):
        if other.grad.shape != self.grad.shape:
            raise ValueError(f"Gradient length mismatch: {self.grad.shape[0]} "
                             f"vs {other.grad.shape[0]}")

    def __neg__(self):
        return DenseADScalar(-self.value, -self.grad)

    def __pos__(self):
        return DenseADScalar(self.value, self.grad.copy())

    def __abs__(self):
        from sparse_ad_library.math_functions import apply_unary
        return apply_unary('abs', self)

    def __add__(self, other):
        if isinstance(other, DenseADScalar):
            self._check(other)
            return DenseADScalar(self.value + other.value, self.grad + other.grad)
        if _is_real(other):
            return DenseADScalar(self.value + other, self.grad)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, DenseADScalar):
            self._check(other)
            return DenseADScalar(self.value - other.value, self.grad - other.grad)
        if _is_real(other):
            return DenseADScalar(self.value - other, self.grad)
        return NotImplemented

    def __rsub__(self, other):
        if _is_real(other):
            return DenseADScalar(other - self.value, -self.grad)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, DenseADScalar):
            self._check(other)
            return DenseADScalar(self.value * other.value,
                                 self.grad * other.value + other.grad * self.value)
        if _is_real(other):
            return DenseADScalar(self.value * other, self.grad * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, DenseADScalar):
            self._check(other)
            if other.value == 0.0:
                raise AdDomainError('/', other.value, "division by a scalar with zero value")
            inv = 1.0 / other.value
            u = self.value * inv
            return DenseADScalar(u, (self.grad - other.grad * u) * inv)
        if _is_real(other):
            if other == 0:
                raise AdDomainError('/', other, "division by zero")
            return DenseADScalar(self.value / other, self.grad / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_real(other):
            if self.value == 0.0:
                raise AdDomainError('/', self.value, "division by a scalar with zero value")
            u = other / self.value
            return DenseADScalar(u, self.grad * (-u / self.value))
        return NotImplemented

    def __pow__(self, other):
        if not _is_real(other):
            return NotImplemented
        x = self.value
        if x == 0.0 and other < 0:
            raise AdDomainError('**', x, "zero raised to a negative power")
        if x < 0.0 and float(other) != int(other):
            raise AdDomainError('**', x, "negative base with non-integer exponent")
        if other == 0:
            return DenseADScalar(1.0, self.grad * 0.0)
        return self.with_chain_rule(x ** other, _power_slope(x, other))

    def __eq__(self, other):
        if isinstance(other, DenseADScalar):
            return self.value == other.value
        if _is_real(other):
            return self.value == other
        return NotImplemented

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    def __lt__(self, other):
        return self.value < (other.value if isinstance(other, DenseADScalar) else other)

    def __gt__(self, other):
        return self.value > (other.value if isinstance(other, DenseADScalar) else other)

    def __le__(self, other):
        return self.value <= (other.value if isinstance(other, DenseADScalar) else other)

    def __ge__(self, other):
        return self.value >= (other.value if isinstance(other, DenseADScalar) else other)

    def __repr__(self):
        nonzero = np.flatnonzero(self.grad)
        return f"<DenseADScalar value={self.value!r} n={self.n} nonzeros={nonzero.tolist()}>"


def register_dense_variables(values, n=None, offset=0):
    """ Dense counterpart of `ad_scalar.register_variables()`. """
    values = list(values)
    n = len(values) + offset if n is None else n
    return [DenseADScalar.variable(v, offset + i, n) for i, v in enumerate(values)]
