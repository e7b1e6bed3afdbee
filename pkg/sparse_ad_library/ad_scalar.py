"""
Sparse AD Library: the abstract scalar type.

`ADScalar` carries a value together with a sparse map from independent
variable index to partial derivative. Evaluating a residual function written
with ordinary arithmetic on `ADScalar` arguments therefore yields, in one
pass, the residual values, the structural sparsity pattern (the keys of each
map) and the Jacobian entries (the values of each map).

The map is a plain dict internally; `ADScalar.deps` hands out a copy ordered
by ascending variable index, which is the order CSR assembly relies on.

Workflow:
1) Register the unknowns with `make_variable()` / `register_variables()`,
2) Wrap constant parameters with `make_parameter()`,
3) Evaluate the residual function with these scalars,
4) Hand the residual list to `structure.assemble_csr()` or `structure.extract_pattern()`.
 """

__version__ = "0.1.0"
__status__ = "Development"

__all__ = ['ADScalar', 'make_variable', 'make_seeded', 'make_parameter', 'register_variables',
           'sum_scalars', 'values_of']

import math
import numbers

from sparse_ad_library.errors import AdDomainError

_object_new = object.__new__


def _new(value, deps):
    """ Build a temporary (unregistered, not fixed) scalar without copying `deps`. """
    res = _object_new(ADScalar)
    res._value = value
    res._var_id = None
    res._fixed = False
    res._deps = deps
    return res


def _is_real(x):
    return isinstance(x, numbers.Real) and not isinstance(x, bool)


def _power_slope(x, p):
    """ d/dx x**p for a real exponent p > 0; infinite at x == 0 when p < 1. """
    if x == 0.0 and p < 1:
        return math.inf
    return p * x ** (p - 1)


class ADScalar:
    """
    Value plus sparse dependency map (variable index -> partial derivative).

    ### Parameters:

        **value**: float
            Initial value. Construction from a real is explicit; arithmetic never
            promotes a real to an `ADScalar` behind the caller's back.

        **var_id**: int, optional
            Register the scalar as independent variable `var_id` (derivative seed 1.0).
    """

    __slots__ = ("_value", "_var_id", "_fixed", "_deps")

    # Unhashable: equality compares values only.
    __hash__ = None

    # numpy scalars on the left defer to the reflected operators.
    __array_ufunc__ = None

    def __init__(self, value=0.0, var_id=None):
        self._value = float(value)
        self._var_id = None
        self._fixed = False
        self._deps = {}
        if var_id is not None:
            self.set_variable_number(var_id)

    ####################################################
    # State accessors

    @property
    def value(self):
        return self._value

    @value.setter
    def value(self, value):
        self._value = float(value)

    @property
    def var_id(self):
        """ Variable number, or `None` for parameters and temporaries. """
        return self._var_id

    @property
    def fixed(self):
        return self._fixed

    @property
    def deps(self):
        """ Copy of the dependency map, ordered by ascending variable index. """
        return dict(sorted(self._deps.items()))

    def is_registered(self):
        return self._var_id is not None

    def der(self, i):
        """ Partial derivative with respect to variable `i` (0.0 if not a dependency). """
        return self._deps.get(i, 0.0)

    def set_variable_number(self, var_id):
        """
        Register as independent variable `var_id`. Any previous dependencies are
        cleared first and the scalar stops being fixed.
        """
        if var_id is None or int(var_id) < 0:
            raise ValueError(f"Variable number must be a nonnegative index, got {var_id!r}")
        self._deps.clear()
        self._var_id = int(var_id)
        self._fixed = False
        self._deps[self._var_id] = 1.0

    def set_fixed(self, fixed=True):
        """
        Turn the scalar into a constant parameter (`fixed=True`), or back.
        Fixing clears the dependencies. Unfixing does not restore the seed of a
        registered variable; call `set_variable_number()` again for that.
        """
        self._fixed = bool(fixed)
        if self._fixed:
            self._deps.clear()

    ####################################################
    # In-place dependency manipulation

    def scale_dependencies(self, c):
        """ Multiply every partial derivative by `c`. Keys are kept, even for c == 0. """
        deps = self._deps
        for k in deps:
            deps[k] *= c
        return self

    def add_dependencies(self, other):
        """
        Copy all dependencies of `other` into this scalar; on a shared key the
        derivative from `other` wins. A fixed scalar stays without dependencies.
        """
        if self._fixed or other is self:
            return self
        self._deps.update(other._deps)
        return self

    def assign(self, source):
        """
        Assignment with the prototype's semantics. From a real: the value is set
        and dependencies are removed, the fixed flag is kept. From an `ADScalar`:
        value, fixed flag and dependencies are copied, the variable number of
        the target is left alone.
        """
        if source is self:
            return self
        if isinstance(source, ADScalar):
            self._value = source._value
            self._fixed = source._fixed
            self._deps.clear()
            self._deps.update(source._deps)
        elif _is_real(source):
            self._value = float(source)
            self._deps.clear()
        else:
            raise TypeError(f"Cannot assign {type(source).__name__} to ADScalar")
        return self

    def copy(self):
        """ Copy value and dependencies only; the copy is an unregistered temporary. """
        return _new(self._value, dict(self._deps))

    __copy__ = copy

    ####################################################
    # Arithmetic

    def __neg__(self):
        return _new(-self._value, {k: -d for k, d in self._deps.items()})

    def __pos__(self):
        return self.copy()

    def __abs__(self):
        from sparse_ad_library.math_functions import apply_unary
        return apply_unary('abs', self)

    def __add__(self, other):
        if isinstance(other, ADScalar):
            deps = dict(self._deps)
            get = deps.get
            for k, d in other._deps.items():
                deps[k] = get(k, 0.0) + d
            return _new(self._value + other._value, deps)
        if _is_real(other):
            return _new(self._value + other, dict(self._deps))
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ADScalar):
            deps = dict(self._deps)
            get = deps.get
            for k, d in other._deps.items():
                deps[k] = get(k, 0.0) - d
            return _new(self._value - other._value, deps)
        if _is_real(other):
            return _new(self._value - other, dict(self._deps))
        return NotImplemented

    def __rsub__(self, other):
        if _is_real(other):
            return _new(other - self._value, {k: -d for k, d in self._deps.items()})
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, ADScalar):
            u = self._value
            v = other._value
            deps = {k: d * v for k, d in self._deps.items()}
            get = deps.get
            for k, d in other._deps.items():
                deps[k] = get(k, 0.0) + d * u
            return _new(u * v, deps)
        if _is_real(other):
            return _new(self._value * other, {k: d * other for k, d in self._deps.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, ADScalar):
            v = other._value
            if v == 0.0:
                raise AdDomainError('/', v, "division by an ADScalar with zero value")
            inv = 1.0 / v
            u = self._value * inv
            deps = {k: d * inv for k, d in self._deps.items()}
            get = deps.get
            for k, d in other._deps.items():
                deps[k] = get(k, 0.0) - d * u * inv
            return _new(u, deps)
        if _is_real(other):
            if other == 0:
                raise AdDomainError('/', other, "division by zero")
            inv = 1.0 / other
            return _new(self._value * inv, {k: d * inv for k, d in self._deps.items()})
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_real(other):
            v = self._value
            if v == 0.0:
                raise AdDomainError('/', v, "division by an ADScalar with zero value")
            u = other / v
            c = -u / v
            return _new(u, {k: d * c for k, d in self._deps.items()})
        return NotImplemented

    def __pow__(self, other):
        if isinstance(other, ADScalar):
            # x**y = exp(y log x)
            from sparse_ad_library.math_functions import exp, log
            return exp(other * log(self))
        if not _is_real(other):
            return NotImplemented
        x = self._value
        if x == 0.0 and other < 0:
            raise AdDomainError('**', x, "zero raised to a negative power")
        if x < 0.0 and float(other) != int(other):
            raise AdDomainError('**', x, "negative base with non-integer exponent")
        if other == 0:
            return _new(1.0, {k: 0.0 for k in self._deps})
        val = x ** other
        der = _power_slope(x, other)
        return _new(val, {k: d * der for k, d in self._deps.items()})

    def __rpow__(self, other):
        if not _is_real(other):
            return NotImplemented
        if other <= 0:
            raise AdDomainError('**', other, "base of a variable exponent must be positive")
        try:
            val = other ** self._value
        except OverflowError:
            raise AdDomainError('**', self._value, "result overflows")
        der = val * math.log(other)
        return _new(val, {k: d * der for k, d in self._deps.items()})

    ####################################################
    # Comparison (values only)

    def __eq__(self, other):
        if isinstance(other, ADScalar):
            return self._value == other._value
        if _is_real(other):
            return self._value == other
        return NotImplemented

    def __ne__(self, other):
        res = self.__eq__(other)
        return res if res is NotImplemented else not res

    def __lt__(self, other):
        if isinstance(other, ADScalar):
            return self._value < other._value
        if _is_real(other):
            return self._value < other
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, ADScalar):
            return self._value > other._value
        if _is_real(other):
            return self._value > other
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, ADScalar):
            return self._value <= other._value
        if _is_real(other):
            return self._value <= other
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, ADScalar):
            return self._value >= other._value
        if _is_real(other):
            return self._value >= other
        return NotImplemented

    ####################################################
    # Printing

    def __str__(self):
        text = f"{self._value:g}"
        if self._fixed:
            return text + " (fixed)"
        if self._var_id is not None:
            return text + f" (variable {self._var_id})"
        if self._deps:
            entries = "".join(f"({k}, {d:g}) " for k, d in sorted(self._deps.items()))
            text += " dependencies: [ " + entries + "]"
        return text

    def __repr__(self):
        return f"<ADScalar value={self._value!r} deps={self.deps!r}>"


####################################################
# Construction helpers

def make_variable(value, var_id):
    """
    Returns an independent variable with the trivial self-dependency
    {(var_id, 1.0)}.
    """
    return ADScalar(value, var_id)


def make_seeded(value, var_id, seed):
    """
    Returns an unregistered scalar whose only dependency is {(var_id, seed)}.
    Seeding the time derivative of unknown i with `alpha` and the unknown
    itself with 1 makes one residual evaluation produce
    alpha*dF/dvdot + dF/dv.
    """
    return _new(float(value), {int(var_id): float(seed)})


def make_parameter(value):
    """ Returns a fixed scalar: a constant that never carries dependencies. """
    res = ADScalar(value)
    res.set_fixed(True)
    return res


def register_variables(values, offset=0):
    """
    Registers a vector of unknowns with consecutive variable numbers starting
    at `offset` and returns the list of scalars.
    """
    return [ADScalar(v, offset + i) for i, v in enumerate(values)]


def sum_scalars(terms):
    """
    Sum of many terms in time linear in the total number of dependencies.
    Chained `+` copies the growing map on every addition; residual rows that
    sum over all loads of a model need this instead.

    Works for plain reals and any other scalar type by falling back to `sum`.
    """
    terms = list(terms)
    if not any(isinstance(t, ADScalar) for t in terms):
        return sum(terms, 0.0)

    value = 0.0
    deps = {}
    get = deps.get
    for t in terms:
        if isinstance(t, ADScalar):
            value += t._value
            for k, d in t._deps.items():
                deps[k] = get(k, 0.0) + d
        elif _is_real(t):
            value += t
        else:
            raise TypeError(f"Cannot sum ADScalar with {type(t).__name__}")
    return _new(value, deps)


def values_of(scalars):
    """ Plain float values of a sequence of scalars (reals pass through). """
    return [s.value if hasattr(s, 'value') else float(s) for s in scalars]
