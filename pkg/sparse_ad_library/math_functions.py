"""
Sparse AD Library: elementary functions overloaded for the scalar types.

Each function accepts a plain real, an `ADScalar` or a `DenseADScalar`. For
reals it is the `math` module function. For the AD scalars the value is
f(x) and every derivative is multiplied by f'(x) (copy, set value, scale
dependencies); the dependency keys never change.

The derivative of abs() at exactly 0 is -1.
 """

__all__ = ['FUNCTIONS', 'apply_unary', 'derivative',
           'sin', 'cos', 'tan', 'asin', 'acos', 'atan',
           'sinh', 'cosh', 'tanh', 'asinh', 'acosh', 'atanh',
           'exp', 'log', 'log10', 'sqrt', 'abs']

import builtins
import math

from sparse_ad_library.ad_scalar import ADScalar, _new, _is_real
from sparse_ad_library.errors import AdDomainError

# 1/ln(10)
LOG10_E = 0.4342944819032518

# |cos x| below this counts as a pole of tan
TAN_POLE_TOLERANCE = 1e-12


# ==============================================================================
# --- Domain checks
# ==============================================================================

def _positive(name, x):
    if not x > 0.0:
        raise AdDomainError(name, x, f"{name}: argument {x!r} must be positive")


def _nonnegative(name, x):
    if not x >= 0.0:
        raise AdDomainError(name, x, f"{name}: argument {x!r} must be nonnegative")


def _unit_interval(name, x):
    if not -1.0 <= x <= 1.0:
        raise AdDomainError(name, x, f"{name}: argument {x!r} outside [-1, 1]")


def _tan_domain(name, x):
    if builtins.abs(math.cos(x)) < TAN_POLE_TOLERANCE:
        raise AdDomainError(name, x, f"{name}: argument {x!r} is a pole")


def _acosh_domain(name, x):
    if not x >= 1.0:
        raise AdDomainError(name, x, f"{name}: argument {x!r} must be >= 1")


def _atanh_domain(name, x):
    if not -1.0 < x < 1.0:
        raise AdDomainError(name, x, f"{name}: argument {x!r} outside (-1, 1)")


def _inverse(y):
    """ 1/y, with an infinite result at a vertical tangent. """
    return 1.0 / y if y != 0.0 else math.inf


# ==============================================================================
# --- Function table: name -> (f, f', domain check)
# ==============================================================================

FUNCTIONS = {
    'sin': (math.sin, math.cos, None),
    'cos': (math.cos, lambda x: -math.sin(x), None),
    'tan': (math.tan, lambda x: 1.0 / (math.cos(x) * math.cos(x)), _tan_domain),
    'asin': (math.asin, lambda x: _inverse(math.sqrt(1.0 - x * x)), _unit_interval),
    'acos': (math.acos, lambda x: -_inverse(math.sqrt(1.0 - x * x)), _unit_interval),
    'atan': (math.atan, lambda x: 1.0 / (1.0 + x * x), None),
    'sinh': (math.sinh, math.cosh, None),
    'cosh': (math.cosh, math.sinh, None),
    'tanh': (math.tanh, lambda x: 1.0 / (math.cosh(x) * math.cosh(x)), None),
    'asinh': (math.asinh, lambda x: 1.0 / math.sqrt(1.0 + x * x), None),
    'acosh': (math.acosh, lambda x: _inverse(math.sqrt(x * x - 1.0)), _acosh_domain),
    'atanh': (math.atanh, lambda x: 1.0 / (1.0 - x * x), _atanh_domain),
    'exp': (math.exp, math.exp, None),
    'log': (math.log, lambda x: 1.0 / x, _positive),
    'log10': (math.log10, lambda x: LOG10_E / x, _positive),
    'sqrt': (math.sqrt, lambda x: _inverse(2.0 * math.sqrt(x)), _nonnegative),
    'abs': (builtins.abs, lambda x: 1.0 if x > 0.0 else -1.0, None),
}


def derivative(name, x):
    """ f'(x) for the named function at the real point `x`. """
    try:
        return FUNCTIONS[name][1](x)
    except KeyError:
        raise KeyError(f"Unknown function {name!r}; known: {sorted(FUNCTIONS)}")


def apply_unary(name, x):
    """
    Apply the named elementary function to a real or AD scalar.

    ### Parameters:

        **name**: str
            One of the keys of `FUNCTIONS`.

        **x**: float | ADScalar | DenseADScalar

    ### Returns:

        Same type as `x`. For AD scalars the derivatives are scaled by f'(x.value).
    """
    try:
        f, df, check = FUNCTIONS[name]
    except KeyError:
        raise KeyError(f"Unknown function {name!r}; known: {sorted(FUNCTIONS)}")

    if _is_real(x):
        return f(x)

    value = x.value
    if check is not None:
        check(name, value)
    try:
        val = f(value)
        der = df(value)
    except OverflowError:
        raise AdDomainError(name, value, f"{name}: result overflows at {value!r}")

    if isinstance(x, ADScalar):
        return _new(val, {k: d * der for k, d in x._deps.items()})
    return x.with_chain_rule(val, der)


def sin(x):
    return apply_unary('sin', x)


def cos(x):
    return apply_unary('cos', x)


def tan(x):
    return apply_unary('tan', x)


def asin(x):
    return apply_unary('asin', x)


def acos(x):
    return apply_unary('acos', x)


def atan(x):
    return apply_unary('atan', x)


def sinh(x):
    return apply_unary('sinh', x)


def cosh(x):
    return apply_unary('cosh', x)


def tanh(x):
    return apply_unary('tanh', x)


def asinh(x):
    return apply_unary('asinh', x)


def acosh(x):
    return apply_unary('acosh', x)


def atanh(x):
    return apply_unary('atanh', x)


def exp(x):
    return apply_unary('exp', x)


def log(x):
    return apply_unary('log', x)


def log10(x):
    return apply_unary('log10', x)


def sqrt(x):
    return apply_unary('sqrt', x)


def abs(x):
    return apply_unary('abs', x)
