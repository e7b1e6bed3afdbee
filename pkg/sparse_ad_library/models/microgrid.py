"""
Microgrid benchmark: one ideal 3-phase generator feeding a diode rectifier and
LC filter, a DC bus, and N identical passive AC loads, each behind an averaged
3-phase inverter.

The model is a DAE F(vdot, v, t) = 0 with 12 + 7N unknowns. Parameters are
chosen so that the result is self-validating: every load sees the generator
voltage again (100 V, 60 Hz), less diode drops and ripple.

Unknown layout (the 12 globally coupled unknowns come last so the Jacobian is
arrowhead shaped):

    load k, offset 7k:  i_va, i_vb, i_vc, v_la, v_lb, v_lc, v_l0
    global, offset 7N:  v_ga, v_gb, v_gc, i_ga, i_gb, i_gc, v_f, v_p, v_n, i_L, phi_L, q_C

Equation k-block rows: three inverter current rows, three load-terminal
voltage rows, the load neutral row. Global rows: three generator rows, three
rectifier rows, filter current, inductor voltage, negative rail, inductor
flux, capacitor charge, positive rail.

The inverter draws sum_a d_a G (v_la - v_l0) from the positive rail and
returns it on the negative rail; the capacitor current enters both rails.
 """

__version__ = "0.1.0"
__status__ = "Development"

__all__ = ['MicrogridParams', 'MicrogridLayout', 'MicrogridModel', 'diode_current',
           'modulation', 'microgrid_residual', 'GLOBAL_NAMES', 'LOAD_NAMES', 'PHASES']

import math
from dataclasses import dataclass, field, fields

from sparse_ad_library.ad_scalar import sum_scalars
from sparse_ad_library.errors import DimensionError
from sparse_ad_library.math_functions import exp
from sparse_ad_library.models.base import DaeModel

PHASES = ('a', 'b', 'c')

LOAD_NAMES = ('i_va', 'i_vb', 'i_vc', 'v_la', 'v_lb', 'v_lc', 'v_l0')
GLOBAL_NAMES = ('v_ga', 'v_gb', 'v_gc', 'i_ga', 'i_gb', 'i_gc',
                'v_f', 'v_p', 'v_n', 'i_L', 'phi_L', 'q_C')

# Node voltages next to the rectifier diodes and on the DC bus.
LIMITED_NAMES = ('v_ga', 'v_gb', 'v_gc', 'v_f', 'v_p', 'v_n')


def _default_modulation_index():
    return 2.0 * math.pi / (3.0 * math.sqrt(3.0))


@dataclass(frozen=True)
class MicrogridParams:
    """
    Electrical parameters (SI units). `m` makes the load voltage amplitude
    equal to the generator amplitude.
    """
    V0: float = 100.0
    omega: float = 2.0 * math.pi * 60.0
    G: float = 0.01
    C: float = 1e-4
    L: float = 0.02
    Is: float = 18.8e-9
    n_ideality: float = 2.0
    T: float = 300.0
    k_B: float = 1.380649e-23
    q_e: float = 1.602176634e-19
    m: float = field(default_factory=_default_modulation_index)

    def __post_init__(self):
        for f in fields(self):
            value = float(getattr(self, f.name))
            if not value > 0.0:
                raise ValueError(f"MicrogridParams.{f.name} must be positive, got {value}")
            object.__setattr__(self, f.name, value)

    @property
    def thermal_voltage(self):
        """ k_B T / q_e (about 25.85 mV at 300 K). """
        return self.k_B * self.T / self.q_e

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


DEFAULT_PARAMS = MicrogridParams()


@dataclass(frozen=True)
class MicrogridLayout:
    """ Index map of the 12 + 7N unknowns (and of the matching equations). """
    N: int

    def __post_init__(self):
        if int(self.N) < 0:
            raise ValueError(f"Load count must be nonnegative, got {self.N}")
        object.__setattr__(self, 'N', int(self.N))

    @property
    def dimension(self):
        return 12 + 7 * self.N

    @property
    def global_offset(self):
        return 7 * self.N

    def load_offset(self, k):
        if not 0 <= k < self.N:
            raise IndexError(f"Load {k} out of range for N = {self.N}")
        return 7 * k

    def index(self, name, k=None):
        """ Index of a global unknown (`k` omitted) or of unknown `name` of load k. """
        if k is None:
            return self.global_offset + GLOBAL_NAMES.index(name)
        return self.load_offset(k) + LOAD_NAMES.index(name)

    def load_block(self, k):
        start = self.load_offset(k)
        return range(start, start + 7)

    def names(self):
        out = [f"{name}[{k}]" for k in range(self.N) for name in LOAD_NAMES]
        out.extend(GLOBAL_NAMES)
        return out


def diode_current(v, params=DEFAULT_PARAMS):
    """ Shockley diode: I_s [exp(v / (n V_T)) - 1]; `v` is anode minus cathode voltage. """
    return params.Is * (exp(v * (1.0 / (params.n_ideality * params.thermal_voltage))) - 1.0)


def modulation(t, phase, params=DEFAULT_PARAMS):
    """ Inverter modulation signal d_phase(t) = m sin(omega t + phase * 2 pi / 3). """
    k = PHASES.index(phase) if isinstance(phase, str) else int(phase)
    return params.m * math.sin(params.omega * t + k * 2.0 * math.pi / 3.0)


def microgrid_residual(F, vdot, v, t, params, layout):
    """
    Fill all 12 + 7N residuals. Only the entries of `vdot` for phi_L and q_C
    are read.
    """
    n = layout.dimension
    if len(F) != n or len(v) != n or len(vdot) != n:
        raise DimensionError(f"Microgrid with N = {layout.N} needs vectors of length {n}")

    G = params.G
    d = [modulation(t, a, params) for a in range(3)]
    half = [0.5 * (1.0 + da) for da in d]

    g = layout.global_offset
    v_g = v[g:g + 3]
    i_g = v[g + 3:g + 6]
    v_f, v_p, v_n, i_L, phi_L, q_C = v[g + 6:g + 12]
    phi_L_dot = vdot[g + 10]
    q_C_dot = vdot[g + 11]
    v_dc = v_p - v_n

    # Loads and inverters
    inverter_terms = []
    for k in range(layout.N):
        o = 7 * k
        v_l0 = v[o + 6]
        u = [v[o + 3 + a] - v_l0 for a in range(3)]
        for a in range(3):
            F[o + a] = v[o + a] - G * u[a] + d[a] * G * u[a]
            F[o + 3 + a] = v[o + 3 + a] - v_n - half[a] * v_dc
            inverter_terms.append(d[a] * G * u[a])
        F[o + 6] = G * (u[0] + u[1] + u[2])
    inverter_current = sum_scalars(inverter_terms)

    # Generator
    for a in range(3):
        F[g + a] = v_g[a] - params.V0 * math.sin(params.omega * t + a * 2.0 * math.pi / 3.0)

    # Rectifier
    up = [diode_current(v_g[a] - v_f, params) for a in range(3)]
    down = [diode_current(v_n - v_g[a], params) for a in range(3)]
    for a in range(3):
        F[g + 3 + a] = i_g[a] - up[a] + down[a]

    # Filter and DC bus
    F[g + 6] = up[0] + up[1] + up[2] - i_L
    F[g + 7] = phi_L_dot - (v_f - v_p)
    F[g + 8] = q_C_dot + inverter_current - (down[0] + down[1] + down[2])
    F[g + 9] = phi_L - params.L * i_L
    F[g + 10] = q_C - params.C * v_dc
    F[g + 11] = -q_C_dot + i_L - inverter_current


class MicrogridModel(DaeModel):
    """
    The microgrid as a `DaeModel`.

    ### Parameters:

        **N**: int
            Number of loads.

        **params**: MicrogridParams
    """

    name = "microgrid"

    def __init__(self, N=1, params=DEFAULT_PARAMS):
        self.layout = MicrogridLayout(N)
        self.params = params

    @property
    def N(self):
        return self.layout.N

    @property
    def dimension(self):
        return self.layout.dimension

    def residual(self, F, vdot, v, t):
        microgrid_residual(F, vdot, v, t, self.params, self.layout)

    def variable_names(self):
        return self.layout.names()

    def differential_indices(self):
        return [self.layout.index('phi_L'), self.layout.index('q_C')]

    def limited_indices(self):
        return [self.layout.index(name) for name in LIMITED_NAMES]

    def load_voltage_signal(self, k=0, phase='a'):
        """ (index of v_l<phase>, index of v_l0) for load k: the load phase voltage is their difference. """
        return self.layout.index(f"v_l{phase}", k), self.layout.index('v_l0', k)

    def random_state(self, rng, t=0.0):
        """
        Bounded random state (|v| <= 200) with physically sensible diode
        junctions: generator voltages on their sine at time `t`, forward
        junction voltages below 0.9 V, flux and charge consistent with i_L and
        the bus voltage.

        ### Parameters:

            **rng**: numpy.random.Generator

            **t**: float
        """
        layout, p = self.layout, self.params
        n = layout.dimension
        v = rng.uniform(-200.0, 200.0, n)
        for k in range(self.N):
            o = layout.load_offset(k)
            v[o:o + 3] = rng.uniform(-5.0, 5.0, 3)

        g = layout.global_offset
        v_g = [p.V0 * math.sin(p.omega * t + a * 2.0 * math.pi / 3.0) for a in range(3)]
        v[g:g + 3] = v_g
        v[g + 3:g + 6] = rng.uniform(-5.0, 5.0, 3)
        v_f = max(v_g) - rng.uniform(0.3, 0.9)
        v_n = min(v_g) + rng.uniform(0.3, 0.9)
        v_p = v_f + rng.uniform(-5.0, 5.0)
        i_L = rng.uniform(0.0, 5.0)
        v[g + 6:g + 12] = [v_f, v_p, v_n, i_L, p.L * i_L, p.C * (v_p - v_n)]
        return v.tolist()
