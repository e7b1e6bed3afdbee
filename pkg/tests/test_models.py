import math

import numpy as np
import pytest

from sparse_ad_library.dae_integrator import evaluate_dae, evaluate_dae_values
from sparse_ad_library.errors import ConfigError, DimensionError
from sparse_ad_library.models import DAE_MODELS, MODELS, get_model
from sparse_ad_library.models.config import apply_overrides, load_params, read_overrides
from sparse_ad_library.models.decay import DecayModel
from sparse_ad_library.models.lorenz import (REFERENCE_PARAMS, REFERENCE_STATE, LorenzModel,
                                             LorenzParams, lorenz_residual)
from sparse_ad_library.models.microgrid import (GLOBAL_NAMES, MicrogridLayout, MicrogridModel,
                                                MicrogridParams, diode_current, modulation)


def microgrid_jacobian(N, seed=0):
    model = MicrogridModel(N)
    v = model.random_state(np.random.default_rng(seed))
    return model, evaluate_dae(model, [0.0] * model.dimension, v, 0.0, 1e5)


####################################################
# Lorenz

def test_lorenz_plain_residual():
    f = [0.0] * 3
    lorenz_residual(f, REFERENCE_STATE, REFERENCE_PARAMS.as_tuple())
    assert f == pytest.approx([120.0, -4.0, 141.33333333333334])


def test_lorenz_residual_checks_lengths():
    with pytest.raises(DimensionError):
        lorenz_residual([0.0] * 2, REFERENCE_STATE, REFERENCE_PARAMS.as_tuple())


def test_lorenz_roles():
    model = LorenzModel(REFERENCE_PARAMS, swap_roles=True)
    assert model.variable_names() == ['sigma', 'rho', 'beta']
    assert model.unknowns() == [10.0, 8.0 / 3.0, 28.0]
    assert LorenzModel().variable_names() == ['x', 'y', 'z']
    assert LorenzParams(sigma=1).sigma == 1.0


####################################################
# Microgrid devices

def test_thermal_voltage():
    assert MicrogridParams().thermal_voltage == pytest.approx(0.025852, rel=1e-4)


def test_diode_current():
    p = MicrogridParams()
    assert diode_current(0.0, p) == 0.0
    forward = diode_current(0.7, p)
    assert forward == pytest.approx(p.Is * math.expm1(0.7 / (2.0 * p.thermal_voltage)), rel=1e-9)
    assert diode_current(-5.0, p) == pytest.approx(-p.Is, rel=1e-9)


def test_modulation():
    p = MicrogridParams()
    assert modulation(0.0, 'a', p) == 0.0
    # m sin(2 pi / 3) = pi / 3
    assert modulation(0.0, 'b', p) == pytest.approx(math.pi / 3.0)
    assert modulation(0.0, 2, p) == pytest.approx(-math.pi / 3.0)
    quarter = 1.0 / (4.0 * 60.0)
    assert modulation(quarter, 'a', p) == pytest.approx(p.m)


@pytest.mark.parametrize("field", ['C', 'G', 'Is', 'T'])
def test_params_must_be_positive(field):
    with pytest.raises(ValueError):
        MicrogridParams(**{field: 0.0})
    with pytest.raises(ValueError):
        MicrogridParams(**{field: -1.0})


####################################################
# Microgrid layout and structure

def test_layout():
    layout = MicrogridLayout(3)
    assert layout.dimension == 33
    assert layout.index('v_ga') == 21
    assert layout.index('q_C') == 32
    assert layout.index('v_l0', 2) == 20
    assert list(layout.load_block(1)) == list(range(7, 14))
    names = layout.names()
    assert names[0] == 'i_va[0]'
    assert names[-len(GLOBAL_NAMES):] == list(GLOBAL_NAMES)
    with pytest.raises(IndexError):
        layout.load_offset(3)


def test_limited_unknowns():
    model = MicrogridModel(2)
    names = model.variable_names()
    assert [names[i] for i in model.limited_indices()] == ['v_ga', 'v_gb', 'v_gc', 'v_f', 'v_p', 'v_n']


def test_microgrid_thirty_loads():
    model, jac = microgrid_jacobian(30)
    pattern = jac.pattern()
    assert model.dimension == 222
    assert pattern.nnz == 935
    assert 0.015 <= pattern.density <= 0.021


@pytest.mark.parametrize("N", [1, 4, 10])
def test_nonzero_count_formula(N):
    _, jac = microgrid_jacobian(N)
    assert jac.nnz == 22 * N + 35 + 8 * N


def test_loads_couple_only_through_globals():
    model, jac = microgrid_jacobian(6)
    layout = model.layout
    g = layout.global_offset
    for k in range(layout.N):
        allowed = set(layout.load_block(k)) | set(range(g, layout.dimension))
        for i in layout.load_block(k):
            assert set(jac.row(i)[0]) <= allowed


def test_rows_are_bounded_except_bus_rows():
    model, jac = microgrid_jacobian(12)
    g = model.layout.global_offset
    long_rows = [i for i in range(model.dimension) if len(jac.row(i)[0]) > 5]
    assert long_rows == [g + 8, g + 11]
    assert len(jac.row(g + 8)[0]) == 4 * 12 + 5
    assert len(jac.row(g + 11)[0]) == 4 * 12 + 2


def test_pattern_does_not_depend_on_state():
    _, a = microgrid_jacobian(3, seed=1)
    _, b = microgrid_jacobian(3, seed=2)
    assert a.pattern() == b.pattern()


def test_plain_and_ad_evaluations_agree(rng):
    model = MicrogridModel(4)
    v = model.random_state(rng, t=0.003)
    vdot = rng.uniform(-10.0, 10.0, model.dimension).tolist()
    values = evaluate_dae_values(model, vdot, v, 0.003)
    jac = evaluate_dae(model, vdot, v, 0.003, 1e5)
    assert jac.rhs == pytest.approx(values, rel=1e-12, abs=1e-12)


def test_random_state_is_bounded_and_seeded():
    model = MicrogridModel(5)
    v = model.random_state(np.random.default_rng(7))
    assert max(abs(x) for x in v) <= 200.0
    assert v == model.random_state(np.random.default_rng(7))


def test_residual_checks_lengths():
    model = MicrogridModel(1)
    with pytest.raises(DimensionError):
        model.residual([0.0] * 18, [0.0] * 19, [0.0] * 19, 0.0)


####################################################
# Decay

def test_decay_model():
    model = DecayModel(2, rate=3.0)
    F = [0.0, 0.0]
    model.residual(F, [1.0, 2.0], [1.0, -1.0], 0.0)
    assert F == [4.0, -1.0]
    assert model.exact([2.0], 1.0) == pytest.approx([2.0 * math.exp(-3.0)])
    assert model.initial_state() == [1.0, 1.0]
    with pytest.raises(ValueError):
        DecayModel(0)


####################################################
# Registry and config files

def test_registry():
    assert set(MODELS) == {'lorenz', 'microgrid', 'decay'}
    assert set(DAE_MODELS) == {'microgrid', 'decay'}
    assert get_model('microgrid', N=3).dimension == 33
    assert get_model('lorenz').params == REFERENCE_PARAMS
    assert get_model('lorenz', swap_roles=True).swap_roles
    with pytest.raises(KeyError):
        get_model('van-der-pol')


def test_read_overrides(tmp_path):
    path = tmp_path / "grid.cfg"
    path.write_text("# half the load conductance\nG = 0.005\n\n; louder generator\nV0 = 120  # volts\n")
    assert read_overrides(path) == {'G': 0.005, 'V0': 120.0}


def test_config_changes_model_parameters(tmp_path):
    path = tmp_path / "grid.cfg"
    path.write_text("V0 = 120\n")
    model = get_model('microgrid', N=2, config=str(path))
    assert model.params.V0 == 120.0
    assert model.params.G == MicrogridParams().G


def test_config_for_lorenz(tmp_path):
    path = tmp_path / "lorenz.cfg"
    path.write_text("rho = 28\n")
    assert load_params(REFERENCE_PARAMS, path).rho == 28.0
    assert load_params(REFERENCE_PARAMS) is REFERENCE_PARAMS


@pytest.mark.parametrize("text,fragment", [
    ("G = 0.005\nG = 0.004\n", "duplicate key 'G'"),
    ("G = lots\n", "not a number"),
    ("just a line\n", "malformed"),
    ("R = 1\n", "unknown key"),
    ("C = -1e-4\n", "must be positive"),
])
def test_bad_config_files(tmp_path, text, fragment):
    path = tmp_path / "bad.cfg"
    path.write_text(text)
    with pytest.raises(ConfigError, match=fragment):
        get_model('microgrid', config=str(path))


def test_duplicate_key_names_line(tmp_path):
    path = tmp_path / "dup.cfg"
    path.write_text("# comment\nG = 0.005\nG = 0.004\n")
    with pytest.raises(ConfigError, match=r"dup\.cfg:3:"):
        read_overrides(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError, match="Cannot read"):
        read_overrides(tmp_path / "missing.cfg")


def test_apply_overrides_rejects_unknown_field():
    with pytest.raises(ConfigError):
        apply_overrides(MicrogridParams(), {'voltage': 1.0})
