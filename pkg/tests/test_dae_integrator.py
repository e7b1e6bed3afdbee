import math

import numpy as np
import pytest

from sparse_ad_library.dae_integrator import (DaeConfig, DaeSimulationThread, consistent_init,
                                              dae_integrate, evaluate_dae, evaluate_dae_values)
from sparse_ad_library.errors import InitializationError, IntegrationError
from sparse_ad_library.models.base import DaeModel
from sparse_ad_library.models.decay import DecayModel
from sparse_ad_library.models.microgrid import MicrogridModel
from sparse_ad_library.trajectory_processor import TrajectoryProcessor


class NoSolution(DaeModel):
    """ F = v^2 + 1 has no real root. """

    name = "no-solution"

    @property
    def dimension(self):
        return 1

    def residual(self, F, vdot, v, t):
        F[0] = v[0] * v[0] + 1.0


####################################################
# Configuration

def test_config():
    cfg = DaeConfig(h=0.1, t_end=1.0)
    assert cfg.alpha == pytest.approx(10.0)
    assert cfg.n_steps == 10
    with pytest.raises(ValueError):
        DaeConfig(h=0.0, t_end=1.0)
    with pytest.raises(ValueError):
        DaeConfig(h=-1e-5, t_end=1.0)
    with pytest.raises(ValueError):
        DaeConfig(h=0.1, t_end=-1.0)


####################################################
# Seeding

def test_seeded_decay_matrix():
    model = DecayModel(3, rate=2.0)
    jac = evaluate_dae(model, [1.0, 0.0, -1.0], [0.5, 1.0, 2.0], 0.0, alpha=10.0)
    np.testing.assert_array_equal(jac.to_dense(), np.eye(3) * 12.0)
    assert jac.rhs == [2.0, 2.0, 3.0]


def test_seeding_adds_alpha_times_vdot_derivative(rng):
    model = MicrogridModel(2)
    v = model.random_state(rng)
    vdot = rng.uniform(-1.0, 1.0, model.dimension).tolist()
    j0 = evaluate_dae(model, vdot, v, 0.0, 0.0).to_dense()
    j1 = evaluate_dae(model, vdot, v, 0.0, 1.0).to_dense()
    alpha = 1e5
    ja = evaluate_dae(model, vdot, v, 0.0, alpha)
    np.testing.assert_allclose(ja.to_dense(), alpha * (j1 - j0) + j0, rtol=1e-15)
    assert ja.rhs == pytest.approx(evaluate_dae_values(model, vdot, v, 0.0), rel=1e-12, abs=1e-12)


def test_time_derivatives_enter_bus_rows_only():
    model = MicrogridModel(1)
    layout = model.layout
    jac = evaluate_dae(model, [0.0] * model.dimension, model.random_state(np.random.default_rng(0)),
                       0.0, 1e5).to_dense()
    g = layout.global_offset
    phi, q = layout.index('phi_L'), layout.index('q_C')
    assert jac[g + 7, phi] == 1e5
    assert jac[g + 8, q] == 1e5
    assert jac[g + 11, q] == -1e5
    assert jac[g + 9, phi] == 1.0
    assert jac[g + 10, q] == 1.0
    assert model.differential_indices() == [phi, q]


####################################################
# Integration

def test_single_decay_step():
    traj = dae_integrate(DecayModel(), [1.0], DaeConfig(h=0.1, t_end=0.1))
    assert traj.n_steps == 1
    assert traj.final[0] == pytest.approx(1.0 / 1.1, abs=1e-14)


def test_constant_solution():
    model = DecayModel(2, rate=0.0)
    traj = dae_integrate(model, [3.0, -1.0], DaeConfig(h=0.5, t_end=2.0))
    assert traj.n_steps == 4
    np.testing.assert_array_equal(traj.v, [[3.0, -1.0]] * 5)
    assert traj.newton_iterations == 0
    assert traj.evaluations == 4


@pytest.mark.parametrize("h,expected", [(0.1, 0.017664), (0.05, 0.009010), (0.025, 0.004552)])
def test_decay_error_at_one_second(h, expected):
    model = DecayModel()
    traj = dae_integrate(model, [1.0], DaeConfig(h=h, t_end=1.0))
    assert traj.t[-1] == pytest.approx(1.0)
    assert traj.final[0] - math.exp(-1.0) == pytest.approx(expected, abs=1e-6)


def test_first_order_convergence():
    model = DecayModel()
    errors = []
    for h in (0.1, 0.05, 0.025, 0.0125):
        traj = dae_integrate(model, [1.0], DaeConfig(h=h, t_end=1.0))
        errors.append(abs(traj.final[0] - model.exact([1.0], 1.0)[0]))
    for coarse, fine in zip(errors, errors[1:]):
        assert 1.6 <= coarse / fine <= 2.4


def test_trajectory_bookkeeping():
    traj = dae_integrate(DecayModel(2), [1.0, 2.0], DaeConfig(h=0.1, t_end=1.0))
    assert traj.v.shape == (11, 2)
    assert traj.names == ['v0', 'v1']
    assert traj.completed
    # Linear residual: one update per step, plus the converged evaluation.
    assert traj.newton_iterations == 10
    assert traj.evaluations == 20
    np.testing.assert_allclose(traj.column('v1'), 2.0 * traj.column('v0'))
    with pytest.raises(KeyError):
        traj.column('v_p')


def test_observer_receives_every_step():
    calls = []
    dae_integrate(DecayModel(), [1.0], DaeConfig(h=0.1, t_end=0.5),
                  observer=lambda *args: calls.append(args))
    assert [c[0] for c in calls] == [1, 2, 3, 4, 5]
    assert [c[1] for c in calls] == pytest.approx([0.1, 0.2, 0.3, 0.4, 0.5])
    step, t, v, iterations, norm = calls[0]
    assert v == pytest.approx([1.0 / 1.1])
    assert iterations == 1
    assert norm <= 1e-8


def test_observer_errors_propagate():
    def observer(*args):
        raise RuntimeError("observer failed")

    with pytest.raises(RuntimeError, match="observer failed"):
        dae_integrate(DecayModel(), [1.0], DaeConfig(h=0.1, t_end=0.5), observer=observer)


def test_should_stop_ends_run_early():
    polls = []

    def should_stop():
        polls.append(1)
        return len(polls) > 3

    traj = dae_integrate(DecayModel(), [1.0], DaeConfig(h=0.1, t_end=1.0), should_stop=should_stop)
    assert traj.n_steps == 3
    assert not traj.completed


def test_failed_step_raises_integration_error():
    with pytest.raises(IntegrationError) as err:
        dae_integrate(NoSolution(), [1.0], DaeConfig(h=0.01, t_end=0.1))
    assert err.value.step == 1
    assert err.value.t == pytest.approx(0.01)


####################################################
# Consistent initialization

def test_consistent_init_decay():
    v = consistent_init(DecayModel(), [1.0])
    assert v[0] == pytest.approx(0.0, abs=1e-8)


def test_consistent_guess_is_returned_unchanged():
    assert consistent_init(DecayModel(3)) == [0.0, 0.0, 0.0]


def test_consistent_init_failure():
    with pytest.raises(InitializationError):
        consistent_init(NoSolution(), [1.0])


def test_consistent_init_microgrid_from_zero():
    model = MicrogridModel(1)
    v = consistent_init(model)
    residual = evaluate_dae_values(model, [0.0] * model.dimension, v, 0.0)
    assert max(abs(r) for r in residual) <= 1e-8
    g = model.layout.global_offset
    assert v[g:g + 3] == pytest.approx([0.0, 100.0 * math.sin(2.0 * math.pi / 3.0),
                                        100.0 * math.sin(4.0 * math.pi / 3.0)], abs=1e-6)


####################################################
# Simulation thread

def test_simulation_thread_reports_progress():
    steps, completed, failures = [], [], []
    thread = DaeSimulationThread('decay', DecayModel(), [1.0], DaeConfig(h=0.1, t_end=1.0),
                                 lambda *args: steps.append(args),
                                 lambda *args: completed.append(args),
                                 lambda *args: failures.append(args))
    thread.start()
    thread.join(timeout=60)
    assert not thread.is_alive()
    assert failures == []
    assert len(steps) == 10
    assert steps[0][0] == 'decay'
    name, trajectory, duration = completed[0]
    assert name == 'decay'
    assert trajectory is thread.trajectory
    assert trajectory.final[0] == pytest.approx(1.1 ** -10)
    assert duration >= 0.0


def test_simulation_thread_passes_exceptions():
    completed, failures = [], []
    thread = DaeSimulationThread('broken', NoSolution(), [1.0], DaeConfig(h=0.1, t_end=1.0),
                                 None, lambda *args: completed.append(args),
                                 lambda *args: failures.append(args))
    thread.start()
    thread.join(timeout=60)
    assert completed == []
    name, err = failures[0]
    assert name == 'broken'
    assert isinstance(err, IntegrationError)


def test_stop_thread():
    completed = []
    thread = DaeSimulationThread('decay', DecayModel(), [1.0], DaeConfig(h=0.1, t_end=1.0),
                                 None, lambda *args: completed.append(args), None)
    thread.stop_thread()
    thread.start()
    thread.join(timeout=60)
    trajectory = completed[0][1]
    assert not trajectory.completed
    assert trajectory.n_steps == 0


####################################################
# Microgrid simulation

@pytest.mark.slow
def test_microgrid_load_sees_generator_voltage():
    model = MicrogridModel(1)
    traj = dae_integrate(model, consistent_init(model), DaeConfig(h=1e-5, t_end=0.1))
    phase, neutral = (traj.names[i] for i in model.load_voltage_signal(0, 'a'))
    summary = TrajectoryProcessor().summarize(traj, phase, neutral)
    assert summary.amplitude == pytest.approx(100.0, rel=0.05)
    assert summary.frequency == pytest.approx(60.0, rel=0.01)
