import io

import numpy as np
import pytest

from sparse_ad_library.dae_integrator import Trajectory
from sparse_ad_library.trajectory_processor import TrajectoryProcessor


@pytest.fixture
def processor():
    return TrajectoryProcessor()


@pytest.fixture
def sine_trajectory():
    """ 100 V, 60 Hz phase voltage on top of a 20 V neutral offset. """
    t = np.linspace(0.0, 0.1, 10001)
    neutral = np.full_like(t, 20.0)
    phase = neutral + 100.0 * np.sin(2.0 * np.pi * 60.0 * t + 0.3)
    return Trajectory(t, np.column_stack([phase, neutral]), ['v_la', 'v_l0'])


def test_signal_against_reference(processor, sine_trajectory):
    signal = processor.get_signal(sine_trajectory, 'v_la', 'v_l0')
    assert np.max(np.abs(signal)) == pytest.approx(100.0, rel=1e-4)
    np.testing.assert_array_equal(processor.get_signal(sine_trajectory, 'v_l0'), 20.0)


def test_zero_crossings_are_interpolated(processor):
    t = np.array([0.0, 1.0, 2.0, 3.0])
    s = np.array([-1.0, 3.0, 1.0, -1.0])
    np.testing.assert_allclose(processor.get_zero_crossings(t, s, 0.0, 3.0), [0.25, 2.5])


def test_summary(processor, sine_trajectory):
    summary = processor.summarize(sine_trajectory, 'v_la', 'v_l0')
    assert summary.name == 'v_la-v_l0'
    assert summary.t_start == pytest.approx(0.05)
    assert summary.t_end == pytest.approx(0.1)
    assert summary.amplitude == pytest.approx(100.0, rel=1e-4)
    assert summary.frequency == pytest.approx(60.0, rel=1e-4)


def test_amplitude_in_window(processor):
    t = np.linspace(0.0, 1.0, 11)
    s = np.where(t < 0.5, 1.0, -4.0)
    assert processor.get_amplitude(t, s, 0.0, 0.4) == 1.0
    assert processor.get_amplitude(t, s, 0.0, 1.0) == 4.0


def test_empty_window(processor):
    with pytest.raises(ValueError):
        processor.get_amplitude(np.linspace(0.0, 1.0, 11), np.zeros(11), 2.0, 3.0)


def test_too_few_crossings(processor):
    t = np.linspace(0.0, 1.0, 11)
    with pytest.raises(ValueError, match="zero crossings"):
        processor.get_zero_crossing_frequency(t, t - 0.55, 0.0, 1.0)


def test_unknown_signal(processor, sine_trajectory):
    with pytest.raises(KeyError):
        processor.get_signal(sine_trajectory, 'v_p')


def test_csv_export(processor, tmp_path):
    traj = Trajectory(np.array([0.0, 0.5, 1.0]), np.array([[1.0, 2.0], [0.5, 1.5], [0.25, 1.0]]),
                      ['v0', 'v1'])
    path = tmp_path / "traj.csv"
    processor.save_trajectory_as_csv(traj, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "t,v0,v1"
    assert lines[1:] == ["0,1,2", "0.5,0.5,1.5", "1,0.25,1"]

    out = io.StringIO()
    processor.save_trajectory_as_csv(traj, out, ['v1'])
    assert out.getvalue().splitlines() == ["t,v1", "0,2", "0.5,1.5", "1,1"]
