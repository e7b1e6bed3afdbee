"""
Sparse AD Library: post-processing of integration results.

This class provides post-processing functions for a `Trajectory` returned by
`dae_integrate()` or delivered to the on_simulation_complete call-back of a
`DaeSimulationThread`.

 """

__version__ = "0.1.0"
__status__ = "Development"

__all__ = ['TrajectoryProcessor', 'SignalSummary']

import logging
from dataclasses import dataclass

import numpy as np

# Init the logger.
log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SignalSummary:
    """ Amplitude (signal units) and frequency (Hz) of a periodic signal over [t_start, t_end]. """
    name: str
    t_start: float
    t_end: float
    amplitude: float
    frequency: float


class TrajectoryProcessor:

    ####################################################
    # Signal selection

    def get_signal(self, trajectory, name, reference=None):
        """
        Returns the time series of unknown `name`, or its difference to
        unknown `reference` (e.g. a phase voltage against the load neutral).

        ### Parameters:

            **trajectory**: Trajectory

            **name**: str

            **reference**: str, optional

        ### Returns:

            numpy.ndarray of shape (n_steps + 1,)
        """
        signal = trajectory.column(name)
        if reference is not None:
            signal = signal - trajectory.column(reference)
        return signal

    def get_window(self, t, t_start, t_end):
        """ Boolean mask of the samples with t_start <= t <= t_end. """
        t = np.asarray(t)
        mask = (t >= t_start) & (t <= t_end)
        if not mask.any():
            raise ValueError(f"No samples in window [{t_start:g}, {t_end:g}] s")
        return mask

    ####################################################
    # Measurements

    def get_amplitude(self, t, signal, t_start, t_end):
        """ Largest magnitude of `signal` inside the window. """
        mask = self.get_window(t, t_start, t_end)
        return float(np.max(np.abs(np.asarray(signal)[mask])))

    def get_zero_crossings(self, t, signal, t_start, t_end):
        """
        Times at which `signal` changes sign inside the window, located by
        linear interpolation between neighbouring samples.
        """
        mask = self.get_window(t, t_start, t_end)
        t = np.asarray(t, dtype=float)[mask]
        s = np.asarray(signal, dtype=float)[mask]
        idx = np.flatnonzero((s[:-1] < 0.0) & (s[1:] >= 0.0) | (s[:-1] >= 0.0) & (s[1:] < 0.0))
        s0, s1 = s[idx], s[idx + 1]
        return t[idx] + (t[idx + 1] - t[idx]) * s0 / (s0 - s1)

    def get_zero_crossing_frequency(self, t, signal, t_start, t_end):
        """
        Frequency from the zero crossings inside the window: consecutive
        crossings are half a period apart.

        ### Raises:

            **ValueError** if fewer than two crossings are found.
        """
        crossings = self.get_zero_crossings(t, signal, t_start, t_end)
        if len(crossings) < 2:
            raise ValueError(f"Need at least two zero crossings in [{t_start:g}, {t_end:g}] s, "
                             f"found {len(crossings)}")
        return (len(crossings) - 1) / (2.0 * (crossings[-1] - crossings[0]))

    def summarize(self, trajectory, name, reference=None, t_start=None, t_end=None):
        """
        Amplitude and frequency of a signal; the window defaults to the second
        half of the trajectory.
        """
        t = trajectory.t
        t_end = float(t[-1]) if t_end is None else t_end
        t_start = t_end / 2.0 if t_start is None else t_start
        signal = self.get_signal(trajectory, name, reference)
        label = name if reference is None else f"{name}-{reference}"
        summary = SignalSummary(label, t_start, t_end,
                                self.get_amplitude(t, signal, t_start, t_end),
                                self.get_zero_crossing_frequency(t, signal, t_start, t_end))
        log.info(f"{label}: amplitude {summary.amplitude:.4g}, frequency {summary.frequency:.4g} Hz "
                 f"over [{t_start:g}, {t_end:g}] s")
        return summary

    ####################################################
    # Export

    def save_trajectory_as_csv(self, trajectory, target, names=None):
        """
        Writes the trajectory as CSV: a header line ``t,<name>,...`` followed by
        one row per time point.

        ### Parameters:

            **trajectory**: Trajectory

            **target**: str | file-like
                Path or open text stream.

            **names**: list of str, optional
                Unknowns to export; all of them if omitted.
        """
        names = list(trajectory.names) if names is None else list(names)
        columns = [trajectory.t] + [trajectory.column(name) for name in names]
        np.savetxt(target, np.column_stack(columns), delimiter=",", fmt="%.10g",
                   header=",".join(["t"] + names), comments="")
        log.debug(f"Saved {len(trajectory.t)} rows of {len(names)} signals")
