'''
Example to demonstrate usage of the Sparse AD Library for Python: simulate the
microgrid in a background thread and measure the voltage seen by a load.
 '''

__version__ = "0.1.0"
__status__ = "Development"

import sys
import time
import logging

from sparse_ad_library.dae_integrator import DaeConfig, DaeSimulationThread, consistent_init
from sparse_ad_library.models.microgrid import MicrogridModel
from sparse_ad_library.trajectory_processor import TrajectoryProcessor

# Config the logger.
log = logging.getLogger(__name__)
logging.basicConfig(format="[%(name)s.%(funcName)s():%(lineno)d] - [%(levelname)s] - %(message)s",
                    stream=sys.stdout,
                    level=logging.INFO)

# Update the desired simulation settings.
LOAD_COUNT = 1          # Number of inverter-fed loads
STEP_SIZE = 1e-5        # Integrator step (s)
END_TIME = 0.1          # Simulated time (s)
REPORT_EVERY = 1000     # Steps between progress messages


class SadLibraryExample:
    '''
    Example class to demonstrate usage of the Sparse AD Library for Python.
    '''

    def __init__(self):
        # Create shared instance of TrajectoryProcessor
        self.trajectory_processor = TrajectoryProcessor()

        log.info(f'Building microgrid with {LOAD_COUNT} load(s)....')
        self.model = MicrogridModel(LOAD_COUNT)

        self.simulation_stopped = False

    ####################################################
    # Main process loop
    def service_loop(self):

        log.info('Computing consistent initial conditions....')
        v0 = consistent_init(self.model)

        # Initialize the simulation thread with the required call-backs
        log.info('Starting DaeSimulationThread....')
        simulation = DaeSimulationThread('microgrid',
                                         self.model,
                                         v0,
                                         DaeConfig(h=STEP_SIZE, t_end=END_TIME),
                                         self.on_step_completed,
                                         self.on_simulation_complete,
                                         self.on_simulation_exception
                                         )
        simulation.start()

        # Main application logic can run here while the simulation thread works.
        while not self.simulation_stopped:
            time.sleep(1)

            # Call below to end the simulation early.
            #simulation.stop_thread()

        simulation.join()
        print('DaeSimulationThread has exited - Main Application Loop will now exit.')

    ####################################################
    # Simulation call-backs

    def on_step_completed(self, name, step, t, v, newton_iterations, residual_norm):
        if step % REPORT_EVERY == 0:
            log.info(f'{name}: step {step}, t = {t:.4f} s, {newton_iterations} Newton iterations')

    def on_simulation_complete(self, name, trajectory, duration):
        phase, neutral = (trajectory.names[i] for i in self.model.load_voltage_signal(0, 'a'))
        summary = self.trajectory_processor.summarize(trajectory, phase, neutral)
        log.info(f'{name}: {trajectory.n_steps} steps in {duration:.1f} s, load voltage amplitude '
                 f'{summary.amplitude:.2f} V at {summary.frequency:.2f} Hz')
        self.trajectory_processor.save_trajectory_as_csv(trajectory, f'{name}.csv', [phase, neutral, 'v_p', 'v_n'])
        self.simulation_stopped = True

    def on_simulation_exception(self, name, exception):
        log.error(f'Simulation {name} failed: {exception}')
        self.simulation_stopped = True


if __name__ == "__main__":
    '''
    Main method for example SadLibraryExample
    '''
    sad_example = SadLibraryExample()
    sad_example.service_loop()
