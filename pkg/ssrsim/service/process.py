import logging
import os
from multiprocessing.pool import Pool
from ssrsim.exceptions import ConfigError
from ssrsim.service.config import SimulatorPropertiesGroup

logger = logging.getLogger(__name__)

THREADS_ENV_VAR = 'SSR_THREADS'

class ProcessProperties(SimulatorPropertiesGroup):
    def __init__(self):
        super().__init__('process')
        # apply defaults (correct settings will be picked up from config file or environment variables)
        self.process_pool_size = 2
        self.use_process_pool = True


def threads_cap():
    value = os.environ.get(THREADS_ENV_VAR)
    if value is None or value.strip() == '':
        return None
    try:
        cap = int(value)
    except ValueError:
        raise ConfigError('{0} must be a positive integer, got {1}'.format(THREADS_ENV_VAR, value))
    if cap < 1:
        raise ConfigError('{0} must be a positive integer, got {1}'.format(THREADS_ENV_VAR, value))
    return cap


class SeedPoolService():
    """
    Runs one task per seed, in parallel when a process pool is enabled. Results
    always come back in task order
    """

    def __init__(self, configuration=None, process_properties=None):
        if process_properties is None:
            if configuration is None:
                raise ValueError('configuration argument not provided')
            process_properties = configuration.property_groups.get_property_group(ProcessProperties)
        if int(process_properties.process_pool_size) < 1:
            raise ConfigError('process.process_pool_size must be at least 1, got {0}'.format(process_properties.process_pool_size))
        self.process_properties = process_properties

    def worker_count(self, n_tasks):
        if not self.process_properties.use_process_pool:
            return 1
        workers = min(int(self.process_properties.process_pool_size), max(1, n_tasks))
        cap = threads_cap()
        if cap is not None:
            workers = min(workers, cap)
        return workers

    def map(self, fn, tasks):
        tasks = list(tasks)
        workers = self.worker_count(len(tasks))
        if workers == 1:
            logger.debug('Running {0} tasks in process'.format(len(tasks)))
            return [fn(task) for task in tasks]
        logger.debug('Running {0} tasks on {1} worker processes'.format(len(tasks), workers))
        with Pool(processes=workers) as pool:
            return pool.map(fn, tasks, chunksize=1)
