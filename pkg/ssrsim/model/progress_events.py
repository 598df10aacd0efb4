from ignition.model.progress_events import ResourceTransitionProgressEvent
from collections import OrderedDict

class SimulationEvent(ResourceTransitionProgressEvent):
    """
    Base for events describing the progress of an experiment run
    """
    pass


class RunStartedEvent(SimulationEvent):
    progress_event_type = 'ssr/RunStarted'

    def __init__(self, experiment, config_digest, n_seeds, workers):
        super().__init__()
        self.experiment = experiment
        self.config_digest = config_digest
        self.n_seeds = n_seeds
        self.workers = workers

    def _details(self):
        return OrderedDict({
            'experiment': self.experiment,
            'configDigest': self.config_digest,
            'seeds': self.n_seeds,
            'workers': self.workers
        })

class SeedCompletedEvent(SimulationEvent):
    """
    Emitted once per seed, in seed order, after the seed's rows are collected
    """
    progress_event_type = 'ssr/SeedCompleted'

    def __init__(self, seed, rows, skipped):
        super().__init__()
        self.seed = seed
        self.rows = rows
        self.skipped = skipped

    def _details(self):
        return OrderedDict({
            'seed': self.seed,
            'rows': self.rows,
            'skipped': self.skipped
        })

class RowSkippedEvent(SimulationEvent):
    progress_event_type = 'ssr/RowSkipped'

    def __init__(self, seed, value, reason):
        super().__init__()
        self.seed = seed
        self.value = value
        self.reason = reason

    def _details(self):
        return OrderedDict({
            'seed': self.seed,
            'value': self.value,
            'reason': self.reason
        })

class RunCompletedEvent(SimulationEvent):
    progress_event_type = 'ssr/RunCompleted'

    def __init__(self, experiment, rows, skipped, wall_time):
        super().__init__()
        self.experiment = experiment
        self.rows = rows
        self.skipped = skipped
        self.wall_time = wall_time

    def _details(self):
        return OrderedDict({
            'experiment': self.experiment,
            'rows': self.rows,
            'skipped': self.skipped,
            'wallTime': self.wall_time
        })
