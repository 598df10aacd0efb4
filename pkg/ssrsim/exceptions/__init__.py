class SimulationError(Exception):
    """
    Base class for every error raised by the simulator
    """
    pass

class PreconditionError(SimulationError, ValueError):
    pass

class SplitError(SimulationError):
    """
    A labeled dataset cannot be split into two equal halves
    """
    pass

class DegenerateClassifier(SimulationError):
    """
    A classifier would have an all-zero weight vector
    """
    pass

class DegenerateEstimator(DegenerateClassifier):
    pass

class DimensionError(SimulationError):
    pass

class DegeneratePseudoSplit(SimulationError):
    """
    Pseudo-labeling put every unlabeled point in the same class
    """

    def __init__(self, msg, n_pos=0, n_neg=0):
        super().__init__(msg)
        self.msg = msg
        self.n_pos = n_pos
        self.n_neg = n_neg

class EmptySupport(SimulationError):
    pass

class ClosedFormUnavailable(SimulationError):
    pass

class AttackUnavailable(SimulationError):
    pass

class NoRobustDirection(SimulationError):
    pass

class DegenerateGap(SimulationError):
    pass

class CollapsedResponsibilities(SimulationError):
    """
    EM responsibilities put all mass on one component. The trajectory recorded
    before the collapse is kept on the exception
    """

    def __init__(self, msg, trajectory=None, state=None):
        super().__init__(msg)
        self.msg = msg
        self.trajectory = list(trajectory or [])
        self.state = state

class ParseError(SimulationError):
    pass

class ConfigError(SimulationError):
    pass

class DegenerateRunError(SimulationError):
    """
    Every row of an experiment run was skipped
    """
    pass

class BoundViolation(SimulationError):
    pass
