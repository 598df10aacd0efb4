import json
import math
from ssrsim.exceptions import PreconditionError

LINF = 'linf'

STANDARD = 'standard'
ROBUST = 'robust'

CLOSED_FORM = 'closed_form'
MONTE_CARLO = 'monte_carlo'

class AttackBudget():
    """
    Perturbation radius under the linf norm
    """

    def __init__(self, epsilon):
        if not (epsilon >= 0 and math.isfinite(epsilon)):
            raise PreconditionError('epsilon must be a finite nonnegative real, got {0}'.format(epsilon))
        self.epsilon = float(epsilon)
        self.norm = LINF

    @property
    def kind(self):
        return STANDARD if self.epsilon == 0 else ROBUST

    def __repr__(self):
        return 'AttackBudget(epsilon={0})'.format(self.epsilon)


class ErrorReport():

    def __init__(self, value, kind, method, std_err=0.0):
        if not 0 <= value <= 1:
            raise PreconditionError('Error value must lie in [0, 1], got {0}'.format(value))
        if kind not in (STANDARD, ROBUST):
            raise PreconditionError('Unknown error kind: {0}'.format(kind))
        if method not in (CLOSED_FORM, MONTE_CARLO):
            raise PreconditionError('Unknown error method: {0}'.format(method))
        if method == CLOSED_FORM and std_err != 0:
            raise PreconditionError('Closed-form errors carry no standard error')
        self.value = float(value)
        self.std_err = float(std_err)
        self.kind = kind
        self.method = method

    def to_dict(self):
        return {'value': self.value, 'std_err': self.std_err, 'kind': self.kind, 'method': self.method}

    def to_json(self):
        return json.dumps(self.to_dict())

    def __repr__(self):
        return 'ErrorReport({0})'.format(self.to_dict())
