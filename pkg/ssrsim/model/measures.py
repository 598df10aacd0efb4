import json
import numpy as np
from ssrsim.exceptions import DimensionError, PreconditionError
from ssrsim.util.formatting import float_list

WASSERSTEIN = 'wasserstein'
MAXIMAL_INFO = 'maximal_info'
H_DIVERGENCE = 'h_divergence'

class MeanQuadruple():
    """
    Class means of the labeled domain (mu1, mu2) and of the shifted domain
    (mu1_shift, mu2_shift)
    """

    def __init__(self, mu1, mu2, mu1_shift, mu2_shift):
        vectors = [np.asarray(v, dtype=float).reshape(-1) for v in (mu1, mu2, mu1_shift, mu2_shift)]
        dims = set(v.shape[0] for v in vectors)
        if len(dims) != 1:
            raise DimensionError('All four means must share one dimension, got {0}'.format(sorted(dims)))
        self.mu1, self.mu2, self.mu1_shift, self.mu2_shift = vectors

    @property
    def dim(self):
        return self.mu1.shape[0]

    def gap(self):
        return float(np.linalg.norm(self.mu1 - self.mu2))

    def shifted_gap(self):
        return float(np.linalg.norm(self.mu1_shift - self.mu2_shift))

    def shifts(self):
        return float(np.linalg.norm(self.mu1_shift - self.mu1)), float(np.linalg.norm(self.mu2_shift - self.mu2))

    def to_dict(self):
        return {'mu1': float_list(self.mu1), 'mu2': float_list(self.mu2),
                'mu1_shift': float_list(self.mu1_shift), 'mu2_shift': float_list(self.mu2_shift)}


class BoundReport():

    def __init__(self, measure, tau, bound, refined_bound=None, alpha=None):
        if measure not in (WASSERSTEIN, MAXIMAL_INFO, H_DIVERGENCE):
            raise PreconditionError('Unknown measure: {0}'.format(measure))
        self.measure = measure
        self.tau = float(tau)
        self.bound = float(bound)
        self.refined_bound = None if refined_bound is None else float(refined_bound)
        self.alpha = None if alpha is None else float(alpha)

    def to_dict(self):
        data = {'measure': self.measure, 'tau': self.tau, 'bound': self.bound}
        if self.refined_bound is not None:
            data['refined_bound'] = self.refined_bound
        if self.alpha is not None:
            data['alpha'] = self.alpha
        return data

    def to_json(self):
        return json.dumps(self.to_dict())

    def __repr__(self):
        return 'BoundReport({0})'.format(self.to_dict())
