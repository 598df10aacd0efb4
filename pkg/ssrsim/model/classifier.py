import json
import numpy as np
from ssrsim.exceptions import DegenerateClassifier, DimensionError, PreconditionError
from ssrsim.util.formatting import float_list

SUPERVISED = 'supervised'
SEMI_SUPERVISED = 'semi_supervised'
SPARSE = 'sparse'
EXPLICIT = 'explicit'

PROVENANCES = (SUPERVISED, SEMI_SUPERVISED, SPARSE, EXPLICIT)

class LinearClassifier():
    """
    Decision rule sgn(w^T (x - b)) with sgn(0) = +1
    """

    def __init__(self, w, b=None, provenance=EXPLICIT):
        w = np.asarray(w, dtype=float).reshape(-1)
        b = np.zeros_like(w) if b is None else np.asarray(b, dtype=float).reshape(-1)
        if b.shape != w.shape:
            raise DimensionError('w has dimension {0} but b has dimension {1}'.format(w.shape[0], b.shape[0]))
        if not np.any(w != 0):
            raise DegenerateClassifier('Weight vector w must not be all zero')
        if provenance not in PROVENANCES:
            raise PreconditionError('Unknown classifier provenance: {0}'.format(provenance))
        self.w = w
        self.b = b
        self.provenance = provenance

    @property
    def dim(self):
        return self.w.shape[0]

    def decision_values(self, points):
        points = np.asarray(points, dtype=float)
        if points.shape[-1] != self.dim:
            raise DimensionError('Expected points of dimension {0}, got {1}'.format(self.dim, points.shape[-1]))
        return (points - self.b) @ self.w

    def predict(self, points):
        values = self.decision_values(points)
        return np.where(values >= 0, 1, -1)

    def scaled(self, factor):
        return LinearClassifier(self.w * factor, self.b, provenance=self.provenance)

    def to_dict(self):
        return {'w': float_list(self.w), 'b': float_list(self.b), 'provenance': self.provenance}

    def to_json(self):
        return json.dumps(self.to_dict(), allow_nan=False)

    @staticmethod
    def from_dict(data):
        return LinearClassifier(data['w'], data['b'], provenance=data.get('provenance', EXPLICIT))

    def __repr__(self):
        return 'LinearClassifier(dim={0}, provenance={1})'.format(self.dim, self.provenance)


class PseudoLabelReport():

    def __init__(self, labels):
        self.labels = np.asarray(labels).reshape(-1).astype(np.int64)
        self.n_pos = int(np.count_nonzero(self.labels == 1))
        self.n_neg = int(np.count_nonzero(self.labels == -1))
        if self.n_pos + self.n_neg != self.labels.shape[0]:
            raise PreconditionError('Pseudo-labels must contain only +1 and -1')

    def __repr__(self):
        return 'PseudoLabelReport(n_pos={0}, n_neg={1})'.format(self.n_pos, self.n_neg)
