import io
import numpy as np
from ssrsim.exceptions import PreconditionError, ParseError

class Dataset():
    """
    Feature matrix with optional +1/-1 labels, plus the seed and spec digest it
    was generated from
    """

    def __init__(self, features, labels=None, seed=0, spec_digest=''):
        features = np.asarray(features, dtype=float)
        if features.ndim != 2:
            raise PreconditionError('features must be a 2-d matrix, got shape {0}'.format(features.shape))
        if labels is not None:
            labels = np.asarray(labels).reshape(-1).astype(np.int64)
            if labels.shape[0] != features.shape[0]:
                raise PreconditionError('labels length {0} does not match row count {1}'.format(labels.shape[0], features.shape[0]))
            if not np.all((labels == 1) | (labels == -1)):
                raise PreconditionError('labels must contain only +1 and -1')
        self.features = features
        self.labels = labels
        self.seed = int(seed)
        self.spec_digest = spec_digest

    @property
    def n_rows(self):
        return self.features.shape[0]

    @property
    def dim(self):
        return self.features.shape[1]

    @property
    def has_labels(self):
        return self.labels is not None

    def rows(self, indices):
        labels = self.labels[indices] if self.labels is not None else None
        return Dataset(self.features[indices], labels, seed=self.seed, spec_digest=self.spec_digest)

    def columns(self, indices):
        return Dataset(self.features[:, indices], self.labels, seed=self.seed, spec_digest=self.spec_digest)

    def without_labels(self):
        return Dataset(self.features, None, seed=self.seed, spec_digest=self.spec_digest)

    def header(self):
        names = ['f{0}'.format(j) for j in range(self.dim)]
        if self.has_labels:
            names.append('label')
        return ','.join(names)

    def write_csv(self, path):
        fmt = ['%.17g'] * self.dim
        table = self.features
        if self.has_labels:
            fmt.append('%d')
            table = np.column_stack([self.features, self.labels])
        with open(path, 'w', encoding='utf-8', newline='\n') as f:
            np.savetxt(f, table, fmt=fmt, delimiter=',', header=self.header(), comments='', newline='\n')

    @staticmethod
    def read_csv(path, seed=0, spec_digest=''):
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
        lines = text.split('\n')
        header = lines[0].strip().split(',') if lines else []
        if not header or header == ['']:
            raise ParseError('Dataset file {0} has no header row'.format(path))
        has_labels = header[-1] == 'label'
        feature_names = header[:-1] if has_labels else header
        if feature_names != ['f{0}'.format(j) for j in range(len(feature_names))]:
            raise ParseError('Unexpected dataset header in {0}: {1}'.format(path, lines[0]))
        try:
            table = np.loadtxt(io.StringIO('\n'.join(lines[1:])), delimiter=',', ndmin=2)
        except ValueError as e:
            raise ParseError('Malformed dataset file {0}: {1}'.format(path, str(e))) from e
        if table.size == 0:
            table = np.zeros((0, len(header)))
        if table.shape[1] != len(header):
            raise ParseError('Dataset file {0} has {1} columns, header names {2}'.format(path, table.shape[1], len(header)))
        if has_labels:
            return Dataset(table[:, :-1], table[:, -1].astype(np.int64), seed=seed, spec_digest=spec_digest)
        return Dataset(table, None, seed=seed, spec_digest=spec_digest)

    def __repr__(self):
        return 'Dataset(rows={0}, dim={1}, labeled={2}, seed={3})'.format(self.n_rows, self.dim, self.has_labels, self.seed)
