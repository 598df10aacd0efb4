import json
import math
import numpy as np
from ssrsim.exceptions import ConfigError
from ssrsim.util.formatting import float_list

PAPER_LITERAL = 'paper_literal'
VARIANCE_SCALED = 'variance_scaled'

class ChimeConfig():
    """
    Constants of the sparse EM loop. s defaults to max(1, ceil(d / 10)) once the
    dimension is known
    """

    FIELDS = ('c1', 'c_lambda', 'kappa', 't_max', 's', 'sigma_scaling', 'init_means')

    def __init__(self, c1=0.5, c_lambda=1.0, kappa=0.3, t_max=30, s=None, sigma_scaling=VARIANCE_SCALED, init_means=None):
        if not c1 > 0:
            raise ConfigError('chime c1 must be positive, got {0}'.format(c1))
        if not c_lambda > 0:
            raise ConfigError('chime c_lambda must be positive, got {0}'.format(c_lambda))
        if not 0 < kappa < 1:
            raise ConfigError('chime kappa must lie in (0, 1), got {0}'.format(kappa))
        if int(t_max) < 1 or int(t_max) != t_max:
            raise ConfigError('chime t_max must be a positive integer, got {0}'.format(t_max))
        if s is not None and (int(s) < 1 or int(s) != s):
            raise ConfigError('chime s must be a positive integer, got {0}'.format(s))
        if sigma_scaling not in (PAPER_LITERAL, VARIANCE_SCALED):
            raise ConfigError('chime sigma_scaling must be {0} or {1}, got {2}'.format(PAPER_LITERAL, VARIANCE_SCALED, sigma_scaling))
        self.c1 = float(c1)
        self.c_lambda = float(c_lambda)
        self.kappa = float(kappa)
        self.t_max = int(t_max)
        self.s = None if s is None else int(s)
        self.sigma_scaling = sigma_scaling
        if init_means is not None:
            if len(init_means) != 2:
                raise ConfigError('chime init_means must hold exactly two mean vectors')
            init_means = tuple(np.asarray(m, dtype=float).reshape(-1) for m in init_means)
        self.init_means = init_means

    def resolve_s(self, dim):
        s = self.s if self.s is not None else max(1, math.ceil(dim / 10))
        if s > dim:
            raise ConfigError('chime s = {0} exceeds the dimension {1}'.format(s, dim))
        return s

    @staticmethod
    def from_dict(data):
        if data is None:
            return ChimeConfig()
        if not isinstance(data, dict):
            raise ConfigError('chime must be an object, got {0}'.format(type(data).__name__))
        unknown = sorted(set(data.keys()) - set(ChimeConfig.FIELDS))
        if unknown:
            raise ConfigError('Unknown chime fields: {0}'.format(', '.join(unknown)))
        return ChimeConfig(**data)

    def to_dict(self):
        data = {'c1': self.c1, 'c_lambda': self.c_lambda, 'kappa': self.kappa, 't_max': self.t_max,
                's': self.s, 'sigma_scaling': self.sigma_scaling}
        if self.init_means is not None:
            data['init_means'] = [float_list(m) for m in self.init_means]
        return data


class ChimeState():

    def __init__(self, omega, mu1_hat, mu2_hat, beta, lam, iteration):
        self.omega = float(omega)
        self.mu1_hat = np.asarray(mu1_hat, dtype=float)
        self.mu2_hat = np.asarray(mu2_hat, dtype=float)
        self.beta = np.asarray(beta, dtype=float)
        self.lam = float(lam)
        self.iteration = int(iteration)

    @property
    def dim(self):
        return self.mu1_hat.shape[0]

    def discriminant(self):
        return self.mu1_hat - self.mu2_hat

    def __repr__(self):
        return 'ChimeState(iteration={0}, omega={1}, lambda={2})'.format(self.iteration, self.omega, self.lam)


class SupportEstimate():

    def __init__(self, support, trajectory, final_state):
        self.support = sorted(int(j) for j in support)
        self.trajectory = [(int(t), float(lam), int(size)) for t, lam, size in trajectory]
        self.final_state = final_state

    def to_dict(self):
        return {'support': list(self.support), 'trajectory': [[t, lam, size] for t, lam, size in self.trajectory]}

    def to_json(self):
        return json.dumps(self.to_dict())

    def __repr__(self):
        return 'SupportEstimate(support={0})'.format(self.support)
