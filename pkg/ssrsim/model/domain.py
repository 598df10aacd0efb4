import math
import numpy as np
from ssrsim.exceptions import PreconditionError
from ssrsim.util.seeds import content_digest
from ssrsim.util.formatting import float_list

IDENTITY = 'identity'
SCALED_SATURATING = 'scaled_saturating'

GAUSSIAN = 'gaussian'
BOUNDED_UNIFORM = 'bounded_uniform'

class FeatureMap():
    """
    Basis map applied to raw points before any classifier sees them. Both
    built-in maps are 1-Lipschitz in the l2 and linf norms
    """

    @staticmethod
    def identity():
        return FeatureMap(IDENTITY)

    @staticmethod
    def scaled_saturating(c):
        return FeatureMap(SCALED_SATURATING, c=c)

    @staticmethod
    def from_dict(data):
        if data is None:
            return FeatureMap.identity()
        return FeatureMap(data.get('kind', IDENTITY), c=data.get('c', None))

    def __init__(self, kind, c=None):
        if kind not in (IDENTITY, SCALED_SATURATING):
            raise PreconditionError('Unknown feature map kind: {0}'.format(kind))
        if kind == SCALED_SATURATING:
            if c is None or not c > 0:
                raise PreconditionError('scaled_saturating map requires a positive scale c, got {0}'.format(c))
            c = float(c)
        else:
            c = None
        self.kind = kind
        self.c = c
        self.lipschitz_l2 = 1.0
        self.lipschitz_linf = 1.0

    @property
    def is_identity(self):
        return self.kind == IDENTITY

    def apply(self, points):
        points = np.asarray(points, dtype=float)
        if self.is_identity:
            return points
        return self.c * np.tanh(points / self.c)

    def to_dict(self):
        data = {'kind': self.kind}
        if self.c is not None:
            data['c'] = self.c
        return data

    def __eq__(self, other):
        return isinstance(other, FeatureMap) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return 'FeatureMap({0})'.format(self.to_dict())


class DomainSpec():
    """
    Two-component mixture over feature space: y = +1 with probability
    mixing_pos, raw point = mean of the drawn component + noise, features =
    feature_map(raw). Gaussian noise is N(0, sigma^2 I); bounded_uniform noise
    is componentwise uniform on [-half_width, half_width] and ignores sigma
    """

    @staticmethod
    def symmetric(mean, sigma, noise_family=GAUSSIAN, half_width=None, feature_map=None):
        mean = np.asarray(mean, dtype=float)
        return DomainSpec(mean.shape[0], mean, -mean, sigma, mixing_pos=0.5, noise_family=noise_family,
                          half_width=half_width, feature_map=feature_map)

    @staticmethod
    def from_dict(data):
        return DomainSpec(data['dim'], data['mean_pos'], data['mean_neg'], data['sigma'],
                          mixing_pos=data.get('mixing_pos', 0.5),
                          noise_family=data.get('noise_family', GAUSSIAN),
                          half_width=data.get('half_width', None),
                          feature_map=FeatureMap.from_dict(data.get('feature_map', None)))

    def __init__(self, dim, mean_pos, mean_neg, sigma, mixing_pos=0.5, noise_family=GAUSSIAN, half_width=None, feature_map=None):
        if int(dim) < 1:
            raise PreconditionError('dim must be a positive integer, got {0}'.format(dim))
        self.dim = int(dim)
        self.mean_pos = np.asarray(mean_pos, dtype=float).reshape(-1)
        self.mean_neg = np.asarray(mean_neg, dtype=float).reshape(-1)
        if self.mean_pos.shape[0] != self.dim or self.mean_neg.shape[0] != self.dim:
            raise PreconditionError('Component means must have dimension {0}, got {1} and {2}'.format(
                self.dim, self.mean_pos.shape[0], self.mean_neg.shape[0]))
        if not (sigma >= 0 and math.isfinite(sigma)):
            raise PreconditionError('sigma must be a finite nonnegative real, got {0}'.format(sigma))
        self.sigma = float(sigma)
        if not 0 <= mixing_pos <= 1:
            raise PreconditionError('mixing_pos must lie in [0, 1], got {0}'.format(mixing_pos))
        self.mixing_pos = float(mixing_pos)
        if noise_family == GAUSSIAN:
            half_width = None
        elif noise_family == BOUNDED_UNIFORM:
            if half_width is None or not half_width > 0:
                raise PreconditionError('bounded_uniform noise requires a positive half_width, got {0}'.format(half_width))
            half_width = float(half_width)
        else:
            raise PreconditionError('Unknown noise family: {0}'.format(noise_family))
        self.noise_family = noise_family
        self.half_width = half_width
        self.feature_map = feature_map if feature_map is not None else FeatureMap.identity()

    @property
    def is_gaussian(self):
        return self.noise_family == GAUSSIAN

    def draw_noise(self, rng, rows):
        if self.noise_family == GAUSSIAN:
            return self.sigma * rng.standard_normal((rows, self.dim))
        return rng.uniform(-self.half_width, self.half_width, size=(rows, self.dim))

    def to_dict(self):
        data = {
            'dim': self.dim,
            'mean_pos': float_list(self.mean_pos),
            'mean_neg': float_list(self.mean_neg),
            'sigma': self.sigma,
            'mixing_pos': self.mixing_pos,
            'noise_family': self.noise_family,
            'feature_map': self.feature_map.to_dict()
        }
        if self.half_width is not None:
            data['half_width'] = self.half_width
        return data

    def digest(self):
        return content_digest(self.to_dict())

    def __repr__(self):
        return 'DomainSpec(dim={0}, sigma={1}, mixing_pos={2}, noise_family={3}, feature_map={4})'.format(
            self.dim, self.sigma, self.mixing_pos, self.noise_family, self.feature_map.kind)


class SeparationReport():

    def __init__(self, separation, dim, mc_samples):
        self.separation = float(separation)
        self.alpha = self.separation / (2 * math.sqrt(dim))
        self.mc_samples = int(mc_samples)

    def to_dict(self):
        return {'separation': self.separation, 'alpha': self.alpha, 'mc_samples': self.mc_samples}
