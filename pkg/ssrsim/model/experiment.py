import json
import math
import numbers
from ssrsim.exceptions import ConfigError
from ssrsim.model.chime import ChimeConfig
from ssrsim.util.seeds import content_digest

ENHANCE = 'enhance'
SPARSITY = 'sparsity'
GAP = 'gap'
IRRELEVANT = 'irrelevant'
MEASURES = 'measures'

EXPERIMENTS = (ENHANCE, SPARSITY, GAP, IRRELEVANT, MEASURES)

COLUMNS = {
    ENHANCE: ('seed', 'epsilon', 'err_same', 'err_shifted', 'diff'),
    SPARSITY: ('seed', 'epsilon', 'err_semi', 'err_sparse', 'diff', 'support_recovered'),
    GAP: ('seed', 'n', 'err_std_sup', 'err_rob_sup', 'err_rob_semi', 'd_nu'),
    IRRELEVANT: ('seed', 'a', 'err_std', 'err_rob'),
    MEASURES: ('instance_id', 'd_nu', 'w_bound', 'w_refined', 'mi_bound', 'hdiv_bound')
}

# experiments whose rows are indexed by the sweep list instead of the epsilon grid
SWEPT_EXPERIMENTS = (GAP, IRRELEVANT, MEASURES)

MAX_SEED = 2 ** 64

def _is_real(value):
    return isinstance(value, numbers.Real) and not isinstance(value, bool) and math.isfinite(value)

def _is_integer(value):
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)

def _real_list(name, values):
    if not isinstance(values, (list, tuple)) or len(values) == 0:
        raise ConfigError('{0} must be a nonempty list'.format(name))
    for value in values:
        if not _is_real(value):
            raise ConfigError('{0} must only hold finite reals, got {1}'.format(name, value))
    return [float(v) for v in values]

def _strictly_increasing(values):
    return all(a < b for a, b in zip(values, values[1:]))


class ExperimentConfig():
    """
    Everything a run depends on. Rows of a run are a pure function of this
    configuration, output_dir excepted
    """

    FIELDS = ('experiment', 'dim', 'sigma', 'epsilon_grid', 'n_labeled', 'n_unlabeled', 'n_seeds', 'master_seed',
              'chime', 'output_dir', 'sweep', 'support_size', 'gap_multiplier', 'mean_scale', 'force_full_support')
    REQUIRED = ('experiment', 'dim', 'epsilon_grid', 'n_labeled', 'n_unlabeled', 'n_seeds', 'master_seed')

    def __init__(self, experiment, dim, sigma, epsilon_grid, n_labeled, n_unlabeled, n_seeds, master_seed, chime=None,
                 output_dir=None, sweep=None, support_size=10, gap_multiplier=4.0, mean_scale=0.5, force_full_support=False):
        if experiment not in EXPERIMENTS:
            raise ConfigError('experiment must be one of {0}, got {1}'.format(', '.join(EXPERIMENTS), experiment))
        self.experiment = experiment
        if not _is_integer(dim) or dim < 1:
            raise ConfigError('dim must be a positive integer, got {0}'.format(dim))
        self.dim = int(dim)
        if sigma is None:
            if experiment != ENHANCE:
                raise ConfigError('sigma may only be null for the enhance experiment')
            self.sigma = None
        else:
            if not _is_real(sigma) or sigma <= 0:
                raise ConfigError('sigma must be a positive real, got {0}'.format(sigma))
            self.sigma = float(sigma)
        self.epsilon_grid = _real_list('epsilon_grid', epsilon_grid)
        if any(e < 0 for e in self.epsilon_grid):
            raise ConfigError('epsilon_grid must be nonnegative')
        if not _strictly_increasing(self.epsilon_grid):
            raise ConfigError('epsilon_grid must be strictly increasing')
        if self.sigma is None and self.epsilon_grid[0] == 0:
            raise ConfigError('sigma must be set explicitly when epsilon_grid contains 0')
        for name, value in (('n_labeled', n_labeled), ('n_unlabeled', n_unlabeled), ('n_seeds', n_seeds)):
            if not _is_integer(value) or value < 1:
                raise ConfigError('{0} must be a positive integer, got {1}'.format(name, value))
        self.n_labeled = int(n_labeled)
        self.n_unlabeled = int(n_unlabeled)
        self.n_seeds = int(n_seeds)
        if not _is_integer(master_seed) or not 0 <= master_seed < MAX_SEED:
            raise ConfigError('master_seed must be an unsigned 64-bit integer, got {0}'.format(master_seed))
        self.master_seed = int(master_seed)
        if chime is not None and not isinstance(chime, ChimeConfig):
            chime = ChimeConfig.from_dict(chime)
        self.chime = chime
        if output_dir is not None and not isinstance(output_dir, str):
            raise ConfigError('output_dir must be a string path, got {0}'.format(output_dir))
        self.output_dir = output_dir
        self.sweep = None if sweep is None else _real_list('sweep', sweep)
        if not _is_integer(support_size) or not 1 <= support_size <= self.dim:
            raise ConfigError('support_size must be an integer in [1, {0}], got {1}'.format(self.dim, support_size))
        self.support_size = int(support_size)
        if not _is_real(gap_multiplier) or gap_multiplier <= 0:
            raise ConfigError('gap_multiplier must be a positive real, got {0}'.format(gap_multiplier))
        self.gap_multiplier = float(gap_multiplier)
        if not _is_real(mean_scale) or mean_scale <= 0:
            raise ConfigError('mean_scale must be a positive real, got {0}'.format(mean_scale))
        self.mean_scale = float(mean_scale)
        if not isinstance(force_full_support, bool):
            raise ConfigError('force_full_support must be a boolean, got {0}'.format(force_full_support))
        self.force_full_support = force_full_support
        self._validate_experiment()

    def _validate_experiment(self):
        if self.experiment in (ENHANCE, SPARSITY, IRRELEVANT) and self.n_labeled % 2 != 0:
            raise ConfigError('n_labeled must be even, got {0}'.format(self.n_labeled))
        if self.experiment in (GAP, IRRELEVANT) and len(self.epsilon_grid) != 1:
            raise ConfigError('The {0} experiment takes a single epsilon, got {1}'.format(self.experiment, self.epsilon_grid))
        if self.experiment in SWEPT_EXPERIMENTS and self.sweep is None:
            raise ConfigError('The {0} experiment needs a sweep list'.format(self.experiment))
        if self.sweep is not None and not _strictly_increasing(self.sweep):
            raise ConfigError('sweep must be strictly increasing')
        if self.experiment == GAP:
            for n in self.sweep:
                if n != int(n) or n < 2 or int(n) % 2 != 0:
                    raise ConfigError('gap sweep values must be even integers of at least 2, got {0}'.format(n))
        if self.experiment == IRRELEVANT and self.sweep[0] <= 0:
            raise ConfigError('irrelevant sweep values (a) must be positive')
        if self.experiment == IRRELEVANT and self.dim < 2:
            raise ConfigError('irrelevant needs dim of at least 2, got {0}'.format(self.dim))
        if self.experiment == MEASURES and self.sweep[0] < 0:
            raise ConfigError('measures sweep values (relative shift radius) must be nonnegative')
        if self.experiment == SPARSITY and self.n_unlabeled < 2:
            raise ConfigError('sparsity needs at least 2 unlabeled rows')
        if self.experiment == SPARSITY:
            self.chime_config().resolve_s(self.dim)

    @property
    def columns(self):
        return COLUMNS[self.experiment]

    @property
    def grid(self):
        if self.experiment in SWEPT_EXPERIMENTS:
            return list(self.sweep)
        return list(self.epsilon_grid)

    @property
    def epsilon(self):
        return self.epsilon_grid[0]

    def chime_config(self):
        return self.chime if self.chime is not None else ChimeConfig()

    def with_overrides(self, n_seeds=None, output_dir=None):
        data = self.to_dict()
        if n_seeds is not None:
            data['n_seeds'] = n_seeds
        if output_dir is not None:
            data['output_dir'] = output_dir
        return ExperimentConfig.from_dict(data)

    def to_dict(self):
        return {
            'experiment': self.experiment,
            'dim': self.dim,
            'sigma': self.sigma,
            'epsilon_grid': list(self.epsilon_grid),
            'n_labeled': self.n_labeled,
            'n_unlabeled': self.n_unlabeled,
            'n_seeds': self.n_seeds,
            'master_seed': self.master_seed,
            'chime': None if self.chime is None else self.chime.to_dict(),
            'output_dir': self.output_dir,
            'sweep': None if self.sweep is None else list(self.sweep),
            'support_size': self.support_size,
            'gap_multiplier': self.gap_multiplier,
            'mean_scale': self.mean_scale,
            'force_full_support': self.force_full_support
        }

    def digest(self):
        data = self.to_dict()
        data.pop('output_dir')
        return content_digest(data)

    @staticmethod
    def from_dict(data):
        if not isinstance(data, dict):
            raise ConfigError('Experiment configuration must be a JSON object')
        unknown = sorted(set(data.keys()) - set(ExperimentConfig.FIELDS))
        if unknown:
            raise ConfigError('Unknown experiment configuration fields: {0}'.format(', '.join(unknown)))
        missing = [key for key in ExperimentConfig.REQUIRED if key not in data]
        if missing:
            raise ConfigError('Missing experiment configuration fields: {0}'.format(', '.join(missing)))
        if 'sigma' not in data:
            raise ConfigError('Missing experiment configuration fields: sigma')
        return ExperimentConfig(**data)

    @staticmethod
    def from_json(text):
        try:
            data = json.loads(text)
        except ValueError as e:
            raise ConfigError('Experiment configuration is not valid JSON: {0}'.format(e)) from e
        return ExperimentConfig.from_dict(data)

    @staticmethod
    def from_file(path):
        try:
            with open(path, 'r', encoding='utf-8') as f:
                text = f.read()
        except OSError as e:
            raise ConfigError('Could not read experiment configuration {0}: {1}'.format(path, e)) from e
        return ExperimentConfig.from_json(text)

    def __repr__(self):
        return 'ExperimentConfig(experiment={0}, digest={1})'.format(self.experiment, self.digest())


class SkippedRow():

    def __init__(self, seed, value, reason):
        self.seed = int(seed)
        self.value = value
        self.reason = reason

    def to_dict(self):
        return {'seed': self.seed, 'value': self.value, 'reason': self.reason}


class RunRecord():
    """
    Rows of one run in seed order. Skipped rows keep their sweep cells and
    leave every error cell empty
    """

    def __init__(self, experiment, config_digest, rows, skipped=None, wall_time=0.0, workers=1):
        self.experiment = experiment
        self.columns = COLUMNS[experiment]
        for row in rows:
            if set(row.keys()) != set(self.columns):
                raise ValueError('Row keys {0} do not match the {1} columns'.format(sorted(row.keys()), experiment))
        self.config_digest = config_digest
        self.rows = list(rows)
        self.skipped = list(skipped or [])
        self.wall_time = float(wall_time)
        self.workers = int(workers)

    @property
    def n_rows(self):
        return len(self.rows)

    def column(self, name):
        return [row[name] for row in self.rows]

    def summary(self):
        return {
            'experiment': self.experiment,
            'config_digest': self.config_digest,
            'rows': self.n_rows,
            'skipped': [s.to_dict() for s in self.skipped],
            'wall_time': self.wall_time,
            'workers': self.workers
        }

    def __repr__(self):
        return 'RunRecord(experiment={0}, rows={1}, skipped={2})'.format(self.experiment, self.n_rows, len(self.skipped))
