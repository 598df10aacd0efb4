import logging
import numpy as np
from ssrsim.exceptions import PreconditionError
from ssrsim.model.dataset import Dataset
from ssrsim.model.domain import SeparationReport
from ssrsim.util.seeds import block_generator, block_ranges

logger = logging.getLogger(__name__)

def sample_block(spec, seed, block, rows):
    """
    Draws one block of rows: first a uniform per row choosing the component,
    then the noise matrix. Returns raw points (before the feature map) and the
    hidden component labels
    """
    rng = block_generator(seed, block)
    positive = rng.random(rows) < spec.mixing_pos
    noise = spec.draw_noise(rng, rows)
    means = np.where(positive[:, None], spec.mean_pos[None, :], spec.mean_neg[None, :])
    components = np.where(positive, 1, -1).astype(np.int64)
    return means + noise, components

def sample_mixture(spec, n, seed):
    """
    Features (feature map applied) and the hidden component of every row
    """
    if int(n) < 1:
        raise PreconditionError('n must be at least 1, got {0}'.format(n))
    n = int(n)
    features = np.empty((n, spec.dim))
    components = np.empty(n, dtype=np.int64)
    for block, start, stop in block_ranges(n):
        raw, comp = sample_block(spec, seed, block, stop - start)
        features[start:stop] = spec.feature_map.apply(raw)
        components[start:stop] = comp
    return features, components

def sample_labeled(spec, n, seed):
    features, labels = sample_mixture(spec, n, seed)
    logger.debug('Sampled {0} labeled rows from {1} with seed {2}'.format(n, spec, seed))
    return Dataset(features, labels, seed=seed, spec_digest=spec.digest())

def sample_unlabeled(spec, n, seed):
    features, _ = sample_mixture(spec, n, seed)
    logger.debug('Sampled {0} unlabeled rows from {1} with seed {2}'.format(n, spec, seed))
    return Dataset(features, None, seed=seed, spec_digest=spec.digest())

def apply_feature_map(feature_map, points):
    return feature_map.apply(points)

def separation_stats(spec, mc_samples, seed):
    """
    Estimates the distance between the two component means in feature space.
    With the identity map the means are known exactly and no sampling is done
    """
    if int(mc_samples) < 2:
        raise PreconditionError('mc_samples must be at least 2, got {0}'.format(mc_samples))
    mc_samples = int(mc_samples)
    if spec.feature_map.is_identity:
        separation = np.linalg.norm(spec.mean_pos - spec.mean_neg)
        return SeparationReport(separation, spec.dim, mc_samples)
    sum_pos = np.zeros(spec.dim)
    sum_neg = np.zeros(spec.dim)
    for block, start, stop in block_ranges(mc_samples):
        rng = block_generator(seed, block)
        rows = stop - start
        sum_pos += spec.feature_map.apply(spec.mean_pos[None, :] + spec.draw_noise(rng, rows)).sum(axis=0)
        sum_neg += spec.feature_map.apply(spec.mean_neg[None, :] + spec.draw_noise(rng, rows)).sum(axis=0)
    separation = np.linalg.norm(sum_pos / mc_samples - sum_neg / mc_samples)
    logger.debug('Monte Carlo separation {0} over {1} samples'.format(separation, mc_samples))
    return SeparationReport(separation, spec.dim, mc_samples)
