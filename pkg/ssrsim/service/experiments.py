import logging
import math
import time
import numpy as np
from ssrsim.exceptions import (BoundViolation, CollapsedResponsibilities, DegenerateEstimator, DegenerateGap, DegeneratePseudoSplit,
                               DegenerateRunError, EmptySupport, PreconditionError)
from ssrsim.model.domain import DomainSpec
from ssrsim.model.experiment import RunRecord, SkippedRow, COLUMNS, ENHANCE, SPARSITY, GAP, IRRELEVANT, MEASURES
from ssrsim.model.measures import MeanQuadruple
from ssrsim.model.progress_events import RunStartedEvent, SeedCompletedEvent, RowSkippedEvent, RunCompletedEvent
from ssrsim.model.reports import AttackBudget
from ssrsim.service.chime import run_chime
from ssrsim.service.domain_distance import d_nu, wasserstein_dnu_bound, maximal_info_dnu_bound, maximal_info_upper_tau, hdiv_dnu_bound
from ssrsim.service.estimators import fit_supervised, fit_sparse, fit_pseudo_label_pipeline
from ssrsim.service.process import SeedPoolService, ProcessProperties
from ssrsim.service.progress_events import ProgressEventLogWriter
from ssrsim.service.robust_eval import closed_form_robust_error, standard_error
from ssrsim.service.sampling import sample_labeled, sample_unlabeled
from ssrsim.util.formatting import format_float
from ssrsim.util.seeds import derive_trial_seed, child_seed, block_generator

logger = logging.getLogger(__name__)

# failures that only invalidate the rows of one seed
ROW_ERRORS = (DegeneratePseudoSplit, DegenerateEstimator, EmptySupport, CollapsedResponsibilities)

# (1/d + 1/n_unlabeled) * sigma^2 / epsilon^2 when sigma is derived per epsilon
ENHANCE_RATIO = 0.01
# norm of the gap experiment's domain shift relative to the norm of the labeled mean
GAP_SHIFT_FRACTION = 0.2
BOUND_SLACK = 1e-9

def enhance_sigma(cfg, epsilon):
    if cfg.sigma is not None:
        return cfg.sigma
    return epsilon * math.sqrt(ENHANCE_RATIO / (1.0 / cfg.dim + 1.0 / cfg.n_unlabeled))

def sparsity_gap(cfg):
    """
    Minimal coordinate gap of the shifted domain: gap_multiplier * sigma * sqrt(2 m log d / n_unlabeled)
    """
    return cfg.gap_multiplier * cfg.sigma * math.sqrt(2 * cfg.support_size * math.log(cfg.dim) / cfg.n_unlabeled)

def sparsity_means(cfg):
    """
    Labeled positive mean (mean_scale on the support) and shifted positive mean.
    The shifted half-gaps grow linearly from gap / 2 to gap across the support
    """
    m = cfg.support_size
    gap = sparsity_gap(cfg)
    labeled = np.zeros(cfg.dim)
    labeled[:m] = cfg.mean_scale
    shifted = np.zeros(cfg.dim)
    if m == 1:
        shifted[0] = gap / 2
    else:
        shifted[:m] = gap * (1 + np.arange(m) / (m - 1)) / 2
    return labeled, shifted

def gap_means(dim):
    mean = np.ones(dim)
    alternating = np.where(np.arange(dim) % 2 == 0, 1.0, -1.0)
    shift = alternating * (GAP_SHIFT_FRACTION * np.linalg.norm(mean) / np.linalg.norm(alternating))
    return mean, mean + shift

def irrelevant_means(dim, a):
    mean = np.zeros(dim)
    mean[0] = 1.0
    shifted = np.zeros(dim)
    shifted[1] = 1.0 / a
    return mean, shifted

def _key(value):
    return format_float(value)

def _row(cfg, seed_column, seed, sweep_column, value, **cells):
    row = {name: None for name in COLUMNS[cfg.experiment]}
    row[seed_column] = seed
    row[sweep_column] = value
    row.update(cells)
    return row

def _reason(error):
    return '{0}: {1}'.format(type(error).__name__, error)

def _robust(clf, spec, epsilon):
    return closed_form_robust_error(clf, spec, AttackBudget(epsilon)).value

def enhance_trial(task):
    cfg, trial = task
    seed = derive_trial_seed(cfg.master_seed, cfg.experiment, trial)
    results = []
    for epsilon in cfg.epsilon_grid:
        key = _key(epsilon)
        sigma = enhance_sigma(cfg, epsilon)
        labeled_spec = DomainSpec.symmetric(2 * epsilon * np.ones(cfg.dim), sigma)
        shifted_spec = DomainSpec.symmetric(epsilon * np.ones(cfg.dim), sigma)
        try:
            labeler = fit_supervised(sample_labeled(labeled_spec, cfg.n_labeled, child_seed(seed, 'labeled:' + key)))
            same = fit_pseudo_label_pipeline(labeler, sample_unlabeled(labeled_spec, cfg.n_unlabeled, child_seed(seed, 'same:' + key)))
            shifted = fit_pseudo_label_pipeline(labeler, sample_unlabeled(shifted_spec, cfg.n_unlabeled, child_seed(seed, 'shifted:' + key)))
        except ROW_ERRORS as e:
            results.append((_row(cfg, 'seed', trial, 'epsilon', epsilon), _reason(e)))
            continue
        err_same = _robust(same, labeled_spec, epsilon)
        err_shifted = _robust(shifted, labeled_spec, epsilon)
        results.append((_row(cfg, 'seed', trial, 'epsilon', epsilon, err_same=err_same, err_shifted=err_shifted,
                             diff=err_same - err_shifted), None))
    return results

def sparsity_trial(task):
    cfg, trial = task
    seed = derive_trial_seed(cfg.master_seed, cfg.experiment, trial)
    labeled_mean, shifted_mean = sparsity_means(cfg)
    labeled_spec = DomainSpec.symmetric(labeled_mean, cfg.sigma)
    shifted_spec = DomainSpec.symmetric(shifted_mean, cfg.sigma)
    labeled = sample_labeled(labeled_spec, cfg.n_labeled, child_seed(seed, 'labeled'))
    unlabeled = sample_unlabeled(shifted_spec, cfg.n_unlabeled, child_seed(seed, 'unlabeled'))
    try:
        labeler = fit_supervised(labeled)
        semi = fit_pseudo_label_pipeline(labeler, unlabeled)
        if cfg.force_full_support:
            support = list(range(cfg.dim))
        else:
            support = run_chime(unlabeled, cfg.sigma, cfg.chime_config(), child_seed(seed, 'chime')).support
        sparse = fit_sparse(labeled, support)
    except ROW_ERRORS as e:
        reason = _reason(e)
        return [(_row(cfg, 'seed', trial, 'epsilon', epsilon), reason) for epsilon in cfg.epsilon_grid]
    recovered = list(support) == list(range(cfg.support_size))
    results = []
    for epsilon in cfg.epsilon_grid:
        err_semi = _robust(semi, labeled_spec, epsilon)
        err_sparse = _robust(sparse, labeled_spec, epsilon)
        results.append((_row(cfg, 'seed', trial, 'epsilon', epsilon, err_semi=err_semi, err_sparse=err_sparse,
                             diff=err_semi - err_sparse, support_recovered=recovered), None))
    return results

def gap_trial(task):
    cfg, trial = task
    seed = derive_trial_seed(cfg.master_seed, cfg.experiment, trial)
    mean, shifted_mean = gap_means(cfg.dim)
    labeled_spec = DomainSpec.symmetric(mean, cfg.sigma)
    shifted_spec = DomainSpec.symmetric(shifted_mean, cfg.sigma)
    shift = d_nu(MeanQuadruple(mean, -mean, shifted_mean, -shifted_mean))
    unlabeled = sample_unlabeled(shifted_spec, cfg.n_unlabeled, child_seed(seed, 'unlabeled'))
    results = []
    for n in cfg.sweep:
        n = int(n)
        try:
            labeler = fit_supervised(sample_labeled(labeled_spec, n, child_seed(seed, 'labeled:{0}'.format(n))))
            semi = fit_pseudo_label_pipeline(labeler, unlabeled)
        except ROW_ERRORS as e:
            results.append((_row(cfg, 'seed', trial, 'n', n), _reason(e)))
            continue
        results.append((_row(cfg, 'seed', trial, 'n', n,
                             err_std_sup=standard_error(labeler, labeled_spec).value,
                             err_rob_sup=_robust(labeler, labeled_spec, cfg.epsilon),
                             err_rob_semi=_robust(semi, labeled_spec, cfg.epsilon),
                             d_nu=shift), None))
    return results

def irrelevant_trial(task):
    cfg, trial = task
    seed = derive_trial_seed(cfg.master_seed, cfg.experiment, trial)
    mean, _ = irrelevant_means(cfg.dim, 1.0)
    labeled_spec = DomainSpec.symmetric(mean, cfg.sigma)
    labeled = sample_labeled(labeled_spec, cfg.n_labeled, child_seed(seed, 'labeled'))
    try:
        labeler = fit_supervised(labeled)
    except ROW_ERRORS as e:
        return [(_row(cfg, 'seed', trial, 'a', a), _reason(e)) for a in cfg.sweep]
    results = []
    for a in cfg.sweep:
        _, shifted_mean = irrelevant_means(cfg.dim, a)
        shifted_spec = DomainSpec.symmetric(shifted_mean, cfg.sigma)
        try:
            semi = fit_pseudo_label_pipeline(labeler, sample_unlabeled(shifted_spec, cfg.n_unlabeled, child_seed(seed, 'unlabeled:' + _key(a))))
        except ROW_ERRORS as e:
            results.append((_row(cfg, 'seed', trial, 'a', a), _reason(e)))
            continue
        results.append((_row(cfg, 'seed', trial, 'a', a, err_std=standard_error(semi, labeled_spec).value,
                             err_rob=_robust(semi, labeled_spec, cfg.epsilon)), None))
    return results

def measure_instance(cfg, seed, radius):
    """
    Random class means with each mean displaced by at most radius * gap / 2
    """
    rng = block_generator(seed, 0)
    mu1 = rng.standard_normal(cfg.dim)
    mu2 = rng.standard_normal(cfg.dim)
    limit = radius * np.linalg.norm(mu1 - mu2) / 2
    shifts = []
    for _ in range(2):
        direction = rng.standard_normal(cfg.dim)
        direction /= np.linalg.norm(direction)
        shifts.append(direction * limit * rng.random())
    return MeanQuadruple(mu1, mu2, mu1 + shifts[0], mu2 + shifts[1])

def measure_bounds(q, zeta):
    """
    Each bound evaluated at the smallest tau whose premise the instance meets.
    A bound is None when its preconditions fail
    """
    shift1, shift2 = q.shifts()
    largest = max(shift1, shift2)
    bounds = {}
    wasserstein = wasserstein_dnu_bound(largest, q)
    bounds['w_bound'] = wasserstein.bound
    bounds['w_refined'] = wasserstein.refined_bound
    bounds['mi_bound'] = None
    norm1 = float(np.linalg.norm(q.mu1))
    norm2 = float(np.linalg.norm(q.mu2))
    if norm1 > 0 and norm2 > 0:
        tau = 1 + max(shift1 / norm1, shift2 / norm2)
        if tau <= maximal_info_upper_tau(q):
            bounds['mi_bound'] = maximal_info_dnu_bound(tau, q).bound
    bounds['hdiv_bound'] = None
    tau = max(0.0, 1 - 4 * math.exp(-(largest / zeta) ** 2))
    try:
        bounds['hdiv_bound'] = hdiv_dnu_bound(tau, zeta, q).bound
    except PreconditionError:
        pass
    return bounds

def check_bounds(instance_id, shift, bounds):
    for name, bound in bounds.items():
        if bound is not None and bound + BOUND_SLACK * max(1.0, shift) < shift:
            raise BoundViolation('Instance {0}: {1} = {2} is below d_nu = {3}'.format(instance_id, name, bound, shift))

def measures_trial(task):
    cfg, trial = task
    seed = derive_trial_seed(cfg.master_seed, cfg.experiment, trial)
    results = []
    for index, radius in enumerate(cfg.sweep):
        instance_id = trial * len(cfg.sweep) + index
        q = measure_instance(cfg, child_seed(seed, 'instance:' + _key(radius)), radius)
        try:
            shift = d_nu(q)
        except DegenerateGap as e:
            results.append((_row(cfg, 'instance_id', instance_id, 'instance_id', instance_id), _reason(e)))
            continue
        bounds = measure_bounds(q, cfg.sigma)
        check_bounds(instance_id, shift, bounds)
        results.append((_row(cfg, 'instance_id', instance_id, 'd_nu', shift, **bounds), None))
    return results

TRIALS = {
    ENHANCE: enhance_trial,
    SPARSITY: sparsity_trial,
    GAP: gap_trial,
    IRRELEVANT: irrelevant_trial,
    MEASURES: measures_trial
}

SWEEP_COLUMNS = {
    ENHANCE: 'epsilon',
    SPARSITY: 'epsilon',
    GAP: 'n',
    IRRELEVANT: 'a',
    MEASURES: 'instance_id'
}

def _in_process_pool():
    properties = ProcessProperties()
    properties.use_process_pool = False
    return SeedPoolService(process_properties=properties)

def run_experiment(cfg, pool=None, event_writer=None):
    """
    Runs every seed of the configured experiment and collects the rows in seed
    order. Raises DegenerateRunError when every row was skipped
    """
    pool = pool if pool is not None else _in_process_pool()
    event_writer = event_writer if event_writer is not None else ProgressEventLogWriter()
    digest = cfg.digest()
    workers = pool.worker_count(cfg.n_seeds)
    logger.info('Running {0} experiment with {1} seeds on {2} workers (config digest {3})'.format(cfg.experiment, cfg.n_seeds, workers, digest))
    event_writer.add(RunStartedEvent(cfg.experiment, digest, cfg.n_seeds, workers))
    start = time.perf_counter()
    results = pool.map(TRIALS[cfg.experiment], [(cfg, trial) for trial in range(cfg.n_seeds)])
    rows = []
    skipped = []
    for trial, trial_results in enumerate(results):
        trial_skipped = 0
        for row, reason in trial_results:
            rows.append(row)
            if reason is not None:
                value = row[SWEEP_COLUMNS[cfg.experiment]]
                logger.warning('Skipped row for seed {0} at {1}: {2}'.format(trial, value, reason))
                skipped.append(SkippedRow(trial, value, reason))
                event_writer.add(RowSkippedEvent(trial, value, reason))
                trial_skipped += 1
        event_writer.add(SeedCompletedEvent(trial, len(trial_results), trial_skipped))
    wall_time = time.perf_counter() - start
    if rows and len(skipped) == len(rows):
        logger.error('Every row of the {0} experiment was skipped'.format(cfg.experiment))
        raise DegenerateRunError('All {0} rows of the {1} experiment were skipped, first reason: {2}'.format(len(rows), cfg.experiment, skipped[0].reason))
    record = RunRecord(cfg.experiment, digest, rows, skipped=skipped, wall_time=wall_time, workers=workers)
    event_writer.add(RunCompletedEvent(cfg.experiment, record.n_rows, len(skipped), wall_time))
    logger.info('Finished {0} experiment: {1} rows, {2} skipped, {3:.3f}s'.format(cfg.experiment, record.n_rows, len(skipped), wall_time))
    return record

def _require(cfg, experiment):
    if cfg.experiment != experiment:
        raise PreconditionError('Expected a {0} configuration, got {1}'.format(experiment, cfg.experiment))

def run_enhance_experiment(cfg, pool=None, event_writer=None):
    """
    Same-domain against shifted-domain unlabeled data with mu = 2 eps 1_d and shifted mean eps 1_d
    """
    _require(cfg, ENHANCE)
    return run_experiment(cfg, pool=pool, event_writer=event_writer)

def run_sparsity_experiment(cfg, pool=None, event_writer=None):
    """
    Plain pseudo-label pipeline against the CHIME support estimate followed by the sparse fit
    """
    _require(cfg, SPARSITY)
    return run_experiment(cfg, pool=pool, event_writer=event_writer)

def run_gap_experiment(cfg, pool=None, event_writer=None):
    """
    Supervised standard and robust error over a sweep of labeled sizes, with the
    semi-supervised robust error from a slightly shifted unlabeled domain
    """
    _require(cfg, GAP)
    return run_experiment(cfg, pool=pool, event_writer=event_writer)

def run_irrelevant_experiment(cfg, pool=None, event_writer=None):
    """
    Pseudo-labeling with unlabeled data whose classes differ only along a direction orthogonal to the labeled mean
    """
    _require(cfg, IRRELEVANT)
    return run_experiment(cfg, pool=pool, event_writer=event_writer)

def run_measures_report(cfg, pool=None, event_writer=None):
    _require(cfg, MEASURES)
    return run_experiment(cfg, pool=pool, event_writer=event_writer)

RUNNERS = {
    ENHANCE: run_enhance_experiment,
    SPARSITY: run_sparsity_experiment,
    GAP: run_gap_experiment,
    IRRELEVANT: run_irrelevant_experiment,
    MEASURES: run_measures_report
}
