import logging
import math
import numpy as np
from scipy.special import erfc
from ssrsim.exceptions import ClosedFormUnavailable, DegenerateClassifier, AttackUnavailable, NoRobustDirection, DimensionError, PreconditionError
from ssrsim.model.classifier import LinearClassifier, EXPLICIT
from ssrsim.model.reports import AttackBudget, ErrorReport, CLOSED_FORM, MONTE_CARLO
from ssrsim.service.sampling import sample_labeled

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)

def q_tail(x):
    """
    Standard normal upper tail P(Z > x)
    """
    value = 0.5 * erfc(np.asarray(x, dtype=float) / SQRT2)
    if np.ndim(value) == 0:
        return float(value)
    return value

def _check_dimension(clf, dim):
    if clf.dim != dim:
        raise DimensionError('Classifier has dimension {0} but the domain has dimension {1}'.format(clf.dim, dim))

def closed_form_robust_error(clf, spec, budget):
    """
    Exact linf-robust error of sgn(w^T (x - b)) on a Gaussian pair:
    q * Q((w^T(mu1 - b) - eps |w|_1) / (sigma |w|_2)) + (1 - q) * Q((w^T(b - mu2) - eps |w|_1) / (sigma |w|_2))
    """
    if not spec.is_gaussian:
        raise ClosedFormUnavailable('Closed-form error needs gaussian noise, domain has {0}'.format(spec.noise_family))
    if not spec.feature_map.is_identity:
        raise ClosedFormUnavailable('Closed-form error needs the identity feature map, domain has {0}'.format(spec.feature_map.kind))
    if not spec.sigma > 0:
        raise ClosedFormUnavailable('Closed-form error needs sigma > 0')
    _check_dimension(clf, spec.dim)
    norm2 = float(np.linalg.norm(clf.w))
    if norm2 == 0:
        raise DegenerateClassifier('Weight vector w must not be all zero')
    penalty = budget.epsilon * float(np.sum(np.abs(clf.w)))
    scale = spec.sigma * norm2
    arg_pos = (float(clf.w @ (spec.mean_pos - clf.b)) - penalty) / scale
    arg_neg = (float(clf.w @ (clf.b - spec.mean_neg)) - penalty) / scale
    value = spec.mixing_pos * q_tail(arg_pos) + (1 - spec.mixing_pos) * q_tail(arg_neg)
    return ErrorReport(min(1.0, max(0.0, value)), budget.kind, CLOSED_FORM)

def standard_error(clf, spec):
    return closed_form_robust_error(clf, spec, AttackBudget(0.0))

def worst_case_perturbation(clf, x, y, budget):
    """
    delta = -y * eps * sign(w), zero on coordinates where w is zero. It lowers
    the margin y w^T (x - b) by exactly eps |w|_1
    """
    x = np.asarray(x, dtype=float)
    _check_dimension(clf, x.shape[-1])
    if y not in (1, -1):
        raise PreconditionError('label must be +1 or -1, got {0}'.format(y))
    return -y * budget.epsilon * np.sign(clf.w)

def robust_margin(clf, x, y, budget):
    return y * float(clf.decision_values(x)) - budget.epsilon * float(np.sum(np.abs(clf.w)))

def monte_carlo_error(clf, spec, budget, n_samples, seed):
    """
    Misclassification rate of labeled samples after the worst-case linf
    perturbation, with its binomial standard error
    """
    if int(n_samples) < 100:
        raise PreconditionError('n_samples must be at least 100, got {0}'.format(n_samples))
    if budget.epsilon > 0 and not spec.feature_map.is_identity:
        raise AttackUnavailable('Exact attacks need the identity feature map, domain has {0}'.format(spec.feature_map.kind))
    _check_dimension(clf, spec.dim)
    data = sample_labeled(spec, int(n_samples), seed)
    labels = data.labels
    perturbed = data.features - (labels[:, None] * budget.epsilon) * np.sign(clf.w)[None, :]
    wrong = np.count_nonzero(clf.predict(perturbed) != labels)
    p_hat = wrong / data.n_rows
    std_err = math.sqrt(p_hat * (1 - p_hat) / data.n_rows)
    logger.debug('Monte Carlo error {0} +/- {1} over {2} samples'.format(p_hat, std_err, data.n_rows))
    return ErrorReport(p_hat, budget.kind, MONTE_CARLO, std_err=std_err)

def hard_threshold(mu, epsilon):
    mu = np.asarray(mu, dtype=float)
    return np.sign(mu) * np.maximum(np.abs(mu) - epsilon, 0.0)

def optimal_robust_direction(mu, epsilon):
    """
    Unit direction maximizing mu^T w - eps |w|_1, which is the thresholded mean
    """
    mu = np.asarray(mu, dtype=float)
    if epsilon >= np.max(np.abs(mu)):
        raise NoRobustDirection('epsilon {0} is not below the largest mean coordinate {1}'.format(epsilon, np.max(np.abs(mu))))
    thresholded = hard_threshold(mu, epsilon)
    return LinearClassifier(thresholded / np.linalg.norm(thresholded), np.zeros_like(mu), provenance=EXPLICIT)
