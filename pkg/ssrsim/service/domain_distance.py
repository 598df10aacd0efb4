import logging
import math
import numpy as np
from ssrsim.exceptions import DegenerateGap, PreconditionError, DimensionError
from ssrsim.model.measures import BoundReport, WASSERSTEIN, MAXIMAL_INFO, H_DIVERGENCE

logger = logging.getLogger(__name__)

def _ratio(numerator, denominator):
    if denominator <= 0:
        return math.inf
    return numerator / denominator

def _shifted_gap(q):
    gap = q.shifted_gap()
    if gap == 0:
        raise DegenerateGap('Shifted class means coincide, the shift measure is undefined')
    return gap

def d_nu(q):
    """
    Largest class-mean displacement divided by the shifted domain's class-mean gap
    """
    gap = _shifted_gap(q)
    shift1, shift2 = q.shifts()
    return max(shift1 / gap, shift2 / gap)

def gaussian_wasserstein(mean_a, mean_b):
    """
    Wasserstein distance between two Gaussians sharing one isotropic covariance
    """
    mean_a = np.asarray(mean_a, dtype=float)
    mean_b = np.asarray(mean_b, dtype=float)
    if mean_a.shape != mean_b.shape:
        raise DimensionError('Means have different dimensions {0} and {1}'.format(mean_a.shape, mean_b.shape))
    return float(np.linalg.norm(mean_a - mean_b))

def wasserstein_dnu_bound(tau, q):
    if not tau >= 0:
        raise PreconditionError('tau must be nonnegative, got {0}'.format(tau))
    bound = tau / _shifted_gap(q)
    refined = None
    gap = q.gap()
    if tau <= gap / 2:
        refined = _ratio(tau, gap - 2 * tau)
    return BoundReport(WASSERSTEIN, tau, bound, refined_bound=refined)

def maximal_info_upper_tau(q):
    norms = float(np.linalg.norm(q.mu1)) + float(np.linalg.norm(q.mu2))
    if norms == 0:
        return math.inf
    return 1 + q.gap() / (2 * norms)

def maximal_info_dnu_bound(tau, q):
    upper = maximal_info_upper_tau(q)
    if not 1 <= tau <= upper:
        raise PreconditionError('tau must lie in [1, {0}], got {1}'.format(upper, tau))
    norm1 = float(np.linalg.norm(q.mu1))
    norm2 = float(np.linalg.norm(q.mu2))
    excess = tau - 1
    bound = _ratio(excess * max(norm1, norm2), q.gap() - 2 * excess * (norm1 + norm2))
    if excess == 0:
        bound = 0.0
    return BoundReport(MAXIMAL_INFO, tau, bound)

def hdiv_alpha(tau, zeta):
    return zeta * math.sqrt(math.log(4 / (1 - tau)))

def hdiv_dnu_bound(tau, zeta, q):
    if not 0 <= tau < 1:
        raise PreconditionError('tau must lie in [0, 1), got {0}'.format(tau))
    if not zeta > 0:
        raise PreconditionError('zeta must be positive, got {0}'.format(zeta))
    alpha = hdiv_alpha(tau, zeta)
    bound = alpha / _shifted_gap(q)
    gap = q.gap()
    refined = None
    if tau <= 1 - 4 * math.exp(-gap ** 2 / (4 * zeta ** 2)):
        refined = _ratio(alpha, gap - 2 * alpha)
    return BoundReport(H_DIVERGENCE, tau, bound, refined_bound=refined, alpha=alpha)
