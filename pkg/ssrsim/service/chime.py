import logging
import math
import numpy as np
from ssrsim.exceptions import CollapsedResponsibilities, PreconditionError, DimensionError
from ssrsim.model.chime import ChimeState, SupportEstimate, VARIANCE_SCALED

logger = logging.getLogger(__name__)

EXPONENT_CLAMP = 700.0
POWER_ITERATIONS = 1000
POWER_TOLERANCE = 1e-12
COLLAPSE_TOLERANCE = 1e-12

_GAMMA_LOW = np.finfo(float).tiny
_GAMMA_HIGH = 1.0 - np.finfo(float).epsneg

def soft_threshold(v, lam):
    """
    Proximal map of lam * |.|_1: sign(v) * max(|v| - lam, 0)
    """
    if not lam >= 0:
        raise PreconditionError('lambda must be nonnegative, got {0}'.format(lam))
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - lam, 0.0)

def two_s_norm(u, s):
    """
    l2 norm of the s largest-magnitude entries of u
    """
    magnitudes = np.sort(np.abs(np.asarray(u, dtype=float)))[::-1]
    return float(np.linalg.norm(magnitudes[:int(s)]))

def penalty_floor(cfg, dim, n):
    return cfg.c_lambda * math.sqrt(math.log(dim) / n)

def e_step(state, data, sigma, cfg):
    """
    Responsibilities omega / (omega + (1 - omega) exp((mu2 - mu1)^T (x - (mu1 + mu2) / 2))).
    In variance_scaled mode the exponent is divided by sigma^2
    """
    if not 0 < state.omega < 1:
        raise PreconditionError('omega must lie in (0, 1), got {0}'.format(state.omega))
    if data.dim != state.dim:
        raise DimensionError('State has dimension {0} but data has dimension {1}'.format(state.dim, data.dim))
    midpoint = (state.mu1_hat + state.mu2_hat) / 2
    exponent = (data.features - midpoint) @ (state.mu2_hat - state.mu1_hat)
    if cfg.sigma_scaling == VARIANCE_SCALED:
        if not sigma > 0:
            raise PreconditionError('variance_scaled responsibilities need sigma > 0, got {0}'.format(sigma))
        exponent = exponent / sigma ** 2
    exponent = np.clip(exponent, -EXPONENT_CLAMP, EXPONENT_CLAMP)
    gamma = state.omega / (state.omega + (1 - state.omega) * np.exp(exponent))
    return np.clip(gamma, _GAMMA_LOW, _GAMMA_HIGH)

def m_step(data, gamma):
    """
    omega' is the mean responsibility; mu1' is weighted by 1 - gamma and mu2' by gamma
    """
    gamma = np.asarray(gamma, dtype=float)
    n = data.n_rows
    total = float(np.sum(gamma))
    if total <= COLLAPSE_TOLERANCE or n - total <= COLLAPSE_TOLERANCE:
        raise CollapsedResponsibilities('Responsibilities collapsed onto one component (sum {0} over {1} rows)'.format(total, n))
    complement = 1.0 - gamma
    omega = total / n
    mu1 = (complement @ data.features) / float(np.sum(complement))
    mu2 = (gamma @ data.features) / total
    return omega, mu1, mu2

def principal_direction(centered, seed):
    """
    Top right singular vector of the centered data by power iteration from a
    seeded start. Returns None when the data carry no variance along it
    """
    scale = float(np.linalg.norm(centered))
    if scale == 0:
        return None
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(centered.shape[1])
    v /= np.linalg.norm(v)
    for _ in range(POWER_ITERATIONS):
        u = centered.T @ (centered @ v)
        norm = float(np.linalg.norm(u))
        if norm <= np.finfo(float).eps * scale ** 2:
            return None
        u /= norm
        converged = np.linalg.norm(u - v) < POWER_TOLERANCE
        v = u
        if converged:
            break
    # canonical sign: largest-magnitude entry positive
    if v[np.argmax(np.abs(v))] < 0:
        v = -v
    return v

def init_chime(data, cfg, seed):
    if data.n_rows < 2:
        raise PreconditionError('CHIME needs at least 2 rows, got {0}'.format(data.n_rows))
    dim = data.dim
    s = cfg.resolve_s(dim)
    omega = 0.5
    if cfg.init_means is not None:
        mu1, mu2 = cfg.init_means
        if mu1.shape[0] != dim or mu2.shape[0] != dim:
            raise DimensionError('Initial means must have dimension {0}'.format(dim))
    else:
        mean = np.mean(data.features, axis=0)
        centered = data.features - mean
        direction = principal_direction(centered, seed)
        if direction is None:
            logger.debug('No principal direction, falling back to the coordinate of maximal variance')
            direction = np.zeros(dim)
            direction[int(np.argmax(np.var(centered, axis=0)))] = 1.0
        spread = float(np.std(centered @ direction, ddof=1))
        mu1 = mean - direction * spread
        mu2 = mean + direction * spread
    lam = cfg.c1 * max(abs(omega), two_s_norm(mu1 - mu2, s)) / math.sqrt(s) + penalty_floor(cfg, dim, data.n_rows)
    beta = soft_threshold(mu1 - mu2, lam)
    return ChimeState(omega, mu1, mu2, beta, lam, 0)

def run_chime(data, sigma, cfg, seed):
    """
    EM with an l1-regularized discriminant; the penalty decays geometrically to
    c_lambda sqrt(log d / n) / (1 - kappa). The support estimate is the support
    of the final discriminant
    """
    state = init_chime(data, cfg, seed)
    floor = penalty_floor(cfg, data.dim, data.n_rows)
    trajectory = [(0, state.lam, int(np.count_nonzero(state.beta)))]
    for t in range(1, cfg.t_max + 1):
        gamma = e_step(state, data, sigma, cfg)
        try:
            omega, mu1, mu2 = m_step(data, gamma)
        except CollapsedResponsibilities as e:
            logger.warning('CHIME aborted at iteration {0}: {1}'.format(t, e.msg))
            e.trajectory = list(trajectory)
            e.state = state
            raise
        lam = cfg.kappa * state.lam + floor
        beta = soft_threshold(mu1 - mu2, lam)
        state = ChimeState(omega, mu1, mu2, beta, lam, t)
        trajectory.append((t, lam, int(np.count_nonzero(beta))))
    support = np.flatnonzero(state.beta)
    logger.debug('CHIME finished after {0} iterations with support size {1}'.format(cfg.t_max, support.shape[0]))
    return SupportEstimate(support, trajectory, state)
