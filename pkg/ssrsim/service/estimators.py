import logging
import numpy as np
from ssrsim.exceptions import SplitError, DegenerateEstimator, DegeneratePseudoSplit, EmptySupport, PreconditionError, DimensionError
from ssrsim.model.classifier import LinearClassifier, PseudoLabelReport, SUPERVISED, SEMI_SUPERVISED, SPARSE

logger = logging.getLogger(__name__)

def fit_supervised(data, provenance=SUPERVISED):
    """
    Mean-difference estimator on a labeled set of 2n rows: w is the mean of
    y_i x_i over the first n rows, b the plain mean of the last n rows
    """
    if not data.has_labels:
        raise PreconditionError('fit_supervised requires a labeled dataset')
    rows = data.n_rows
    if rows < 2 or rows % 2 != 0:
        raise SplitError('Labeled dataset must have an even number of rows (at least 2), got {0}'.format(rows))
    half = rows // 2
    w = np.mean(data.labels[:half, None] * data.features[:half], axis=0)
    b = np.mean(data.features[half:], axis=0)
    if not np.any(w != 0):
        raise DegenerateEstimator('Supervised estimate of w is the zero vector')
    return LinearClassifier(w, b, provenance=provenance)

def predict(clf, x):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise DimensionError('predict expects a single point, got shape {0}'.format(x.shape))
    return int(clf.predict(x))

def pseudo_label(clf, unlabeled):
    if unlabeled.has_labels:
        raise PreconditionError('pseudo_label expects an unlabeled dataset')
    report = PseudoLabelReport(clf.predict(unlabeled.features))
    logger.debug('Pseudo-labeled {0} rows: {1} positive, {2} negative'.format(unlabeled.n_rows, report.n_pos, report.n_neg))
    return report

def fit_semi_supervised(report, unlabeled):
    """
    w = (m_pos - m_neg) / 2 and b = (m_pos + m_neg) / 2 over the pseudo-classes
    """
    if report.labels.shape[0] != unlabeled.n_rows:
        raise DimensionError('Pseudo-label count {0} does not match row count {1}'.format(report.labels.shape[0], unlabeled.n_rows))
    if report.n_pos == 0 or report.n_neg == 0:
        raise DegeneratePseudoSplit('Pseudo-labels put every row in one class ({0} positive, {1} negative)'.format(report.n_pos, report.n_neg),
                                    n_pos=report.n_pos, n_neg=report.n_neg)
    positive = report.labels == 1
    mean_pos = np.mean(unlabeled.features[positive], axis=0)
    mean_neg = np.mean(unlabeled.features[~positive], axis=0)
    w = (mean_pos - mean_neg) / 2
    b = (mean_pos + mean_neg) / 2
    if not np.any(w != 0):
        raise DegenerateEstimator('Semi-supervised estimate of w is the zero vector')
    return LinearClassifier(w, b, provenance=SEMI_SUPERVISED)

def fit_sparse(labeled, support):
    """
    fit_supervised restricted to the columns in support, embedded back into
    full-length vectors with zeros elsewhere
    """
    support = np.asarray(sorted(set(int(j) for j in support)), dtype=np.int64)
    if support.shape[0] == 0:
        raise EmptySupport('Support set is empty')
    if support[0] < 0 or support[-1] >= labeled.dim:
        raise PreconditionError('Support indices must lie in [0, {0}), got {1}'.format(labeled.dim, support.tolist()))
    restricted = fit_supervised(labeled.columns(support))
    w = np.zeros(labeled.dim)
    b = np.zeros(labeled.dim)
    w[support] = restricted.w
    b[support] = restricted.b
    return LinearClassifier(w, b, provenance=SPARSE)

def fit_pseudo_label_pipeline(labeler, unlabeled):
    """
    Pseudo-label the unlabeled set with the labeler, then fit the semi-supervised classifier
    """
    return fit_semi_supervised(pseudo_label(labeler, unlabeled), unlabeled)
