import logging
import numpy as np
import matplotlib
from matplotlib.figure import Figure
from ssrsim.exceptions import ConfigError, ParseError
from ssrsim.service.output import read_run_csv

logger = logging.getLogger(__name__)

LINE_BY_EPSILON = 'line_by_epsilon'
LINE_BY_N = 'line_by_n'
LINE_BY_A = 'line_by_a'

PLOT_KINDS = {
    LINE_BY_EPSILON: 'epsilon',
    LINE_BY_N: 'n',
    LINE_BY_A: 'a'
}

DIFF_COLUMN = 'diff'

def aggregate(xs, ys):
    """
    Mean and standard error of ys per distinct x, ignoring missing values.
    Returns three aligned lists sorted by x
    """
    groups = {}
    for x, y in zip(xs, ys):
        if x is None or y is None:
            continue
        groups.setdefault(x, []).append(y)
    points, means, errors = [], [], []
    for x in sorted(groups):
        values = np.asarray(groups[x], dtype=float)
        mean = float(np.mean(values))
        error = float(np.std(values, ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
        points.append(x)
        means.append(mean)
        errors.append(error)
    return points, means, errors

def _draw(axes, table, x_column, columns):
    xs = table.numeric(x_column)
    for column in columns:
        points, means, errors = aggregate(xs, table.numeric(column))
        if not points:
            continue
        line, = axes.plot(points, means, marker='o', label=column)
        lower = [m - e for m, e in zip(means, errors)]
        upper = [m + e for m, e in zip(means, errors)]
        axes.fill_between(points, lower, upper, color=line.get_color(), alpha=0.2, linewidth=0)
    axes.grid(True, alpha=0.3)
    axes.legend(loc='best')

def emit_plot(csv_path, kind, out_path):
    """
    SVG line chart of a run CSV: mean over seeds per swept value with a shaded
    band of one standard error. A diff column gets its own panel
    """
    if kind not in PLOT_KINDS:
        raise ConfigError('Plot kind must be one of {0}, got {1}'.format(', '.join(sorted(PLOT_KINDS)), kind))
    table = read_run_csv(csv_path)
    x_column = PLOT_KINDS[kind]
    if 'seed' not in table.columns:
        raise ParseError('{0} has no seed column'.format(csv_path))
    if x_column not in table.columns:
        raise ParseError('{0} has no {1} column for plot kind {2}'.format(csv_path, x_column, kind))
    if not table.rows:
        raise ParseError('{0} holds no seed rows'.format(csv_path))
    error_columns = [c for c in table.columns if c.startswith('err_')]
    if not error_columns:
        raise ParseError('{0} has no error columns'.format(csv_path))
    has_diff = DIFF_COLUMN in table.columns
    with matplotlib.rc_context({'svg.hashsalt': table.config_digest, 'svg.fonttype': 'path'}):
        figure = Figure(figsize=(7, 7 if has_diff else 4.5))
        if has_diff:
            top, bottom = figure.subplots(2, 1, sharex=True)
        else:
            top, bottom = figure.subplots(1, 1), None
        _draw(top, table, x_column, error_columns)
        top.set_ylabel('error')
        if bottom is not None:
            _draw(bottom, table, x_column, [DIFF_COLUMN])
            bottom.axhline(0.0, color='black', linewidth=0.8)
            bottom.set_ylabel('error difference')
            bottom.set_xlabel(x_column)
        else:
            top.set_xlabel(x_column)
        figure.tight_layout()
        figure.savefig(out_path, format='svg', metadata={'Date': None, 'Description': 'config_digest={0}'.format(table.config_digest)})
    logger.debug('Wrote {0} plot of {1} to {2}'.format(kind, csv_path, out_path))
    return out_path
