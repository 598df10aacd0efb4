import csv
import json
import logging
import os
from ssrsim.exceptions import ParseError
from ssrsim.service.config import SimulatorPropertiesGroup
from ssrsim.util.formatting import format_cell

logger = logging.getLogger(__name__)

DIGEST_PREFIX = '# config_digest='

class OutputProperties(SimulatorPropertiesGroup):
    def __init__(self):
        super().__init__('output')
        # apply defaults (correct settings will be picked up from config file or environment variables)
        self.output_dir = './ssr-output'
        self.write_run_summary = True

def csv_path(output_dir, experiment):
    return os.path.join(output_dir, '{0}.csv'.format(experiment))

def summary_path(output_dir, experiment):
    return os.path.join(output_dir, '{0}_run.json'.format(experiment))

def plot_path(output_dir, experiment):
    return os.path.join(output_dir, '{0}.svg'.format(experiment))

def write_run_csv(record, path):
    """
    First line carries the config digest, then the header and one line per row.
    Empty cells mark values of skipped rows or bounds whose preconditions fail
    """
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(DIGEST_PREFIX + record.config_digest + '\n')
        writer = csv.DictWriter(f, fieldnames=record.columns, lineterminator='\n')
        writer.writeheader()
        for row in record.rows:
            writer.writerow({name: format_cell(row[name]) for name in record.columns})
    logger.debug('Wrote {0} rows to {1}'.format(record.n_rows, path))
    return path

def write_run_summary(record, path):
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(record.summary(), f, indent=2, sort_keys=True)
        f.write('\n')
    return path


class RunTable():
    """
    A run CSV read back as text cells, one dict per row keyed by column
    """

    def __init__(self, config_digest, columns, rows):
        self.config_digest = config_digest
        self.columns = list(columns)
        self.rows = rows

    def values(self, column):
        return [row[column] for row in self.rows]

    def numeric(self, column):
        """
        Cells as floats, None for empty cells. true/false read as 1/0
        """
        values = []
        for cell in self.values(column):
            if cell == '':
                values.append(None)
            elif cell == 'true':
                values.append(1.0)
            elif cell == 'false':
                values.append(0.0)
            else:
                try:
                    values.append(float(cell))
                except ValueError:
                    raise ParseError('Column {0} holds a non-numeric cell: {1}'.format(column, cell))
        return values


def _cell_count(row):
    # DictReader pads short rows with None and collects extra cells under the None key
    return len([v for k, v in row.items() if k is not None and v is not None]) + len(row.get(None, []))

def read_run_csv(path):
    try:
        with open(path, 'r', encoding='utf-8', newline='') as f:
            first = f.readline().rstrip('\r\n')
            if not first.startswith(DIGEST_PREFIX):
                raise ParseError('{0} does not start with a config digest line and a header'.format(path))
            reader = csv.DictReader(f)
            columns = reader.fieldnames
            if columns is None:
                raise ParseError('{0} does not start with a config digest line and a header'.format(path))
            if len(set(columns)) != len(columns) or '' in columns:
                raise ParseError('{0} has a malformed header: {1}'.format(path, ','.join(columns)))
            rows = []
            for row in reader:
                cells = _cell_count(row)
                if cells != len(columns):
                    # the digest line sits above the reader's first line
                    raise ParseError('{0} line {1} has {2} cells, expected {3}'.format(path, reader.line_num + 1, cells, len(columns)))
                rows.append(row)
    except OSError as e:
        raise ParseError('Could not read {0}: {1}'.format(path, e)) from e
    except csv.Error as e:
        raise ParseError('{0} is not a valid CSV file: {1}'.format(path, e)) from e
    return RunTable(first[len(DIGEST_PREFIX):].strip(), columns, rows)
