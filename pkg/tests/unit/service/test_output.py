import json
import unittest
from testfixtures import compare, TempDirectory
from ssrsim.exceptions import ParseError
from ssrsim.model.experiment import RunRecord, SkippedRow
from ssrsim.service.output import csv_path, summary_path, plot_path, write_run_csv, write_run_summary, read_run_csv

def irrelevant_record():
    rows = [
        {'seed': 0, 'a': 0.5, 'err_std': 0.1, 'err_rob': 0.25},
        {'seed': 1, 'a': 0.5, 'err_std': None, 'err_rob': None}
    ]
    skipped = [SkippedRow(1, 0.5, 'DegeneratePseudoSplit: Pseudo-labels put every row in one class (5 positive, 0 negative)')]
    return RunRecord('irrelevant', 'abc123', rows, skipped=skipped, wall_time=1.5, workers=2)

class TestOutputPaths(unittest.TestCase):

    def test_paths(self):
        self.assertEqual(csv_path('out', 'gap'), 'out/gap.csv')
        self.assertEqual(summary_path('out', 'gap'), 'out/gap_run.json')
        self.assertEqual(plot_path('out', 'gap'), 'out/gap.svg')


class TestRunCsv(unittest.TestCase):

    def setUp(self):
        self.tmp = TempDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def test_write(self):
        path = write_run_csv(irrelevant_record(), self.tmp.getpath('irrelevant.csv'))
        self.assertEqual(self.tmp.read('irrelevant.csv'),
                         b'# config_digest=abc123\nseed,a,err_std,err_rob\n0,0.5,0.10000000000000001,0.25\n1,0.5,,\n')
        self.assertEqual(path, self.tmp.getpath('irrelevant.csv'))

    def test_booleans(self):
        rows = [{'seed': 0, 'epsilon': 0.1, 'err_semi': 0.2, 'err_sparse': 0.1, 'diff': 0.1, 'support_recovered': True},
                {'seed': 1, 'epsilon': 0.1, 'err_semi': 0.2, 'err_sparse': 0.1, 'diff': 0.1, 'support_recovered': False}]
        write_run_csv(RunRecord('sparsity', 'd', rows), self.tmp.getpath('sparsity.csv'))
        table = read_run_csv(self.tmp.getpath('sparsity.csv'))
        compare(table.values('support_recovered'), ['true', 'false'])
        compare(table.numeric('support_recovered'), [1.0, 0.0])

    def test_read_back(self):
        write_run_csv(irrelevant_record(), self.tmp.getpath('irrelevant.csv'))
        table = read_run_csv(self.tmp.getpath('irrelevant.csv'))
        self.assertEqual(table.config_digest, 'abc123')
        compare(table.columns, ['seed', 'a', 'err_std', 'err_rob'])
        compare(table.numeric('err_std'), [0.1, None])
        compare(table.numeric('seed'), [0.0, 1.0])

    def test_summary(self):
        write_run_summary(irrelevant_record(), self.tmp.getpath('irrelevant_run.json'))
        data = json.loads(self.tmp.read('irrelevant_run.json').decode('utf-8'))
        compare(data, {
            'experiment': 'irrelevant',
            'config_digest': 'abc123',
            'rows': 2,
            'skipped': [{'seed': 1, 'value': 0.5, 'reason': 'DegeneratePseudoSplit: Pseudo-labels put every row in one class (5 positive, 0 negative)'}],
            'wall_time': 1.5,
            'workers': 2
        })

    def test_missing_file(self):
        with self.assertRaises(ParseError):
            read_run_csv(self.tmp.getpath('missing.csv'))

    def test_missing_digest(self):
        path = self.tmp.write('bad.csv', b'seed,a,err_std,err_rob\n0,0.5,0.1,0.2\n')
        with self.assertRaises(ParseError) as context:
            read_run_csv(path)
        self.assertEqual(str(context.exception), '{0} does not start with a config digest line and a header'.format(path))

    def test_duplicate_columns(self):
        path = self.tmp.write('bad.csv', b'# config_digest=x\nseed,seed\n0,0\n')
        with self.assertRaises(ParseError):
            read_run_csv(path)

    def test_wrong_cell_count(self):
        path = self.tmp.write('bad.csv', b'# config_digest=x\nseed,a\n0,0.5\n1\n')
        with self.assertRaises(ParseError) as context:
            read_run_csv(path)
        self.assertEqual(str(context.exception), '{0} line 4 has 1 cells, expected 2'.format(path))

    def test_extra_cells(self):
        path = self.tmp.write('bad.csv', b'# config_digest=x\nseed,a\n0,0.5,0.7\n')
        with self.assertRaises(ParseError) as context:
            read_run_csv(path)
        self.assertEqual(str(context.exception), '{0} line 3 has 3 cells, expected 2'.format(path))

    def test_digest_without_header(self):
        path = self.tmp.write('bad.csv', b'# config_digest=x\n')
        with self.assertRaises(ParseError) as context:
            read_run_csv(path)
        self.assertEqual(str(context.exception), '{0} does not start with a config digest line and a header'.format(path))

    def test_blank_header_cell(self):
        path = self.tmp.write('bad.csv', b'# config_digest=x\nseed,,a\n0,1,2\n')
        with self.assertRaises(ParseError) as context:
            read_run_csv(path)
        self.assertEqual(str(context.exception), '{0} has a malformed header: seed,,a'.format(path))

    def test_quoted_cells(self):
        path = self.tmp.write('quoted.csv', b'# config_digest=x\nseed,a\n"0","0.5"\n\n1,\n')
        table = read_run_csv(path)
        compare(table.values('a'), ['0.5', ''])
        compare(table.numeric('seed'), [0.0, 1.0])

    def test_non_numeric_cell(self):
        path = self.tmp.write('bad.csv', b'# config_digest=x\nseed,a\n0,abc\n')
        with self.assertRaises(ParseError) as context:
            read_run_csv(path).numeric('a')
        self.assertEqual(str(context.exception), 'Column a holds a non-numeric cell: abc')
