import logging
import math
import unittest
from unittest.mock import patch, Mock
import numpy as np
from testfixtures import compare, LogCapture
from ssrsim.app import default_experiment_config_path
from ssrsim.exceptions import BoundViolation, DegenerateRunError, EmptySupport, PreconditionError
from ssrsim.model.domain import DomainSpec
from ssrsim.model.experiment import ExperimentConfig, COLUMNS
from ssrsim.model.measures import MeanQuadruple
from ssrsim.model.progress_events import RunStartedEvent, SeedCompletedEvent, RowSkippedEvent, RunCompletedEvent
from ssrsim.model.reports import AttackBudget
from ssrsim.service.domain_distance import d_nu
from ssrsim.service.estimators import fit_sparse, fit_supervised
from ssrsim.service.experiments import (enhance_sigma, sparsity_gap, sparsity_means, gap_means, irrelevant_means, measure_instance, measure_bounds,
                                        check_bounds, run_experiment, run_enhance_experiment, run_sparsity_experiment, run_gap_experiment,
                                        run_irrelevant_experiment, run_measures_report)
from ssrsim.service.process import ProcessProperties, SeedPoolService
from ssrsim.service.robust_eval import closed_form_robust_error
from ssrsim.service.sampling import sample_labeled
from ssrsim.util.seeds import derive_trial_seed, child_seed

BASE_CONFIGS = {
    'enhance': {'dim': 50, 'sigma': None, 'epsilon_grid': [0.1, 0.2], 'n_labeled': 20, 'n_unlabeled': 1000, 'n_seeds': 5},
    'sparsity': {'dim': 20, 'sigma': 0.2, 'epsilon_grid': [0.1, 0.2], 'n_labeled': 20, 'n_unlabeled': 400, 'n_seeds': 3, 'support_size': 4},
    'gap': {'dim': 10, 'sigma': 1.0, 'epsilon_grid': [0.5], 'n_labeled': 2, 'n_unlabeled': 500, 'n_seeds': 3, 'sweep': [2, 10]},
    'irrelevant': {'dim': 10, 'sigma': 1.0, 'epsilon_grid': [0.5], 'n_labeled': 100, 'n_unlabeled': 500, 'n_seeds': 3, 'sweep': [0.5, 1.0]},
    'measures': {'dim': 10, 'sigma': 1.0, 'epsilon_grid': [0.0], 'n_labeled': 2, 'n_unlabeled': 2, 'n_seeds': 20,
                 'sweep': [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]}
}

def config(experiment, **overrides):
    data = {'experiment': experiment, 'master_seed': 2024}
    data.update(BASE_CONFIGS[experiment])
    data.update(overrides)
    return ExperimentConfig.from_dict(data)

def in_process_pool():
    properties = ProcessProperties()
    properties.use_process_pool = False
    return SeedPoolService(process_properties=properties)

class TestExperimentHelpers(unittest.TestCase):

    def test_enhance_sigma(self):
        cfg = config('enhance', dim=500, n_unlabeled=10000)
        self.assertAlmostEqual(enhance_sigma(cfg, 0.1), 0.1 * math.sqrt(0.01 / (1 / 500 + 1 / 10000)), places=15)
        self.assertAlmostEqual((1 / 500 + 1 / 10000) * enhance_sigma(cfg, 0.4) ** 2 / 0.4 ** 2, 0.01, places=15)
        self.assertEqual(enhance_sigma(config('enhance', sigma=2.0), 0.1), 2.0)

    def test_sparsity_gap_and_means(self):
        cfg = config('sparsity', dim=100, n_unlabeled=2000, support_size=10)
        gap = sparsity_gap(cfg)
        self.assertAlmostEqual(gap, 4 * 0.2 * math.sqrt(2 * 10 * math.log(100) / 2000), places=15)
        self.assertAlmostEqual(gap, 0.1717, places=4)
        labeled, shifted = sparsity_means(cfg)
        np.testing.assert_array_equal(labeled[:10], np.full(10, 0.5))
        np.testing.assert_array_equal(labeled[10:], np.zeros(90))
        self.assertAlmostEqual(shifted[0], gap / 2, places=15)
        self.assertAlmostEqual(shifted[9], gap, places=15)
        self.assertGreaterEqual(np.min(2 * shifted[:10]), gap * (1 - 1e-12))
        np.testing.assert_array_equal(shifted[10:], np.zeros(90))

    def test_gap_means(self):
        mean, shifted = gap_means(100)
        np.testing.assert_array_equal(mean, np.ones(100))
        self.assertAlmostEqual(np.linalg.norm(shifted - mean), 0.2 * 10, places=12)
        self.assertAlmostEqual(d_nu(MeanQuadruple(mean, -mean, shifted, -shifted)), 0.1 / math.sqrt(1.04), places=12)

    def test_irrelevant_means(self):
        mean, shifted = irrelevant_means(5, 1.0)
        np.testing.assert_array_equal(mean, [1, 0, 0, 0, 0])
        np.testing.assert_array_equal(shifted, [0, 1, 0, 0, 0])
        self.assertAlmostEqual(d_nu(MeanQuadruple(mean, -mean, shifted, -shifted)), math.sqrt(2) / 2, places=15)
        _, shifted = irrelevant_means(5, 4.0)
        self.assertEqual(shifted[1], 0.25)

    def test_check_bounds(self):
        check_bounds(0, 0.5, {'w_bound': 0.5, 'mi_bound': None, 'hdiv_bound': 0.7})
        with self.assertRaises(BoundViolation) as context:
            check_bounds(3, 0.5, {'w_bound': 0.4})
        self.assertEqual(str(context.exception), 'Instance 3: w_bound = 0.4 is below d_nu = 0.5')

    def test_measure_bounds_dominate_d_nu(self):
        cfg = config('measures')
        rng = np.random.default_rng(1)
        counts = {'w_bound': 0, 'w_refined': 0, 'mi_bound': 0, 'hdiv_bound': 0}
        for instance_id in range(10000):
            q = measure_instance(cfg, child_seed(77, 'instance:{0}'.format(instance_id)), 0.6 * rng.random())
            bounds = measure_bounds(q, cfg.sigma)
            check_bounds(instance_id, d_nu(q), bounds)
            for name, bound in bounds.items():
                if bound is not None:
                    counts[name] += 1
        self.assertEqual(counts['w_bound'], 10000)
        self.assertEqual(counts['hdiv_bound'], 10000)
        self.assertGreater(counts['mi_bound'], 0)
        self.assertGreater(counts['w_refined'], 0)


class TestRunExperiment(unittest.TestCase):

    def test_rows_in_seed_order(self):
        cfg = config('enhance')
        record = run_enhance_experiment(cfg)
        self.assertEqual(record.n_rows, cfg.n_seeds * len(cfg.epsilon_grid))
        compare(record.column('seed'), [0, 0, 1, 1, 2, 2, 3, 3, 4, 4])
        compare(record.column('epsilon'), [0.1, 0.2] * 5)
        self.assertEqual(record.config_digest, cfg.digest())
        self.assertEqual(record.skipped, [])
        for row in record.rows:
            compare(set(row.keys()), set(COLUMNS['enhance']))

    def test_deterministic(self):
        cfg = config('enhance')
        compare(run_experiment(cfg).rows, run_experiment(cfg).rows)

    def test_adding_seeds_keeps_earlier_rows(self):
        short = run_experiment(config('irrelevant', n_seeds=2))
        longer = run_experiment(config('irrelevant', n_seeds=3))
        compare(longer.rows[:short.n_rows], short.rows)

    def test_process_pool_matches_in_process(self):
        cfg = config('measures', n_seeds=6)
        properties = ProcessProperties()
        properties.process_pool_size = 3
        with patch.dict('os.environ', {'SSR_THREADS': '3'}):
            pooled = run_experiment(cfg, pool=SeedPoolService(process_properties=properties))
        self.assertEqual(pooled.workers, 3)
        compare(pooled.rows, run_experiment(cfg, pool=in_process_pool()).rows)

    def test_progress_events(self):
        writer = Mock()
        cfg = config('gap', n_seeds=2)
        run_experiment(cfg, event_writer=writer)
        events = [c[0][0] for c in writer.add.call_args_list]
        self.assertEqual([type(e) for e in events], [RunStartedEvent, SeedCompletedEvent, SeedCompletedEvent, RunCompletedEvent])
        self.assertEqual(events[0].config_digest, cfg.digest())
        self.assertEqual([e.seed for e in events[1:3]], [0, 1])
        self.assertEqual(events[3].rows, 4)

    def test_wrong_experiment(self):
        with self.assertRaises(PreconditionError) as context:
            run_gap_experiment(config('enhance'))
        self.assertEqual(str(context.exception), 'Expected a gap configuration, got enhance')


class TestEnhanceExperiment(unittest.TestCase):

    def test_shifted_students_are_not_worse(self):
        record = run_enhance_experiment(config('enhance'))
        for epsilon in (0.1, 0.2):
            diffs = [row['diff'] for row in record.rows if row['epsilon'] == epsilon]
            self.assertGreaterEqual(float(np.mean(diffs)), -1e-6)
        for row in record.rows:
            self.assertEqual(row['diff'], row['err_same'] - row['err_shifted'])

    def test_zero_epsilon_row(self):
        record = run_enhance_experiment(config('enhance', sigma=1.0, epsilon_grid=[0.0, 0.1], n_seeds=2))
        for row in record.rows:
            if row['epsilon'] == 0.0:
                self.assertAlmostEqual(row['err_same'], 0.5, places=12)
                self.assertAlmostEqual(row['err_shifted'], 0.5, places=12)


class TestSparsityExperiment(unittest.TestCase):

    def test_columns(self):
        record = run_sparsity_experiment(config('sparsity'))
        self.assertEqual(record.n_rows, 6)
        self.assertLess(len(record.skipped), record.n_rows)
        for row in record.rows:
            if row['err_sparse'] is None:
                continue
            self.assertIsInstance(row['support_recovered'], bool)
            self.assertEqual(row['diff'], row['err_semi'] - row['err_sparse'])

    def test_recovers_support(self):
        cfg = config('sparsity', dim=100, n_unlabeled=2000, support_size=10, epsilon_grid=[0.05, 0.1, 0.2], n_seeds=20)
        record = run_sparsity_experiment(cfg)
        recovered = [row['support_recovered'] for row in record.rows if row['support_recovered'] is not None]
        self.assertEqual(len(recovered), record.n_rows - len(record.skipped))
        self.assertGreaterEqual(sum(recovered), 0.9 * record.n_rows)

    def test_shipped_config_sparse_fit_is_not_worse(self):
        cfg = ExperimentConfig.from_file(default_experiment_config_path('sparsity'))
        record = run_sparsity_experiment(cfg, pool=in_process_pool())
        self.assertLessEqual(len(record.skipped), 0.1 * record.n_rows)
        for epsilon in cfg.epsilon_grid:
            rows = [row for row in record.rows if row['epsilon'] == epsilon and row['diff'] is not None]
            self.assertGreaterEqual(len(rows), 90)
            self.assertGreaterEqual(float(np.mean([row['diff'] for row in rows])), 0.0)
            self.assertGreaterEqual(sum(row['support_recovered'] for row in rows), 0.9 * len(rows))

    def test_forced_full_support_matches_supervised_fit(self):
        cfg = config('sparsity', dim=5, support_size=5, force_full_support=True, n_seeds=2)
        record = run_sparsity_experiment(cfg)
        labeled_mean, _ = sparsity_means(cfg)
        labeled_spec = DomainSpec.symmetric(labeled_mean, cfg.sigma)
        for row in record.rows:
            seed = derive_trial_seed(cfg.master_seed, 'sparsity', row['seed'])
            full = fit_supervised(sample_labeled(labeled_spec, cfg.n_labeled, child_seed(seed, 'labeled')))
            self.assertAlmostEqual(row['err_sparse'], closed_form_robust_error(full, labeled_spec, AttackBudget(row['epsilon'])).value, places=15)
            self.assertTrue(row['support_recovered'])

    def test_failed_seed_rows_are_skipped(self):
        calls = []

        def flaky(labeled, support):
            calls.append(support)
            if len(calls) == 1:
                raise EmptySupport('Support set is empty')
            return fit_sparse(labeled, support)

        cfg = config('sparsity', force_full_support=True)
        with patch('ssrsim.service.experiments.fit_sparse', side_effect=flaky):
            with LogCapture('ssrsim.service.experiments', level=logging.WARNING) as log:
                record = run_sparsity_experiment(cfg)
        log.check(
            ('ssrsim.service.experiments', 'WARNING', 'Skipped row for seed 0 at 0.1: EmptySupport: Support set is empty'),
            ('ssrsim.service.experiments', 'WARNING', 'Skipped row for seed 0 at 0.2: EmptySupport: Support set is empty')
        )
        self.assertEqual(record.n_rows, 6)
        compare([s.to_dict() for s in record.skipped], [
            {'seed': 0, 'value': 0.1, 'reason': 'EmptySupport: Support set is empty'},
            {'seed': 0, 'value': 0.2, 'reason': 'EmptySupport: Support set is empty'}
        ])
        compare(record.rows[0], {'seed': 0, 'epsilon': 0.1, 'err_semi': None, 'err_sparse': None, 'diff': None, 'support_recovered': None})
        self.assertIsNotNone(record.rows[2]['err_sparse'])

    def test_all_rows_skipped(self):
        writer = Mock()
        with patch('ssrsim.service.experiments.fit_sparse', side_effect=EmptySupport('Support set is empty')):
            with self.assertRaises(DegenerateRunError) as context:
                run_sparsity_experiment(config('sparsity', force_full_support=True), event_writer=writer)
        self.assertEqual(str(context.exception), 'All 6 rows of the sparsity experiment were skipped, first reason: EmptySupport: Support set is empty')
        skipped = [c[0][0] for c in writer.add.call_args_list if isinstance(c[0][0], RowSkippedEvent)]
        self.assertEqual(len(skipped), 6)


class TestGapExperiment(unittest.TestCase):

    def test_zero_epsilon_matches_standard_error(self):
        record = run_gap_experiment(config('gap', epsilon_grid=[0.0]))
        for row in record.rows:
            self.assertEqual(row['err_rob_sup'], row['err_std_sup'])

    def test_d_nu_column(self):
        record = run_gap_experiment(config('gap'))
        for row in record.rows:
            self.assertAlmostEqual(row['d_nu'], 0.1 / math.sqrt(1.04), places=12)
        compare(record.column('n'), [2, 10] * 3)

    def test_gap_and_bridging(self):
        d = 1000
        cfg = config('gap', dim=d, sigma=0.5 * d ** 0.25, sweep=[2, 20], n_unlabeled=10000, n_seeds=20)
        record = run_gap_experiment(cfg)
        self.assertEqual(record.skipped, [])

        def median(column, n):
            return float(np.median([row[column] for row in record.rows if row['n'] == n]))

        # one row per half at n = 2 leaves the offset estimate a single noisy draw
        self.assertGreater(median('err_std_sup', 2), 0.01)
        self.assertGreaterEqual(median('err_rob_sup', 2), 0.10)
        self.assertLessEqual(median('err_std_sup', 20), 0.01)
        self.assertLessEqual(median('err_rob_semi', 20), 0.01)
        self.assertLessEqual(record.rows[0]['d_nu'], 0.1)


class TestIrrelevantExperiment(unittest.TestCase):

    def test_robust_dominates_standard(self):
        record = run_irrelevant_experiment(config('irrelevant'))
        compare(record.column('a'), [0.5, 1.0] * 3)
        for row in record.rows:
            self.assertGreaterEqual(row['err_rob'], row['err_std'])

    def test_irrelevant_data_hurts(self):
        cfg = config('irrelevant', dim=200, n_labeled=10000, n_unlabeled=10000, sweep=[1.0], n_seeds=10)
        record = run_irrelevant_experiment(cfg)
        self.assertGreaterEqual(float(np.mean(record.column('err_rob'))), 0.49)


class TestMeasuresReport(unittest.TestCase):

    def test_rows(self):
        cfg = config('measures')
        record = run_measures_report(cfg)
        self.assertEqual(record.n_rows, 20 * 6)
        compare(record.column('instance_id'), list(range(120)))
        for row in record.rows[::6]:
            self.assertEqual(row['d_nu'], 0.0)
            self.assertEqual(row['mi_bound'], 0.0)
            for name in ('w_bound', 'w_refined', 'hdiv_bound'):
                self.assertGreaterEqual(row[name], 0.0)
        for row in record.rows:
            self.assertLessEqual(row['d_nu'], row['w_bound'] + 1e-12)

    def test_violation_aborts_run(self):
        with patch('ssrsim.service.experiments.measure_bounds', return_value={'w_bound': -1.0}):
            with self.assertRaises(BoundViolation):
                run_measures_report(config('measures', n_seeds=1))
