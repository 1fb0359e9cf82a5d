"""Tests for experiment configuration, result storage and the pipeline"""

import json

import numpy as np
import pytest

from generation.model_params import AdversarySpec, ModelParams
from harness.experiment_config import ExperimentConfig
from harness.pipeline import ExperimentRunner, aggregate_pass_rates, row_pass_flags
from harness.result_store import ResultStore, encode_row
from oracles.calibration import calibrate_xi
from utils.config_manager import ConfigManager
from utils.errors import ParameterError


@pytest.fixture
def small_params():
    return ModelParams('GammaReg', n=14, k=6, d=2, delta=0.5, gamma=0.25, outer_style='matching')


@pytest.fixture
def small_experiment(small_params, tmp_path):
    return ExperimentConfig(params=small_params, seeds=[0], tol=1e-3, max_iter=2000,
                            output_dir=str(tmp_path / 'results')).validate()


def _stable(row):
    row = json.loads(encode_row(row))
    row.pop('timings', None)
    row['solution'].pop('wall_time', None)
    return row


class TestExperimentConfig:

    def test_grid_is_cartesian_with_last_axis_fastest(self, small_params):
        experiment = ExperimentConfig(params=small_params, grid={'delta': [0.25, 0.5], 'gamma': [0.25, 0.5]})
        points = [(p.delta, p.gamma) for p in experiment.validate().grid_points()]
        assert points == [(0.25, 0.25), (0.25, 0.5), (0.5, 0.25), (0.5, 0.5)]

    def test_empty_grid_is_the_base_point(self, small_params):
        assert ExperimentConfig(params=small_params).grid_points() == [small_params]

    @pytest.mark.parametrize('changes', [
        {'seeds': []},
        {'seeds': [-1]},
        {'grid': {'colour': [1]}},
        {'grid': {'delta': []}},
        {'grid': {'delta': [float('nan')]}},
        {'tol': 0.0},
        {'workers': 0},
        {'xi': -1.0},
        {'xi': 'sometimes'},
    ])
    def test_validation(self, small_params, changes):
        with pytest.raises(ParameterError):
            ExperimentConfig(params=small_params, **changes).validate()

    def test_round_trip_through_dict(self, small_experiment):
        restored = ExperimentConfig.from_dict(small_experiment.to_dict())
        assert restored == small_experiment

    def test_from_config(self, small_params):
        config = ConfigManager.from_dict({'experiment': {'params': small_params.to_dict(), 'seeds': [3, 4]}})
        experiment = ExperimentConfig.from_config(config)
        assert experiment.params == small_params
        assert experiment.seeds == [3, 4]

    def test_unknown_field(self, small_params):
        with pytest.raises(ParameterError):
            ExperimentConfig.from_dict({'params': small_params.to_dict(), 'colour': 'red'})

    def test_resolve_numeric_xi(self, small_experiment, small_params):
        assert small_experiment.resolve_xi(small_params) == 2.0

    def test_resolve_calibrated_xi(self, small_params):
        experiment = ExperimentConfig(params=small_params, xi={'trials': 3, 'seed': 1})
        expected = calibrate_xi(small_params.n, small_params.k, small_params.p, 3, seed=1)
        assert experiment.resolve_xi(small_params) == expected


class TestResultStore:

    def test_append_and_load(self, tmp_path):
        store = ResultStore(tmp_path / 'out')
        store.append({'seed': np.int64(3), 'alpha': float('inf'), 'members': frozenset({2, 1})})
        store.append({'seed': 4})
        rows = store.load_rows()
        assert rows == [{'seed': 3, 'alpha': 'inf', 'members': [1, 2]}, {'seed': 4}]

    def test_malformed_lines_are_skipped(self, tmp_path):
        store = ResultStore(tmp_path)
        store.append({'seed': 1})
        with open(store.rows_path, 'a') as handle:
            handle.write('{broken\n')
        assert store.load_rows() == [{'seed': 1}]

    def test_encoding_is_canonical(self):
        assert encode_row({'b': 1, 'a': np.float64(0.5)}) == '{"a": 0.5, "b": 1}'

    def test_summary(self, tmp_path):
        path = ResultStore(tmp_path).write_summary({'rate': np.float64(0.9)})
        assert json.loads(path.read_text()) == {'rate': 0.9}


class TestPassFlags:

    def test_flatten(self):
        row = {
            'recovery': {'flags': {'rho_Q': True}, 'checks': {'pruning_ratio': None}},
            'audit': {'flags': {'cross': False}, 'details': {'checks': {'identity': True}}},
            'brute_force': {'dominance': True},
            'monotone': {'holds': True},
            'error': None,
        }
        assert row_pass_flags(row) == {
            'recovery.rho_Q': True,
            'audit.cross': False,
            'audit.checks.identity': True,
            'recovery.checks.pruning_ratio': None,
            'brute_force.dominance': True,
            'monotone.holds': True,
            'completed': True,
        }

    def test_aggregate(self):
        rows = [
            {'config': {'params': {'n': 10}}, 'recovery': {'flags': {'rho_Q': True, 'overlap': None}},
             'error': None},
            {'config': {'params': {'n': 10}}, 'error': 'ParameterError: bad'},
            {'config': {'params': {'n': 12}}, 'recovery': {'flags': {'rho_Q': False}}, 'error': None},
        ]
        aggregates = aggregate_pass_rates(rows)
        assert aggregates['runs'] == 3 and aggregates['errors'] == 1
        clauses = aggregates['clauses']
        assert clauses['recovery.rho_Q'] == {'passed': 1, 'evaluated': 2, 'rate': 0.5}
        assert clauses['recovery.overlap']['rate'] is None
        assert clauses['completed']['passed'] == 2
        assert aggregates['per_point']['n=10']['completed'] == {'passed': 1, 'evaluated': 2, 'rate': 0.5}


class TestPipeline:

    def test_row_contents(self, small_experiment, quiet_config):
        row = ExperimentRunner(quiet_config).run_pipeline(small_experiment, seed=0)
        assert {'config', 'seed', 'solution', 'recovery', 'audit', 'brute_force', 'monotone',
                'timings', 'passed'} <= set(row)
        assert row['config']['xi'] == 2.0
        assert set(row['timings']) >= {'calibrate', 'generate', 'solve', 'recover', 'audit'}
        assert row['brute_force']['value'] <= row['brute_force']['sdp_objective'] + 1e-2 * (
            1.0 + row['brute_force']['sdp_objective'])
        assert row['monotone']['holds'] is True
        assert row['monotone']['objective_after'] <= row['monotone']['objective_before'] + 1e-2
        assert row['passed']['completed'] is (row['error'] is None)

    def test_deterministic_apart_from_timings(self, small_experiment, quiet_config):
        first = ExperimentRunner(quiet_config).run_pipeline(small_experiment, seed=2)
        second = ExperimentRunner(quiet_config).run_pipeline(small_experiment, seed=2)
        assert _stable(first) == _stable(second)

    def test_adversary_skips_monotone_check(self, small_experiment, quiet_config):
        small_experiment.adversary = AdversarySpec('random_fraction', q_cross=0.5, seed=1)
        row = ExperimentRunner(quiet_config).run_pipeline(small_experiment, seed=0)
        assert 'monotone' not in row

    def test_large_instances_skip_brute_force(self, small_experiment, quiet_config):
        small_experiment.brute_force_max_n = 10
        small_experiment.check_monotone = False
        row = ExperimentRunner(quiet_config).run_pipeline(small_experiment, seed=0)
        assert 'brute_force' not in row and 'monotone' not in row


class TestSweep:

    def test_rows_follow_grid_and_seed_order(self, small_experiment, quiet_config, tmp_path):
        small_experiment.seeds = [0, 1]
        small_experiment.workers = 2
        small_experiment.check_monotone = False
        store = ResultStore(tmp_path / 'sweep')
        result = ExperimentRunner(quiet_config, store).sweep(small_experiment)
        assert [row['seed'] for row in result['rows']] == [0, 1]
        assert result['aggregates']['runs'] == 2
        assert len(store.load_rows()) == 2
        assert json.loads(store.summary_path.read_text())['aggregates']['runs'] == 2

    def test_invalid_grid_point_becomes_error_row(self, small_experiment, quiet_config):
        small_experiment.grid = {'d': [2.5]}
        result = ExperimentRunner(quiet_config).sweep(small_experiment)
        row = result['rows'][0]
        assert row['error'].startswith('ParameterError')
        assert row['passed'] == {'completed': False}
        assert result['aggregates']['errors'] == 1

    def test_numerical_failure_is_recorded_per_point(self, small_experiment, quiet_config, monkeypatch):
        small_experiment.grid = {'delta': [0.25, 0.5]}
        small_experiment.workers = 2
        small_experiment.check_monotone = False
        runner = ExperimentRunner(quiet_config)
        run_pipeline = runner.run_pipeline

        def flaky(experiment, seed, params=None):
            if params.delta == 0.25:
                raise np.linalg.LinAlgError('eigh did not converge')
            return run_pipeline(experiment, seed, params)

        monkeypatch.setattr(runner, 'run_pipeline', flaky)
        result = runner.sweep(small_experiment)
        first, second = result['rows']
        assert first['error'] == 'LinAlgError: eigh did not converge'
        assert first['passed'] == {'completed': False}
        assert second['config']['params']['delta'] == 0.5
        assert second['passed']['completed'] is (second['error'] is None)
        assert result['aggregates']['runs'] == 2
