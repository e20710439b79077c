import json
import math
from unittest.mock import patch

import pandas as pd
import pytest
from rest_framework.renderers import JSONRenderer

from apps.clocks.serializers import ExperimentReportSerializer
from apps.clocks.services.clockmodel import ClockParams
from apps.clocks.services.experiments import REPLICATE_COLUMNS, EstimationExperimentService, ExperimentSpec
from apps.clocks.services.protocol import mix_seed
from core.exceptions import InvalidParameterError


@pytest.fixture
def small_spec(reference_params, reference_delta):
    return ExperimentSpec(reference_params, reference_delta, n=2000, replicates=5, base_seed=42, window=(0.0, 0.35))


class TestExperimentSpec:

    def test_settings_defaults(self):
        spec = ExperimentSpec.from_config()
        assert spec.params == ClockParams(10.0, 10.0, 20.0)
        assert (spec.n, spec.replicates, spec.base_seed) == (100000, 200, 20190417)
        assert spec.delta_p == pytest.approx(math.pi / 10)
        assert spec.effective_window == (0.0, 0.35)

    def test_section_and_seed_override(self, flat_params):
        spec = ExperimentSpec.from_config({'n': 10, 'window': [0.0, 0.5], 'base_seed': 3}, flat_params, seed=9)
        assert spec.params == flat_params
        assert spec.n == 10
        assert spec.window == (0.0, 0.5)
        assert spec.base_seed == 9

    @pytest.mark.parametrize('field, value', [
        ('n', 0), ('replicates', 0), ('base_seed', -1), ('delta_p', math.nan), ('window', (0.5, 0.1)),
    ])
    def test_rejects_invalid_fields(self, reference_params, field, value):
        kwargs = {'params': reference_params, 'delta_p': 0.1, 'n': 10, 'replicates': 2, 'base_seed': 0}
        kwargs[field] = value
        with pytest.raises(InvalidParameterError):
            ExperimentSpec(**kwargs)


class TestEstimationExperiment:

    def test_no_time_difference(self, reference_params):
        spec = ExperimentSpec(reference_params, 0.0, n=1000, replicates=10, base_seed=1)
        report = EstimationExperimentService(workers=1).run_estimation_experiment(spec)
        assert (report.replicates['k_plus'] == 1000).all()
        assert report.replicates['delta_hat'].abs().max() == pytest.approx(0.0, abs=1e-9)
        assert report.summary['bias'] == pytest.approx(0.0, abs=1e-9)

    def test_replicate_seeds(self, small_spec):
        report = EstimationExperimentService(workers=1).run_estimation_experiment(small_spec)
        assert list(report.replicates.columns) == REPLICATE_COLUMNS
        assert list(report.replicates['seed']) == [mix_seed(42, r) for r in range(5)]

    def test_worker_count_does_not_change_results(self, small_spec):
        serial = EstimationExperimentService(workers=1).run_estimation_experiment(small_spec)
        pooled = EstimationExperimentService(workers=3).run_estimation_experiment(small_spec)
        pd.testing.assert_frame_equal(serial.replicates, pooled.replicates)
        assert serial.summary == pooled.summary

    def test_summary_bounds(self, small_spec):
        report = EstimationExperimentService(workers=1).run_estimation_experiment(small_spec)
        summary = report.summary
        assert summary['cr_variance_classical'] == pytest.approx(9 / (320 * 2000), rel=1e-9)
        assert summary['cr_variance_quantum'] == pytest.approx(9 / (500 * 2000), rel=1e-6)
        assert summary['cr_variance_quantum'] < summary['cr_variance_classical']
        assert summary['variance_ratio'] == pytest.approx(summary['variance'] / summary['cr_variance_classical'])
        assert 0.0 <= summary['coverage'] <= 1.0

    def test_single_replicate_has_no_variance(self, reference_params, reference_delta):
        spec = ExperimentSpec(reference_params, reference_delta, n=500, replicates=1, base_seed=0)
        summary = EstimationExperimentService(workers=1).run_estimation_experiment(spec).summary
        assert summary['variance'] is None
        assert summary['variance_ratio'] is None

    def test_json_output(self, small_spec):
        meta = {'tool_version': '0.1.0', 'config_hash': 'abc', 'seed': 42}
        report = EstimationExperimentService(workers=1).run_estimation_experiment(small_spec, meta)
        payload = json.loads(JSONRenderer().render(ExperimentReportSerializer(report).data))
        assert set(payload) == {'meta', 'experiment', 'metrology', 'summary', 'replicates'}
        assert payload['experiment']['window'] == [0.0, 0.35]
        assert payload['summary']['window_injective'] is True
        assert len(payload['replicates']) == 5
        assert payload['metrology']['classical_fisher'] == pytest.approx(320 / 9, abs=1e-9)

    def test_replicates_carry_measurement_records(self, small_spec):
        meta = {'config_hash': 'abc', 'seed': 42}
        report = EstimationExperimentService(workers=1).run_estimation_experiment(small_spec, meta)
        replicates = ExperimentReportSerializer(report).data['replicates']
        for r, entry in enumerate(replicates):
            assert entry['record'] == {
                'n': 2000,
                'k_plus': int(report.replicates['k_plus'][r]),
                'seed': mix_seed(42, r),
                'config_hash': 'abc',
            }
            assert entry['delta_hat'] == report.replicates['delta_hat'][r]

    def test_ambiguous_window_is_flagged(self, reference_params, reference_delta):
        spec = ExperimentSpec(reference_params, reference_delta, n=1000, replicates=2, base_seed=1)
        with patch('apps.clocks.services.experiments.logger') as logger:
            report = EstimationExperimentService(workers=1).run_estimation_experiment(spec)
        assert report.summary['window_injective'] is False
        logger.warning.assert_called_once()

    def test_csv_output(self, small_spec):
        report = EstimationExperimentService(workers=1).run_estimation_experiment(small_spec, {'seed': 42})
        lines = report.to_csv().splitlines()
        assert lines[2] == '# seed=42'
        assert lines[3] == ','.join(REPLICATE_COLUMNS)
        assert len(lines) == 4 + 5


@pytest.mark.slow
def test_estimator_reaches_cramer_rao_bound(reference_params, reference_delta):
    spec = ExperimentSpec(reference_params, reference_delta, n=100000, replicates=200, base_seed=20190417,
                          window=(0.0, 0.35))
    summary = EstimationExperimentService().run_estimation_experiment(spec).summary
    assert 0.8 <= summary['variance_ratio'] <= 1.5
    assert abs(summary['bias']) < 3 * summary['standard_error']
