"""
결과 출력, 재현성, 통계, 입력 검증 유틸리티 테스트
"""

import json
import math

import numpy as np
import pytest

from nopa_bell_simulation.core.exceptions import InvalidParameterError
from nopa_bell_simulation.utils.input_validator import InputValidator, format_pi_multiple, parse_angle, require_weights
from nopa_bell_simulation.utils.parallel import THREADS_ENV, parallel_map, resolve_thread_count
from nopa_bell_simulation.utils.report_generator import (
    ReportGenerator,
    TableData,
    read_csv_report,
    read_json_report,
)
from nopa_bell_simulation.utils.reproducibility import ExperimentMetadata, ReproducibleRNG
from nopa_bell_simulation.utils.statistics import (
    SeedSweepStatistics,
    fit_convergence,
    histogram_moments,
    propagate_standard_error,
    sigma_multiplier,
    z_score,
)
from nopa_bell_simulation.utils.verification import InvariantSuite


def sample_table():
    table = TableData(columns=['r', 'lhs', 'passed'])
    table.append({'r': 1.0, 'lhs': 2.7780224359, 'passed': True})
    table.append({'r': 0.1, 'lhs': 1 / 3, 'passed': False})
    return table


def test_csv_round_trip_is_exact():
    text = ReportGenerator('csv').render(sample_table())
    assert text.splitlines()[0] == 'r,lhs,passed'
    frame = read_csv_report(text)
    assert frame['lhs'].tolist() == [2.7780224359, 1 / 3]


def test_json_document():
    meta = ExperimentMetadata({'command': 'chsh'}, seed=7).to_meta()
    document = read_json_report(ReportGenerator('json', meta).render(sample_table()))
    assert document['meta']['seed'] == 7
    assert document['meta']['config'] == {'command': 'chsh'}
    assert document['rows'][1]['lhs'] == 1 / 3


def test_json_nan_becomes_null():
    table = TableData(columns=['x'])
    table.append({'x': float('nan')})
    assert json.loads(ReportGenerator('json').render(table))['rows'] == [{'x': None}]


def test_write_to_file(tmp_path):
    path = ReportGenerator('csv').write(sample_table(), str(tmp_path / 'out' / 'result.csv'))
    assert read_csv_report(path).shape == (2, 3)


def test_table_rejects_missing_columns():
    with pytest.raises(InvalidParameterError):
        TableData(columns=['a', 'b']).append({'a': 1})
    with pytest.raises(InvalidParameterError):
        ReportGenerator('xml')


def test_substreams_depend_only_on_key():
    rng = ReproducibleRNG(42)
    first = rng.substream(3).random(5)
    rng.substream(1).random(100)
    np.testing.assert_array_equal(rng.substream(3).random(5), first)
    assert rng.child(0).seed != rng.child(1).seed
    assert ReproducibleRNG(42).child(0).seed == rng.child(0).seed
    with pytest.raises(InvalidParameterError):
        ReproducibleRNG(2 ** 64)


def test_metadata_hash_is_stable():
    a = ExperimentMetadata({'r': [1.0], 'shots': 10}, seed=0)
    b = ExperimentMetadata({'shots': 10, 'r': [1.0]}, seed=0)
    assert a.config_hash == b.config_hash
    assert set(a.to_dict()) == {'version', 'seed', 'config', 'config_hash', 'platform_info'}


def test_histogram_moments():
    moments = histogram_moments(np.array([0.0, 1.0]), np.array([3, 1]))
    assert moments['mean'] == pytest.approx(0.25)
    assert moments['variance'] == pytest.approx(0.1875)
    assert moments['standard_error'] == pytest.approx(math.sqrt(0.1875 / 4))


def test_error_helpers():
    assert propagate_standard_error([3.0, 4.0]) == pytest.approx(5.0)
    assert z_score(2.5, 2.0, 0.25) == pytest.approx(2.0)
    assert z_score(2.0, 2.0, 0.0) == 0.0
    assert z_score(2.1, 2.0, 0.0) == math.inf
    assert sigma_multiplier(0.95) == pytest.approx(1.959964, abs=1e-6)


def test_seed_sweep_statistics():
    sweep = SeedSweepStatistics(reference=1.0)
    for value in (0.9, 1.1, 1.0, 1.2):
        sweep.add(value)
    assert sweep.rms_error() == pytest.approx(math.sqrt((0.01 + 0.01 + 0.0 + 0.04) / 4))
    interval = sweep.confidence_interval()
    assert interval['lower'] < interval['mean'] < interval['upper']


def test_fit_convergence_exact_power_law():
    shots = [10 ** 3, 10 ** 4, 10 ** 5]
    fit = fit_convergence(shots, [s ** -0.5 for s in shots])
    assert fit.slope == pytest.approx(-0.5, abs=1e-12)
    with pytest.raises(InvalidParameterError):
        fit_convergence([10], [0.1])


def test_parse_angle():
    assert parse_angle('pi/4') == pytest.approx(math.pi / 4)
    assert parse_angle('-3pi/8') == pytest.approx(-3 * math.pi / 8)
    assert parse_angle('0.5') == 0.5
    assert parse_angle('2*pi') == pytest.approx(2 * math.pi)
    assert format_pi_multiple(math.pi / 4) == 0.25
    with pytest.raises(InvalidParameterError):
        parse_angle('quarter')


def test_input_validator_collects_problems():
    is_valid, errors, warnings = InputValidator().validate_experiment({
        'r': [1.0, -1.0], 'bit_depth': 4, 'd': 0, 'weights': [0, 0], 'shots': 10,
    })
    assert not is_valid
    assert len(errors) == 3
    assert warnings == ['shots=10 는 통계적으로 불충분합니다']


def test_thread_count(monkeypatch):
    monkeypatch.setenv(THREADS_ENV, '3')
    assert resolve_thread_count() == 3
    assert resolve_thread_count(2) == 2
    monkeypatch.setenv(THREADS_ENV, 'many')
    with pytest.raises(InvalidParameterError):
        resolve_thread_count()
    with pytest.raises(InvalidParameterError):
        resolve_thread_count(-1)
    assert parallel_map(lambda x: x * x, range(10), threads=4) == [x * x for x in range(10)]


def test_invariant_suite_passes():
    summary = InvariantSuite(bit_depth=3).run_all_tests()
    assert summary['failed'] == 0, [r for r in summary['results'] if not r['passed']]
    assert summary['total'] == len(summary['results'])
    with pytest.raises(InvalidParameterError):
        InvariantSuite(bit_depth=1)


def test_missing_weights_are_rejected():
    with pytest.raises(InvalidParameterError):
        require_weights(None)
    is_valid, errors, _ = InputValidator().validate_experiment({
        'command': 'sample', 'kind': 'weighted', 'r': [1.0], 'weights': None, 'shots': 0, 'random_sets': -2,
    })
    assert not is_valid
    assert len(errors) == 3
