import json

import pytest

from bench.exc import SchemaError
from bench.scenario import DEFAULTS, load_scenario, merge, read_document, validate
from settings.bench import DEFAULT_SCENARIO


@pytest.fixture
def scenario_file(tmp_path):
    def write(document):
        path = tmp_path / 'scenario.json'
        path.write_text(json.dumps(document) if not isinstance(document, str) else document)
        return str(path)

    return write


def test_merge():
    merged = merge({'a': {'b': 1, 'c': 2}, 'd': [1]}, {'a': {'b': 3}, 'd': [2, 3]})

    assert merged == {'a': {'b': 3, 'c': 2}, 'd': [2, 3]}


def test_merge_leaves_defaults_alone():
    merge(DEFAULTS, {'system': {'alpha': 1.0}})

    assert DEFAULTS['system']['alpha'] != 1.0


def test_defaults_are_filled():
    data = validate({'system': {'n': 10}})

    assert data['system']['n'] == 10
    assert data['mpc']['N'] == 10
    assert data['run']['steps'] == 120
    assert len(data['actuators']) == 2


def test_shipped_scenario_is_valid():
    data = validate(read_document(DEFAULT_SCENARIO))

    assert data['system']['n'] == 2000
    assert data['constraints']['tumor_interval'] == [0.6, 0.9]


@pytest.mark.parametrize('document, field', [
    ({'system': {'n': 10, 'alpha': -1.0}}, 'system'),
    ({'system': {'n': 2}}, 'system'),
    ({}, 'system'),
    ({'system': {'n': 10}, 'mpc': {'N': 0}}, 'mpc'),
    ({'system': {'n': 10}, 'constraints': {'tumor_interval': [0.5]}}, 'constraints'),
    ({'system': {'n': 10}, 'actuators': []}, 'actuators'),
    ({'system': {'n': 10}, 'solver': 'osqp'}, 'solver'),
])
def test_schema_errors(document, field):
    with pytest.raises(SchemaError) as error:
        validate(document)

    assert field in error.value.errors
    assert error.value.exit_code == 1


def test_unreadable_documents(scenario_file, tmp_path):
    with pytest.raises(SchemaError):
        read_document(scenario_file('{"system": '))
    with pytest.raises(SchemaError):
        read_document(scenario_file([1, 2]))
    with pytest.raises(SchemaError):
        read_document(str(tmp_path / 'missing.json'))


def test_load_scenario_with_grid_override(scenario_file):
    path = scenario_file({'name': 'small', 'system': {'n': 2000}, 'run': {'steps': 7}})

    scenario = load_scenario(path, n=12)

    assert scenario.n == 12
    assert scenario.name == 'small'
    assert scenario.steps == 7
