"""Scenario files.

JSON documents with the sections system, constraints, actuators, mpc and
run. Missing optional values are filled from DEFAULTS before validation.
"""
import copy
import json
from typing import Optional

from common.loggers import logger
from hyperthermia import models as heat
from hyperthermia.discretization import DEFAULT_ACTUATORS
from hyperthermia.models import HeatScenario

from .exc import SchemaError
from .schemas import SCENARIO_SCHEMA, ScenarioValidator


DEFAULTS = {
    'name': 'hyperthermia',
    'system': {
        'dt': heat.DT,
        'alpha': heat.ALPHA,
        'beta': heat.BETA,
        'gamma': heat.GAMMA,
    },
    'constraints': {
        'healthy_limit': heat.HEALTHY_LIMIT,
        'tumor_limit': heat.TUMOR_LIMIT,
        'tumor_interval': list(heat.TUMOR_INTERVAL),
    },
    'actuators': [actuator.dump() for actuator in DEFAULT_ACTUATORS],
    'mpc': {
        'N': heat.HORIZON,
        'weights': {'q': 1.0, 'r': 1.0, 'p': 1.0},
    },
    'run': {
        'steps': heat.STEPS,
        'oracle': False,
        'seed': 0,
    },
}


def merge(defaults: dict, document: dict) -> dict:
    """Nested dictionaries are merged, everything else is replaced."""
    merged = copy.deepcopy(defaults)
    for key, value in document.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def read_document(path: str) -> dict:
    try:
        with open(path) as f:
            document = json.load(f)
    except OSError as e:
        raise SchemaError(f'Cannot read scenario {path}: {e}') from e
    except json.JSONDecodeError as e:
        raise SchemaError(f'Scenario {path} is not valid JSON: {e}') from e

    if not isinstance(document, dict):
        raise SchemaError(f'Scenario {path} must hold a JSON object')
    return document


def validate(document: dict) -> dict:
    validator = ScenarioValidator()
    if not isinstance(document, dict) or not validator.validate(merge(DEFAULTS, document), SCENARIO_SCHEMA):
        errors = validator.errors if isinstance(document, dict) else {'document': ['must be an object']}
        raise SchemaError(f'Scenario does not match the schema: {errors}', errors=errors)
    return validator.document


def load_scenario(path: str, n: Optional[int] = None) -> HeatScenario:
    """Read, validate and build a scenario, optionally at another grid size."""
    document = read_document(path)
    if n is not None:
        document = merge(document, {'system': {'n': n}})

    data = validate(document)
    logger.debug(f'Loaded scenario {path} with n={data["system"]["n"]}')
    return HeatScenario.create_from(data)
