import yaml
from cerberus import Validator


class ScenarioValidator(Validator):
    """Validator with the positivity rule physical parameters use."""

    def _check_with_positive(self, field, value):
        if value <= 0:
            self._error(field, 'must be positive')


_SCENARIO_SCHEMA = """
name:
    type: string
    empty: False

system:
    type: dict
    required: True
    schema:
        n:
            type: integer
            required: True
            min: 3
        dt:
            type: number
            check_with: positive
        alpha:
            type: number
            check_with: positive
        beta:
            type: number
            check_with: positive
        gamma:
            type: number
            check_with: positive

constraints:
    type: dict
    schema:
        healthy_limit:
            type: number
            check_with: positive
        tumor_limit:
            type: number
            check_with: positive
        tumor_interval:
            type: list
            minlength: 2
            maxlength: 2
            schema:
                type: number
                min: 0
                max: 1

actuators:
    type: list
    minlength: 1
    schema:
        type: dict
        schema:
            amplitude:
                type: number
                required: True
                check_with: positive
            components:
                type: list
                required: True
                minlength: 1
                schema:
                    type: dict
                    schema:
                        center:
                            type: number
                            required: True
                        width:
                            type: number
                            required: True
                            check_with: positive
                        weight:
                            type: number
                            check_with: positive

mpc:
    type: dict
    schema:
        N:
            type: integer
            min: 1
        weights:
            type: dict
            schema:
                q:
                    type: number
                    check_with: positive
                r:
                    type: number
                    check_with: positive
                p:
                    type: number
                    check_with: positive
        tol_kkt:
            type: number
            check_with: positive

run:
    type: dict
    schema:
        steps:
            type: integer
            min: 0
        oracle:
            type: boolean
        seed:
            type: integer
            min: 0
"""
SCENARIO_SCHEMA = yaml.safe_load(_SCENARIO_SCHEMA)
