from common.exc import CampcException, ExitCode, add_exit_code


class HyperthermiaException(CampcException):
    """Base exception of the heat scenario."""


@add_exit_code(ExitCode.USAGE)
class ScenarioRejected(HyperthermiaException):
    """The scenario breaks an assumption the case study relies on."""


@add_exit_code(ExitCode.NUMERICAL)
class DesignFailure(HyperthermiaException):
    """An offline design LP did not reach an optimum."""
