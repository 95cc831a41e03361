from common.exc import CampcException, ExitCode, add_exit_code


class ControllerException(CampcException):
    """Base exception of the receding horizon controller."""


@add_exit_code(ExitCode.USAGE)
class InvalidMode(ControllerException):
    """Unknown controller mode."""


@add_exit_code(ExitCode.NUMERICAL)
class SoundnessViolation(ControllerException):
    """The reduced problem returned a sequence the full problem rejects."""
