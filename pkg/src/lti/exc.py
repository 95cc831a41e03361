from common.exc import CampcException, ExitCode, add_exit_code


class ModelException(CampcException):
    """Base exception of the plant model."""


@add_exit_code(ExitCode.USAGE)
class InvalidModel(ModelException):
    """The system or set data is malformed."""


@add_exit_code(ExitCode.USAGE)
class DimensionMismatch(InvalidModel):
    """A vector does not match the dimension it is used with."""
