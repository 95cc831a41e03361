from typing import Sequence

from common.exc import CampcException, ExitCode, add_exit_code


class MpcException(CampcException):
    """Base exception of the MPC layer."""


@add_exit_code(ExitCode.USAGE)
class InvalidMpcProblem(MpcException):
    """Weights, gains or sets do not fit the plant."""


@add_exit_code(ExitCode.INFEASIBLE)
class Infeasible(MpcException):
    """No input sequence satisfies the constraints at the given state."""

    def __init__(self, message: str, rows: Sequence = ()):
        super().__init__(message)
        self.rows = tuple(rows)
