from typing import Sequence

from common.exc import CampcException, ExitCode, add_exit_code


class PresolveException(CampcException):
    """Base exception of the pre-solve."""


@add_exit_code(ExitCode.INFEASIBLE)
class InfeasibleCandidate(PresolveException):
    """The candidate sequence violates the constraints it must certify."""

    def __init__(self, message: str, rows: Sequence[int] = ()):
        super().__init__(message)
        self.rows = tuple(rows)
