from typing import Optional

from common.exc import CampcException, ExitCode, add_exit_code


class BenchException(CampcException):
    """Base exception of the benchmark harness."""


@add_exit_code(ExitCode.USAGE)
class SchemaError(BenchException):
    """The scenario file is unreadable or does not match the schema."""

    def __init__(self, message: str, errors: Optional[dict] = None):
        super().__init__(message)
        self.errors = errors or {}
