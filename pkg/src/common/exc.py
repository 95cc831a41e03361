from enum import IntEnum
from typing import Union


class ExitCode(IntEnum):
    """Process exit codes of the command line."""

    OK = 0
    USAGE = 1
    INFEASIBLE = 2
    NUMERICAL = 3


def add_exit_code(code: ExitCode):
    def class_decorator(cls):
        cls.exit_code = code
        return cls

    return class_decorator


@add_exit_code(ExitCode.NUMERICAL)
class CampcException(Exception):
    """Base exception."""

    def __init__(self, message: str, exit_code: Union[ExitCode, None] = None):
        super().__init__(message)

        if exit_code is not None:
            self.exit_code = exit_code

    def __str__(self):
        if self.args:
            return str(self.args[0])
        return self.__class__.__name__
