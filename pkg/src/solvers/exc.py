from common.exc import CampcException, ExitCode, add_exit_code


class SolverException(CampcException):
    """Base exception of the numerical kernels."""


@add_exit_code(ExitCode.USAGE)
class InvalidProblem(SolverException):
    """The problem data is malformed (shapes, symmetry, non-finite entries)."""


@add_exit_code(ExitCode.NUMERICAL)
class NotPositiveDefinite(SolverException):
    """The matrix is not symmetric positive definite."""


@add_exit_code(ExitCode.NUMERICAL)
class NumericalFailure(SolverException):
    """Overflow or an unexpected breakdown inside a kernel."""
