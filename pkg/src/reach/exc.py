from common.exc import CampcException, ExitCode, add_exit_code


class ReachException(CampcException):
    """Base exception of the reachability layer."""


@add_exit_code(ExitCode.USAGE)
class InvalidSet(ReachException):
    """The set data is malformed."""


@add_exit_code(ExitCode.USAGE)
class SingularDynamics(ReachException):
    """A backward recursion needs an invertible A."""
