"""Exception hierarchy shared by the library and the command line."""


class ShiftlabError(Exception):
    """Base class for every error raised by shiftlab."""

    exit_code = 2


class InputError(ShiftlabError, ValueError):
    """Malformed input: bad file, dimension mismatch, unknown symbol."""

    exit_code = 2


class InstanceTooLarge(ShiftlabError):
    """An exact search was refused because the instance exceeds its cap."""

    exit_code = 2


class HypothesisError(ShiftlabError):
    """A precondition of a theorem check is not met (e.g. no strong irreducibility)."""

    exit_code = 3


class TheoremViolation(ShiftlabError):
    """A computed result contradicts a theorem that should apply."""

    exit_code = 4
