"""Exception hierarchy shared by the library and the command line."""


class FlatSphereError(Exception):
    """Base class for every error raised by this package."""

    exit_code = 1


class InputError(FlatSphereError, ValueError):
    """Malformed input: bad shapes, dimension mismatches, parse failures."""

    exit_code = 2


class PreconditionError(FlatSphereError):
    """The input is well formed but a mathematical hypothesis fails."""

    exit_code = 3


class NoDualSphereError(PreconditionError):
    """The class has no algebraically dual sphere, so km is undefined."""


class ResourceExhausted(FlatSphereError):
    """A backtracking search hit its node budget before finishing."""

    exit_code = 4


class CertificateUnavailable(FlatSphereError):
    """Two forms are isometric by classification, but no explicit
    change of basis was constructed within the search budget."""

    exit_code = 4

    def __init__(self, message, description=None):
        super().__init__(message)
        self.description = description


class InternalError(FlatSphereError, AssertionError):
    """A guaranteed mathematical identity failed; indicates a bug."""
