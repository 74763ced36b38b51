"""Exception hierarchy.

Every domain error carries its class name as a stable machine-readable tag,
which the command line front end reports on standard error.
"""


class FixdynError(Exception):
    """Base class for all domain errors raised by the package."""

    @property
    def name(self) -> str:
        return type(self).__name__


class InvariantViolation(FixdynError, ValueError):
    pass


class DegenerateMap(InvariantViolation):
    pass


class IdentityMap(FixdynError):
    pass


class CapExceeded(FixdynError):
    pass


class NoConvergence(FixdynError):
    pass


class NotAFixedPoint(FixdynError):
    pass


class MultiplierOne(FixdynError):
    pass


class ContourContaminated(FixdynError):
    pass


class InternalInconsistency(FixdynError):
    pass


class PreconditionUnmet(FixdynError):
    pass


class ClusterAmbiguity(FixdynError):
    pass


class DuplicateFixedPoint(FixdynError, ValueError):
    pass


class DuplicatePoint(FixdynError, ValueError):
    pass


class DuplicatePoints(FixdynError, ValueError):
    pass


class ZeroK(FixdynError, ValueError):
    pass


class ZeroM(FixdynError, ValueError):
    pass


class NonRealInput(FixdynError, ValueError):
    pass


class InvalidK(FixdynError, ValueError):
    pass


class InvalidAlpha(FixdynError, ValueError):
    pass


class IoFailure(FixdynError, OSError):
    pass


class ParseError(FixdynError, ValueError):
    pass
