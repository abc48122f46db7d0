"""Exception hierarchy for the prymdeg package."""


class PrymdegError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PrymdegError):
    """Input document violates the schema.

    Carries ``path``, a dotted/indexed location inside the document.
    """

    def __init__(self, path, message):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class ValidationError(PrymdegError):
    """Curve data is schema-valid but mathematically inconsistent."""


class InvolutionNotOrder2(ValidationError):
    pass


class EndpointMismatch(ValidationError):
    pass


class MissingLoopTypeFlag(ValidationError):
    pass


class ParityViolation(ValidationError):
    pass


class Disconnected(ValidationError):
    pass


class NonIntegralQuotientGenus(ValidationError):
    pass


class NonPositiveWeight(PrymdegError):
    pass


class RankTooLarge(PrymdegError):
    """A decomposition was requested above the configured rank cap."""


class DegenerateSystem(PrymdegError):
    """The functional system is not positive definite on the lattice."""


class NotApplicable(PrymdegError):
    """An operation's hypothesis fails for this curve (not an input error)."""


class HypothesisViolated(PrymdegError):
    """Lemma hypothesis fails (e.g. smooth fixed points or swapping nodes)."""


class ShiftNotHalfIntegral(PrymdegError):
    pass


class DimensionUnsupported(PrymdegError):
    pass


class InternalError(PrymdegError):
    """States that validated input should make impossible."""
