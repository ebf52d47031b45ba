"""Exception hierarchy.

Every domain error derives from :class:`EsakiaError`; the CLI maps
:class:`SizeLimitExceeded` to exit status 2 and everything else to 1.
"""


class EsakiaError(Exception):
    """Base class for all domain errors raised by the package."""


class OrderError(EsakiaError):
    """A relation is not a partial order (antisymmetry fails after closure)."""


class UnknownElement(EsakiaError):
    pass


class SizeLimitExceeded(EsakiaError):
    """An enumeration would exceed a configured cap.

    ``partial`` carries whatever complete prefix of the computation was
    finished before the cap was hit (for example a truncated complex).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class IncompatibleMaps(EsakiaError):
    pass


class NotAnUpset(EsakiaError):
    pass


class NotGOpen(EsakiaError):
    pass


class NotPMorphism(EsakiaError):
    pass


class NotPrelinear(EsakiaError):
    pass


class NotDiscrete(EsakiaError):
    pass


class MissingElement(EsakiaError):
    pass


class ImageNotInLayer(EsakiaError):
    pass


class StabilizationFailure(EsakiaError):
    """A certificate that must hold by theory did not; indicates a bug."""


class InsufficientDepth(EsakiaError):
    pass


class UnboundVariable(EsakiaError):
    pass


class ParseError(EsakiaError):
    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class UnknownSubcommand(EsakiaError):
    pass


class UsageError(EsakiaError):
    """Malformed command line."""
