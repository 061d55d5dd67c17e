"""Exception types shared across the engine."""


class EngelfitError(Exception):
    """Base class for all engine errors."""


class ParseError(EngelfitError, ValueError):
    """Malformed cycle notation, group file, or report text."""


class ResourceLimitError(EngelfitError, RuntimeError):
    """A configured cap (element count, lattice size, iteration count) was hit.

    ``partial_count`` carries how far the computation got before stopping.
    """

    def __init__(self, message, partial_count=None):
        super().__init__(message)
        self.partial_count = partial_count


class AutomorphismError(EngelfitError, ValueError):
    """Generator images fail to define a bijective homomorphism.

    ``pair`` holds a witness: two inputs whose images are inconsistent.
    """

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class PreconditionError(EngelfitError, ValueError):
    """An operation's stated precondition does not hold for the input."""


class ConsistencyError(EngelfitError, RuntimeError):
    """Two independent computations of the same value disagree.

    This always signals a bug in the engine, never a mathematical finding.
    """
