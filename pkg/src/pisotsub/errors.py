"""Exception hierarchy shared across the package."""


class PisotsubError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(PisotsubError):
    """A document could not be parsed (malformed JSON, wrong shape)."""


class ValidationError(PisotsubError):
    """A parsed document violates a structural invariant."""


class PreconditionError(PisotsubError):
    """An operation was called on an input outside its domain."""


class ResourceLimitError(PisotsubError):
    """A configured cap (word length, iteration count) was exceeded."""


class PrecisionError(PisotsubError):
    """An exact decision could not be certified within the precision cap."""


class LatticeHypothesisError(PreconditionError):
    """Tile lattice = return lattice could not be established and was not asserted."""


class ContradictionFlag(PisotsubError):
    """An exact computation contradicts a proved statement; indicates a bug or bad input."""
