"""Exception and warning classes shared across the package."""


class PhaseLocError(Exception):
    """Base class for all errors raised by phaseloc."""


class ConfigError(PhaseLocError, ValueError):
    """Invalid user input: bad descriptors, parameters or run configuration."""


class NumericalValidityError(PhaseLocError):
    """A numerical result violates a validity condition (grid too small, negative Q, ...)."""


class GridError(NumericalValidityError):
    """The sampling grid is inadequate for the requested computation."""


class TruncationWarning(UserWarning):
    """The Fock cutoff is probably too small for the requested parameters."""
