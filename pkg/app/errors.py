"""Error types for torus group and bundle computations.

This module defines the exception hierarchy raised by the library. Every
error carries the process exit code the command-line front end reports
when the error escapes a command.
"""


class TorusBundleError(Exception):
    """Base class for all library errors.

    :cvar exit_code: Exit status reported by the CLI for this error
    """

    exit_code: int = 2


class SpecParseError(TorusBundleError):
    """A group specification file could not be parsed."""


class CapExceeded(TorusBundleError):
    """Group closure grew beyond the configured cap."""

    exit_code = 3


class RankCapExceeded(TorusBundleError):
    """Requested bundle rank exceeds the configured rank cap."""

    exit_code = 3


class NotFinite(TorusBundleError):
    """The generated group is not finite (propagated from a closure cap)."""


class InvalidParams(TorusBundleError):
    """Parameters are inconsistent with the requested construction."""


class Unsupported(TorusBundleError):
    """The input lies outside the supported families or groups."""


class OneDimensionalOutOfScope(TorusBundleError):
    """Positive-dimensional (circle) actions are not classified here."""


class NotLatticeMap(TorusBundleError):
    """A conjugating map does not carry lattice matrices to integral ones."""

    exit_code = 4


class InconsistentGram(TorusBundleError):
    """A matrix does not preserve the Gram form, or the form is not definite."""

    exit_code = 4


class TilingFailure(TorusBundleError):
    """Translates of a fundamental domain overlap or fail to cover."""

    exit_code = 4


class NonIntegralMultiplicity(TorusBundleError):
    """A class function is not the character of a representation."""

    exit_code = 4


class NotAHomomorphism(TorusBundleError):
    """An element map between realized groups is not a homomorphism."""

    exit_code = 4


class ConjugationMismatch(TorusBundleError):
    """A conjugating element does not carry one stabilizer onto the other."""

    exit_code = 4
