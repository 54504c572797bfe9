"""Exception types for the nevanlab engine.

Library code raises these; only ``cli.main`` turns them into exit codes.
"""


class LabError(Exception):
    """Base class for every engine error."""

    exit_code = 1


class DomainError(LabError, ValueError):
    """An argument lies outside the domain of a formula (|z| > r, H not in (0,1), ...)."""


class InputError(LabError, ValueError):
    """Malformed or inconsistent user input."""

    exit_code = 2


class ConfigError(InputError):
    """A curve or run configuration could not be parsed or validated."""


class PrecisionError(LabError, ArithmeticError):
    """A requested tolerance could not be reached within the configured caps."""


class ResolutionError(LabError, ArithmeticError):
    """Argument tracking lost continuity; the function is too wild at this resolution."""


class CapabilityError(LabError):
    """The object lacks a capability the operation needs (e.g. a rational locus)."""


class StructuralError(LabError, ValueError):
    """A linear-algebra structure is wrong for the request (injective system, too many points)."""


class PreconditionError(LabError, ValueError):
    """A documented precondition fails; the message says what to change."""


class PropertyViolation(LabError):
    """A verified property failed. Raised by the command layer, never by the engine."""
