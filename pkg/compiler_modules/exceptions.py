"""
Exception hierarchy for the RRAM compiler.

Validation failures derive from ValueError so the service layer and the
views can treat them as bad input; sequencing failures derive from
RuntimeError.
"""


class RramError(Exception):
    """Base class for every error raised by the compiler modules."""


class GeometryError(RramError, ValueError):
    """The requested (M, N, B) does not describe a legal array."""


class NonPowerOfTwo(GeometryError):
    pass


class InvalidColumnCount(GeometryError):
    pass


class InvalidWordWidth(GeometryError):
    pass


class AddressOutOfRange(RramError, ValueError):
    pass


class ProfileError(RramError, ValueError):
    """Base class for technology profile problems."""


class ProfileParseError(ProfileError):
    """
    The profile file could not be parsed.

    Attributes:
        line (int, optional): 1-based line of a JSON syntax error
        column (int, optional): 1-based column of a JSON syntax error
        field (str, optional): dotted path of a missing or unknown key
    """

    def __init__(self, message, line=None, column=None, field=None):
        super().__init__(message)
        self.line = line
        self.column = column
        self.field = field


class ProfileValidationError(ProfileError):
    """A profile value violates one of the profile invariants."""


class FillError(RramError, ValueError):
    pass


class NetlistError(RramError, ValueError):
    pass


class ScriptError(RramError, ValueError):
    """A simulation script line could not be parsed."""

    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class OverlappingOperation(RramError, RuntimeError):
    """An operation was issued while the controller was busy."""
