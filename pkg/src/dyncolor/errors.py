"""Exception hierarchy shared by every dyncolor module."""


class DicError(Exception):
    """Base class for all errors raised by dyncolor."""


class DuplicateId(DicError, KeyError):
    pass


class UnknownId(DicError, KeyError):
    pass


class InvalidQuery(DicError, ValueError):
    pass


class InvalidInterval(DicError, ValueError):
    pass


class ModeViolation(DicError):
    """Operation not permitted in the engine's (or record's) mode."""


class NotMarked(DicError, ValueError):
    pass


class NotConsecutiveOnes(DicError, ValueError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class DimensionMismatch(DicError, ValueError):
    pass


class TraceInvalid(DicError, ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class BadParams(DicError, ValueError):
    pass


class CheckFailed(DicError):
    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class FormatError(DicError, ValueError):
    """Malformed matrix/vector text input."""
