"""Exception hierarchy shared by every module."""


class FaultAEError(Exception):
    """Base class for all package errors."""


class ConfigError(FaultAEError, ValueError):
    pass


class SpecError(FaultAEError, ValueError):
    """Invalid or inconsistent fault specification."""


class SchemaError(FaultAEError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ParseError(FaultAEError, ValueError):
    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class ShapeError(FaultAEError, ValueError):
    pass


class DataError(FaultAEError, ValueError):
    """Empty or otherwise unusable input data."""


class InsufficientDataError(DataError):
    pass


class DegenerateSignalError(DataError):
    pass


class DivergenceError(FaultAEError, ArithmeticError):
    def __init__(self, message, epoch=None):
        super().__init__(message)
        self.epoch = epoch


class FormatError(FaultAEError, ValueError):
    """Unreadable, truncated or version-mismatched model file."""


class EmptyEvaluationError(FaultAEError, ValueError):
    pass
