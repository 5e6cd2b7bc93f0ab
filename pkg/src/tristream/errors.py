"""Exception types shared across the package."""


class TristreamError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(TristreamError, ValueError):
    """A caller-supplied parameter is out of its documented range."""


class ParseError(TristreamError, ValueError):
    """An edge-list input is malformed. Carries a 1-based line number."""

    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no


class ValidationError(TristreamError, ValueError):
    """Input violates a structural rule (self-loop or duplicate edge in strict mode)."""

    def __init__(self, message, line_no=None):
        super().__init__(message)
        self.line_no = line_no
