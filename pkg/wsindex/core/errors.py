"""Exception types raised by wsindex.

Everything derives from a built-in so callers may catch ``ValueError`` or
``RuntimeError`` without importing this module.
"""

from typing import Optional


class WSeqParseError(ValueError):
    """Malformed weighted-sequence text.

    Attributes:
        line_number (Optional[int]): 1-based line of the offending text, if known.
    """
    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class WSeqValidationError(ValueError):
    """Input that parses but violates a documented invariant."""


class IndexLoadError(ValueError):
    """Corrupt, truncated, or unknown serialized index."""


class ConstructionError(RuntimeError):
    """Internal inconsistency detected while building a z-estimation."""
