"""Exception types shared across the package."""


class PolystrataError(Exception):
    """Base class for all package errors."""


class InputError(PolystrataError, ValueError):
    """A caller violated an operation's contract (malformed or inconsistent input)."""


class SizeLimitError(PolystrataError):
    """A well-formed request exceeded the documented desk-scale limits."""


class DivergenceError(PolystrataError):
    """A window-doubling computation failed to stabilize; carries diagnostics."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
