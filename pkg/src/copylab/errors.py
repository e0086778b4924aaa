"""Error types shared across the package.

Capacity errors signal that an exact computation was refused because its
cost bound was exceeded; validation errors signal malformed inputs.  The CLI
maps them to distinct exit codes (3 and 2).
"""


class CopylabError(Exception):
    """Base class for package errors."""


class ValidationError(CopylabError, ValueError):
    """Input violates a documented precondition or type invariant."""


class CapacityError(CopylabError, RuntimeError):
    """Exact computation refused: the stated cost budget would be exceeded."""
