"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: InputError -> 2, ResourceError -> 3,
DomainError (a verification-level failure on valid input) -> 1.
"""


class PosetsheafError(Exception):
    """Base class for all errors raised by this package."""


class InputError(PosetsheafError):
    """Malformed or out-of-contract input (unknown label, bad shape, ...)."""


class ResourceError(PosetsheafError):
    """A configured size bound would be exceeded; carries the bound."""

    def __init__(self, message: str, bound: int | None = None):
        super().__init__(message)
        self.bound = bound


class DomainError(PosetsheafError):
    """Input is well-formed but violates a mathematical precondition,
    e.g. a non-distributive lattice where distributivity is required."""
