"""Exception types raised across the package."""


class TreeIncError(Exception):
    """Base class for all package errors."""


class TreeSyntaxError(TreeIncError, ValueError):
    """Malformed tree text. ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class SizeGuardError(TreeIncError):
    """An exponential oracle was asked to run beyond its size guard."""


class ResourceCapExceeded(TreeIncError):
    """A family table or operation budget exceeded its configured cap."""


class PreconditionError(TreeIncError, ValueError):
    """Input violates the precondition of the selected algorithm."""


class InstanceTimeout(TreeIncError):
    """A run passed its wall-clock deadline."""


class InfeasibleSpec(TreeIncError, ValueError):
    """Generator parameters that no instance can satisfy."""
