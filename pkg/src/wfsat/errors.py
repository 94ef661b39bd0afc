"""Exception types shared across the package."""

from __future__ import annotations


class WfsatError(Exception):
    """Base class for all package errors."""


class XorPresent(WfsatError):
    """An operation requiring an xor-free workflow met an xor node."""


class OverlapError(WfsatError):
    """Sequence operands share elements."""


class NotInSequence(WfsatError):
    """A referenced element does not occur in the sequence."""


class NotASequence(WfsatError):
    """The given ordering is not an execution sequence of the instance."""


class SizeLimit(WfsatError):
    """An enumeration would exceed its configured cap."""

    def __init__(self, message: str, required: int, cap: int):
        super().__init__(message)
        self.required = required
        self.cap = cap


class TooManyBlocks(WfsatError):
    """A partition has more blocks than there are users."""


class ZeroWeight(WfsatError):
    """A zero violation weight would conflate violation with satisfaction."""


class SchemaSyntaxError(WfsatError):
    """Malformed instance document; carries the location of the problem."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class SchemaSemanticError(WfsatError):
    """Well-formed document describing an invalid schema."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid schema: {lines}")
