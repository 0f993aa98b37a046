"""Exception hierarchy shared by every module."""

from __future__ import annotations


class HyperforestError(Exception):
    """Base class for all errors raised by this package."""


class NotDivisible(HyperforestError, ArithmeticError):
    pass


class DimensionMismatch(HyperforestError, ValueError):
    pass


class OddInput(HyperforestError, ValueError):
    pass


class ConstantTerm(HyperforestError, ValueError):
    pass


class CapExceeded(HyperforestError):
    """A configured size cap was hit. ``cap`` names it, ``limit`` is its value."""

    def __init__(self, cap: str, value: int, limit: int):
        self.cap = cap
        self.value = value
        self.limit = limit
        super().__init__(f"{cap} cap exceeded: {value} > {limit}")


class OverlappingBlocks(HyperforestError, ValueError):
    pass


class LengthMismatch(HyperforestError, ValueError):
    pass


class DuplicateVertices(HyperforestError, ValueError):
    pass


class UnknownIdentity(HyperforestError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown identity"


class NotAGraph(HyperforestError, ValueError):
    pass


class NotUniform(HyperforestError, ValueError):
    pass


class SizeCap(HyperforestError, ValueError):
    pass


class SizeMismatch(HyperforestError, ValueError):
    pass


class NonCommutingEntries(HyperforestError, ValueError):
    pass


class ParseError(HyperforestError, ValueError):
    pass
