from __future__ import annotations


class BlocktiltError(Exception):
    """Base class for every error the library raises."""

    exit_code = 3


class ParseError(BlocktiltError):
    exit_code = 2


class CacheIOError(BlocktiltError):
    exit_code = 4


class IllegalLevel(BlocktiltError):
    pass


class ShapeMismatch(BlocktiltError):
    pass


class TypeMismatch(BlocktiltError):
    pass


class ScopeTooSmall(BlocktiltError):
    pass


class NotIntegral(BlocktiltError):
    pass


class NotInRootLattice(BlocktiltError):
    pass


class NotComparable(BlocktiltError):
    pass


class DifferentBlocks(BlocktiltError):
    pass


class SingularBlockUnsupported(BlocktiltError):
    pass


class ScaleGuardrail(BlocktiltError):
    pass


class OutOfScope(BlocktiltError):
    pass
