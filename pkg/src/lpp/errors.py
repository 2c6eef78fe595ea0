"""Exception hierarchy shared by every lpp module."""


class LppError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(LppError, ValueError):
    pass


class NoInverse(LppError, ArithmeticError):
    pass


class DomainError(LppError, ValueError):
    pass


class ConfigError(LppError, ValueError):
    pass


class ParseError(LppError, ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class OutOfRange(LppError, ValueError):
    pass


class ProtocolViolation(LppError):
    """The peer sent something the session state machine does not allow."""


class DecodeError(ProtocolViolation):
    """A frame or field could not be decoded (truncated, unknown type, bad element)."""


class SessionAborted(ProtocolViolation):
    """The peer sent an Abort frame."""

    def __init__(self, reason: str):
        super().__init__(f"peer aborted: {reason}")
        self.reason = reason


class HaltedDirectNeighbour(LppError):
    """x and y are adjacent, so the common-neighbour protocol was not run.

    ``side`` is ``"responder"`` when the responder reported the edge, or
    ``"querier"`` when the querier's own graph already holds it.
    """

    def __init__(self, side: str):
        super().__init__(f"direct neighbours (edge x-y found by {side})")
        self.side = side
