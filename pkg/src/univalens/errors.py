"""Exception hierarchy shared by every univalens module."""

from __future__ import annotations


class UnivalensError(Exception):
    """Base class for all errors raised by univalens."""


class ParseError(UnivalensError, ValueError):
    """Syntax error in an expression; ``offset`` is a 1-based byte offset."""

    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at byte {offset}"
        if self.expected:
            detail += f"; expected one of: {', '.join(sorted(self.expected))}"
        super().__init__(detail)


class UnknownIdentifierError(ParseError):
    pass


class DomainError(UnivalensError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class EvaluationError(UnivalensError, ArithmeticError):
    """Numerical evaluation failed; carries the offending point when known."""

    def __init__(self, message: str, z: complex | None = None, subexpression: str | None = None):
        self.z = z
        self.subexpression = subexpression
        parts = [message]
        if subexpression is not None:
            parts.append(f"in '{subexpression}'")
        if z is not None:
            parts.append(f"at z={complex(z)!r}")
        super().__init__(" ".join(parts))


class PoleError(EvaluationError):
    pass


class OverflowGuardError(EvaluationError):
    pass


class VanishingDenominatorError(EvaluationError):
    pass


class CriticalPointError(EvaluationError):
    pass


class DegenerateDerivativeError(EvaluationError):
    pass


class SingularityError(EvaluationError):
    pass


class WindingError(EvaluationError):
    pass


class ConvergenceError(UnivalensError, RuntimeError):
    pass


class AmbiguousPresetError(UnivalensError, ValueError):
    pass
