"""
Exception hierarchy for cows-adapt.

Library code raises these; the command-line layer turns them into exit codes.
"""

from typing import Iterable, Optional, Tuple


class CowsError(Exception):
    """Base class for every error raised by cows-adapt."""


class CowsSyntaxError(CowsError):
    """
    Positioned syntax error for model sources, formulas and property files.

    Args:
        message: Human-readable description
        line: 1-based line number (0 if unknown)
        column: 1-based column number (0 if unknown)
        expected: Token names the parser would have accepted instead
    """

    def __init__(
        self,
        message: str,
        line: int = 0,
        column: int = 0,
        expected: Iterable[str] = (),
    ) -> None:
        self.message = message
        self.line = line
        self.column = column
        self.expected: Tuple[str, ...] = tuple(sorted(set(expected)))
        super().__init__(self._render())

    def _render(self) -> str:
        text = f"{self.line}:{self.column}: {self.message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        return text


class ModelError(CowsError):
    """A source that parses but violates a model invariant."""

    def __init__(self, message: str, line: int = 0, column: int = 0) -> None:
        self.message = message
        self.line = line
        self.column = column
        where = f"{line}:{column}: " if line else ""
        super().__init__(f"{where}{message}")


class EvaluationError(CowsError):
    """Expression evaluation failed."""


class UnboundVariableError(EvaluationError):
    def __init__(self, name: str) -> None:
        self.name = name
        super().__init__(f"unbound variable {name.split('$', 1)[0]}")


class ExprTypeError(EvaluationError):
    def __init__(self, message: str) -> None:
        super().__init__(message)


class AutFormatError(CowsError):
    """Malformed Aldebaran text."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class UnsupportedPredicateError(CowsError):
    """A state predicate needs information the checked LTS does not carry."""


class ScenarioError(CowsError):
    """Unknown scenario or malformed scenario parameters."""
