"""Exception hierarchy shared across the toolchain.

The dialect-parser boundary never raises across it (errors travel by value
inside ParseOutcome); everything above that boundary uses these exceptions.
"""

from __future__ import annotations


class SqlBridgeError(Exception):
    """Base class for all toolchain errors."""


class LexError(SqlBridgeError):
    """Lexical error with the byte offset of the offending character.

    For unterminated strings/comments/quoted identifiers the position is
    the byte offset of the opening delimiter.
    """

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at byte {position})")
        self.message = message
        self.position = position


class ParseError(SqlBridgeError):
    """Syntax error with an optional byte position into the parsed text."""

    def __init__(self, message: str, position: int | None = None):
        if position is None:
            super().__init__(message)
        else:
            super().__init__(f"{message} (at byte {position})")
        self.message = message
        self.position = position


class WorkflowError(SqlBridgeError):
    """Workflow document violates the YAML schema or its invariants."""


class CompileError(SqlBridgeError):
    """Statement cannot be compiled into an executable plan."""


class ExecutionError(SqlBridgeError):
    """Failure while executing a plan against the local stores."""
