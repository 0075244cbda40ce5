"""Collaborative parsing: alternate the dialect and extension parsers.

The loop mirrors the two-parser protocol exactly: the dialect parser
consumes leading statements; when it stops before the end, the remainder
must be an extension clause, which is parsed and attached to the SELECT
statement that precedes it; then the loop continues on the rest.

parse_dialect calls the dialect parser up to twice. The first call fails
at the byte where an extension clause begins; the second call parses the
program prefix before that position. When the second call makes no
progress, the first call's failure stands.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .dialect import (
    DialectId,
    ParseOutcome,
    Statement,
    StatementKind,
    parse_prefix,
)
from .errors import ParseError
from .extension import ExtensionClause, parse_extension
from .lexer import StatementSpan

_EXTENSION_START_RE = re.compile(r"\s*TO\s+(TRAIN|PREDICT|EXPLAIN)\b", re.IGNORECASE)


@dataclass
class ParsedProgram:
    statements: list[Statement]
    source_spans: list[StatementSpan]
    source: str

    def span_text(self, index: int) -> str:
        span = self.source_spans[index]
        return self.source[span.start:span.end]


def parse_dialect(dialect: DialectId, program: str) -> ParseOutcome:
    """Dialect parsing with the up-to-twice retry protocol."""
    first = parse_prefix(dialect, program)
    if first.error is None:
        return first
    p = first.error.position
    second = parse_prefix(dialect, program[:p])
    if second.error is not None:
        return ParseOutcome([], second.error.position, second.error)
    if not second.statements:
        # nothing consumable before the failure: the first error stands
        return first
    return ParseOutcome(second.statements, p, None)


def append_extension(statements: list[Statement], ext: ExtensionClause) -> list[Statement]:
    """Attach an extension clause to the trailing SELECT statement."""
    if not statements or statements[-1].kind is not StatementKind.SELECT:
        raise ParseError("extension clause requires a preceding SELECT")
    if statements[-1].extension is not None:
        raise ParseError("statement already has an extension clause")
    statements[-1].extension = ext
    return statements


def parse_program(dialect: DialectId, program: str) -> ParsedProgram:
    """Parse a full program, attaching extension clauses to their SELECTs.

    Raises ParseError with a position rebased to the original program.
    Statement spans are contiguous from offset 0, matching the brute-force
    statement splitter: an extended SELECT occupies one span ending one
    past the extension clause's semicolon.
    """
    statements: list[Statement] = []
    spans: list[StatementSpan] = []
    offset = 0
    span_start = 0
    while True:
        remaining = program[offset:]
        outcome = parse_dialect(dialect, remaining)
        if outcome.error is not None:
            pos = offset + outcome.error.position
            if _EXTENSION_START_RE.match(program[pos:]):
                # an extension clause where no statement was consumed: let the
                # structural check produce the precise error
                ext, _, err = parse_extension(program[pos:])
                if err is not None:
                    raise ParseError(err.message, pos + err.position)
                append_extension(statements, ext)
                raise ParseError("extension clause requires a preceding SELECT", pos)
            raise ParseError(outcome.error.message, pos)
        for stmt in outcome.statements:
            stmt.start += offset
            stmt.end += offset
            spans.append(StatementSpan(span_start, stmt.end))
            span_start = stmt.end
            statements.append(stmt)
        if outcome.stop_at >= len(remaining):
            break
        consumed = offset + outcome.stop_at
        ext, ext_stop, err = parse_extension(program[consumed:])
        if err is not None:
            raise ParseError(err.message, consumed + err.position)
        append_extension(statements, ext)
        end = consumed + ext_stop
        statements[-1].end = end
        statements[-1].raw_text = program[statements[-1].start:end]
        spans[-1] = StatementSpan(spans[-1].start, end)
        span_start = end
        offset = end
        if offset >= len(program):
            break
    return ParsedProgram(statements, spans, program)
