"""Pluggable SQL dialect parsers with prefix semantics.

Each dialect parser consumes as many complete leading statements as it can
and reports, by value, the byte position where it stopped or failed. That
error-position contract is what the collaborative parser builds on: a
statement followed by a TO TRAIN/PREDICT/EXPLAIN clause fails exactly at
the byte of the reserved word TO.

Two flavors are registered: "generic" (double-quoted identifiers) and
"mysql" (backtick-quoted identifiers). Both accept bare aliases and both
reserve TO.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

from .errors import LexError, ParseError
from .lexer import (
    Token,
    TokenKind,
    quoted_identifier_value,
    string_value,
    tokenize,
)

#: Keywords no dialect ever accepts as a table, column, or alias name.
#: TRAIN/PREDICT/EXPLAIN and the extension sub-clause words are deliberately
#: absent: they stay legal as identifiers (e.g. "FROM t3 TRAIN").
RESERVED = frozenset({
    "SELECT", "FROM", "WHERE", "LIMIT", "AS", "CREATE", "TABLE", "TO", "AND",
})

COMPARISON_OPS = frozenset({"=", "<", ">", "<=", ">=", "<>"})


class DialectId(Enum):
    GENERIC = "generic"
    MYSQL = "mysql"


_QUOTE_CHAR = {DialectId.GENERIC: '"', DialectId.MYSQL: "`"}


def dialect_from_name(name: str) -> DialectId:
    for d in DialectId:
        if d.value == name:
            return d
    raise ParseError(f"unknown dialect {name!r}")


@dataclass(frozen=True)
class ParseIssue:
    position: int
    message: str


@dataclass(frozen=True)
class ColumnRef:
    name: str


@dataclass(frozen=True)
class LiteralValue:
    value: Union[int, float, str]
    text: str  # raw source rendering, used to name projected constants


@dataclass(frozen=True)
class Projection:
    expr: Union[ColumnRef, LiteralValue]
    alias: Optional[str] = None


@dataclass(frozen=True)
class FromItem:
    table: str
    alias: Optional[str] = None


@dataclass(frozen=True)
class Comparison:
    column: str
    op: str  # one of COMPARISON_OPS
    value: Union[int, float, str]


@dataclass(frozen=True)
class SelectAst:
    star: bool
    projections: tuple[Projection, ...]
    from_items: tuple[FromItem, ...]
    where: tuple[Comparison, ...]
    limit: Optional[int]


class StatementKind(Enum):
    SELECT = "select"
    CREATE_TABLE_AS = "create_table_as"
    OTHER_PASSTHROUGH = "other_passthrough"


@dataclass
class Statement:
    """One parsed statement; extension is attached later by the collaborative parser."""

    kind: StatementKind
    raw_text: str
    select_ast: Optional[SelectAst] = None
    extension: Optional[object] = None  # ExtensionClause, set by collab.append_extension
    create_target: Optional[str] = None
    create_select: Optional[SelectAst] = None
    start: int = 0
    end: int = 0


@dataclass(frozen=True)
class ParseOutcome:
    statements: list[Statement]
    stop_at: int
    error: Optional[ParseIssue] = None


class _Fail(Exception):
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message


class _DialectParser:
    def __init__(self, source: str, tokens: list[Token], quote_char: str):
        self.source = source
        self.tokens = tokens
        self.quote_char = quote_char
        self.i = 0

    # -- token helpers -------------------------------------------------

    def at_end(self) -> bool:
        return self.i >= len(self.tokens)

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, message: str, position: Optional[int] = None):
        if position is None:
            position = self.peek().start if not self.at_end() else len(self.source)
        raise _Fail(position, message)

    def is_kw(self, word: str) -> bool:
        return (not self.at_end()
                and self.peek().kind is TokenKind.KEYWORD
                and self.peek().upper == word)

    def expect_kw(self, word: str) -> Token:
        if not self.is_kw(word):
            self.fail(f"expected {word}")
        return self.advance()

    def is_punct(self, text: str) -> bool:
        return (not self.at_end()
                and self.peek().kind is TokenKind.PUNCTUATION
                and self.peek().text == text)

    def _is_name(self, tok: Token) -> bool:
        if tok.kind is TokenKind.IDENTIFIER:
            return True
        if tok.kind is TokenKind.KEYWORD and tok.upper not in RESERVED:
            return True
        if tok.kind is TokenKind.QUOTED_IDENTIFIER and tok.text[0] == self.quote_char:
            return True
        return False

    def at_name(self) -> bool:
        return not self.at_end() and self._is_name(self.peek())

    def expect_name(self, what: str) -> str:
        if self.at_end():
            self.fail(f"expected {what}")
        tok = self.peek()
        if not self._is_name(tok):
            if tok.kind is TokenKind.QUOTED_IDENTIFIER:
                self.fail(f"{tok.text[0]}-quoted identifiers are not supported in this dialect")
            self.fail(f"expected {what}")
        self.advance()
        if tok.kind is TokenKind.QUOTED_IDENTIFIER:
            return quoted_identifier_value(tok)
        return tok.text

    # -- grammar -------------------------------------------------------

    def parse_statement(self) -> Statement:
        start_tok = self.peek()
        if self.is_kw("SELECT"):
            ast = self.parse_select()
            kind = StatementKind.SELECT
            target = None
            create_select = None
        elif self.is_kw("CREATE"):
            self.advance()
            self.expect_kw("TABLE")
            target = self.expect_name("table name")
            self.expect_kw("AS")
            create_select = self.parse_select()
            kind = StatementKind.CREATE_TABLE_AS
            ast = None
        else:
            self.fail("expected a statement")
        if self.is_punct(";"):
            end = self.advance().end
        elif self.at_end():
            end = len(self.source)
        else:
            self.fail("unexpected token after statement")
        return Statement(
            kind=kind,
            raw_text=self.source[start_tok.start:end],
            select_ast=ast,
            create_target=target,
            create_select=create_select,
            start=start_tok.start,
            end=end,
        )

    def parse_select(self) -> SelectAst:
        self.expect_kw("SELECT")
        star = False
        projections: list[Projection] = []
        if not self.at_end() and self.peek().kind is TokenKind.OPERATOR and self.peek().text == "*":
            self.advance()
            star = True
        else:
            projections.append(self.parse_projection())
            while self.is_punct(","):
                self.advance()
                projections.append(self.parse_projection())
        from_items: list[FromItem] = []
        if self.is_kw("FROM"):
            self.advance()
            from_items.append(self.parse_from_item())
            while self.is_punct(","):
                self.advance()
                from_items.append(self.parse_from_item())
        where: list[Comparison] = []
        if self.is_kw("WHERE"):
            self.advance()
            where.append(self.parse_comparison())
            while self.is_kw("AND"):
                self.advance()
                where.append(self.parse_comparison())
        limit = None
        if self.is_kw("LIMIT"):
            self.advance()
            if self.at_end() or self.peek().kind is not TokenKind.NUMBER:
                self.fail("expected a non-negative integer after LIMIT")
            tok = self.advance()
            if "." in tok.text or "e" in tok.text.lower():
                self.fail("LIMIT must be an integer", tok.start)
            limit = int(tok.text)
        return SelectAst(star, tuple(projections), tuple(from_items), tuple(where), limit)

    def parse_projection(self) -> Projection:
        expr: Union[ColumnRef, LiteralValue]
        if not self.at_end() and self.peek().kind is TokenKind.NUMBER:
            tok = self.advance()
            expr = LiteralValue(self._number_value(tok), tok.text)
        elif not self.at_end() and self.peek().kind is TokenKind.STRING:
            tok = self.advance()
            expr = LiteralValue(string_value(tok), tok.text)
        else:
            expr = ColumnRef(self.expect_name("a projection"))
        return Projection(expr, self.parse_alias())

    def parse_from_item(self) -> FromItem:
        table = self.expect_name("a table name")
        return FromItem(table, self.parse_alias())

    def parse_alias(self) -> Optional[str]:
        if self.is_kw("AS"):
            self.advance()
            return self.expect_name("an alias")
        if self.at_name():
            # bare alias; RESERVED words (TO, FROM, WHERE, ...) never match
            return self.expect_name("an alias")
        return None

    def parse_comparison(self) -> Comparison:
        column = self.expect_name("a column name")
        if self.at_end() or self.peek().kind is not TokenKind.OPERATOR \
                or self.peek().text not in COMPARISON_OPS:
            self.fail("expected a comparison operator")
        op = self.advance().text
        if self.at_end():
            self.fail("expected a literal")
        tok = self.peek()
        if tok.kind is TokenKind.NUMBER:
            self.advance()
            value: Union[int, float, str] = self._number_value(tok)
        elif tok.kind is TokenKind.OPERATOR and tok.text == "-":
            self.advance()
            if self.at_end() or self.peek().kind is not TokenKind.NUMBER:
                self.fail("expected a number after '-'")
            num = self.advance()
            value = -self._number_value(num)
        elif tok.kind is TokenKind.STRING:
            self.advance()
            value = string_value(tok)
        else:
            self.fail("expected a literal")
        return Comparison(column, op, value)

    @staticmethod
    def _number_value(tok: Token) -> Union[int, float]:
        if "." in tok.text or "e" in tok.text.lower():
            return float(tok.text)
        return int(tok.text)


def parse_prefix(dialect: DialectId, source: str) -> ParseOutcome:
    """Consume complete statements greedily from the start of source.

    On success every token is consumed and stop_at is end of source. On the
    first unconsumable token the outcome carries an error at that token's
    start offset and an empty statement list. Lexical errors surface the
    same way. Never raises for syntactically bad input.
    """
    if dialect not in _QUOTE_CHAR:
        raise ParseError(f"unknown dialect {dialect!r}")
    try:
        tokens = tokenize(source)
    except LexError as e:
        return ParseOutcome([], e.position, ParseIssue(e.position, e.message))
    parser = _DialectParser(source, tokens, _QUOTE_CHAR[dialect])
    statements: list[Statement] = []
    try:
        while not parser.at_end():
            statements.append(parser.parse_statement())
    except _Fail as f:
        return ParseOutcome([], f.position, ParseIssue(f.position, f.message))
    return ParseOutcome(statements, len(source), None)


def dialect_differences() -> dict[str, dict[str, object]]:
    """Machine-readable behavior matrix of the registered dialects."""
    return {
        "generic": {
            "quoted_identifier_delimiter": '"',
            "bare_aliases": True,
            "to_reserved": True,
        },
        "mysql": {
            "quoted_identifier_delimiter": "`",
            "bare_aliases": True,
            "to_reserved": True,
        },
    }
