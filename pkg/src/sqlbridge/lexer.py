"""SQL tokenizer with byte-accurate positions and a statement splitter.

The splitter is deliberately brute force: it walks the token stream and
breaks on top-level semicolons only. It serves as the independent oracle
for the collaborative parser's span accounting.

Positions are 0-based offsets into the source text. No escape sequences
are recognized inside string literals except the doubled quote ('' -> ').
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum, auto

from .errors import LexError


class TokenKind(Enum):
    KEYWORD = auto()
    IDENTIFIER = auto()
    QUOTED_IDENTIFIER = auto()
    NUMBER = auto()
    STRING = auto()
    OPERATOR = auto()
    PUNCTUATION = auto()


#: Words the lexer tags as keywords. Which of these are *reserved* (never
#: usable as a table or alias name) is a dialect-level decision; notably
#: TRAIN/PREDICT/EXPLAIN stay usable as aliases while TO never is.
KEYWORDS = frozenset({
    "SELECT", "FROM", "WHERE", "LIMIT", "AS", "CREATE", "TABLE", "AND",
    "TO", "TRAIN", "PREDICT", "EXPLAIN", "WITH", "COLUMN", "LABEL",
    "INTO", "USING", "TRUE", "FALSE",
})


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    start: int
    end: int

    @property
    def upper(self) -> str:
        return self.text.upper()


@dataclass(frozen=True)
class StatementSpan:
    start: int
    end: int  # one past the terminating semicolon, or end of input


_NUMBER_RE = re.compile(r"\d+(\.\d+)?([eE][+-]?\d+)?")
_WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

_TWO_CHAR_OPS = ("<=", ">=", "<>")
_ONE_CHAR_OPS = "=<>*./:-"
_PUNCT = ",;()[]{}"


def tokenize(source: str) -> list[Token]:
    """Tokenize SQL text into an ordered, non-overlapping token list.

    Whitespace, `--` line comments and `/* */` block comments are skipped;
    everything else becomes a token whose text is the exact source slice.
    Raises LexError for unterminated constructs and unexpected characters.
    """
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c.isspace():
            i += 1
            continue
        if source.startswith("--", i):
            j = source.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        if source.startswith("/*", i):
            j = source.find("*/", i + 2)
            if j < 0:
                raise LexError("unterminated block comment", i)
            i = j + 2
            continue
        if c == "'":
            j = i + 1
            while True:
                k = source.find("'", j)
                if k < 0:
                    raise LexError("unterminated string literal", i)
                if source.startswith("''", k):
                    j = k + 2
                    continue
                break
            tokens.append(Token(TokenKind.STRING, source[i:k + 1], i, k + 1))
            i = k + 1
            continue
        if c in '"`':
            k = source.find(c, i + 1)
            if k < 0:
                raise LexError("unterminated quoted identifier", i)
            tokens.append(Token(TokenKind.QUOTED_IDENTIFIER, source[i:k + 1], i, k + 1))
            i = k + 1
            continue
        if c.isdigit():
            m = _NUMBER_RE.match(source, i)
            tokens.append(Token(TokenKind.NUMBER, m.group(), i, m.end()))
            i = m.end()
            continue
        if c.isalpha() or c == "_":
            m = _WORD_RE.match(source, i)
            word = m.group()
            kind = TokenKind.KEYWORD if word.upper() in KEYWORDS else TokenKind.IDENTIFIER
            tokens.append(Token(kind, word, i, m.end()))
            i = m.end()
            continue
        two = source[i:i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(Token(TokenKind.OPERATOR, two, i, i + 2))
            i += 2
            continue
        if c in _ONE_CHAR_OPS:
            tokens.append(Token(TokenKind.OPERATOR, c, i, i + 1))
            i += 1
            continue
        if c in _PUNCT:
            tokens.append(Token(TokenKind.PUNCTUATION, c, i, i + 1))
            i += 1
            continue
        raise LexError(f"unexpected character {c!r}", i)
    return tokens


def string_value(token: Token) -> str:
    """Decode a string-literal token to its value ('' -> ')."""
    return token.text[1:-1].replace("''", "'")


def quoted_identifier_value(token: Token) -> str:
    return token.text[1:-1]


def split_statements(source: str) -> list[StatementSpan]:
    """Split source on top-level semicolons, never inside strings/comments.

    Spans are contiguous from offset 0: each span starts where the previous
    one ended, so inter-statement whitespace belongs to the following span.
    A trailing fragment without a semicolon forms a final span ending at
    end of input.
    """
    tokens = tokenize(source)
    spans: list[StatementSpan] = []
    start = 0
    pending = False
    for tok in tokens:
        if tok.kind is TokenKind.PUNCTUATION and tok.text == ";":
            spans.append(StatementSpan(start, tok.end))
            start = tok.end
            pending = False
        else:
            pending = True
    if pending:
        spans.append(StatementSpan(start, len(source)))
    return spans
