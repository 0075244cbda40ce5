"""Parser for the ML clause extensions: TO TRAIN / TO PREDICT / TO EXPLAIN.

This parser understands nothing but the extension clauses. It is handed
the remainder of a program right where the dialect parser stopped, which
is (after optional whitespace) always the keyword TO.

TRAIN sub-clauses appear in fixed order, each at most once:
WITH attributes, COLUMN names, LABEL name, INTO target.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import LexError, ParseError
from .lexer import Token, TokenKind, string_value, tokenize
from .dialect import ParseIssue

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_IMAGE_SEGMENT_RE = re.compile(r"[A-Za-z0-9_.-]+\Z")

EXTENSION_VERBS = ("TRAIN", "PREDICT", "EXPLAIN")


@dataclass(frozen=True)
class AttrValue:
    """One typed attribute value; kind is derived from the literal form."""

    kind: str  # "int" | "float" | "bool" | "string" | "identifier" | "list"
    value: object  # for "list": list of scalar AttrValue, homogeneous kind


AttrMap = dict  # ordered map: dotted key -> AttrValue


@dataclass(frozen=True)
class ModelRef:
    name: str
    package: Optional[str] = None
    image: Optional[str] = None

    def qualified_name(self) -> str:
        return f"{self.package}.{self.name}" if self.package else self.name


@dataclass(frozen=True)
class ModelTarget:
    kind: str  # "local_name" | "url"
    value: str


@dataclass(frozen=True)
class TrainClause:
    model: ModelRef
    attributes: AttrMap
    columns: Optional[tuple[str, ...]]
    label: Optional[str]
    into: ModelTarget


@dataclass(frozen=True)
class PredictClause:
    result_field: tuple[str, ...]  # 1-3 dot-separated identifiers
    model: ModelTarget


@dataclass(frozen=True)
class ExplainClause:
    model: ModelTarget
    attributes: AttrMap


ExtensionClause = Union[TrainClause, PredictClause, ExplainClause]


class _Fail(Exception):
    def __init__(self, position: int, message: str):
        self.position = position
        self.message = message


def parse_model_ref(text: str) -> ModelRef:
    """Split a model definition into image / package / name.

    "a.b.C" with a Docker image prefix looks like "repo/img.pkg.Name":
    the image runs through the first dot after the last slash; the rest is
    a dotted path whose final identifier is the model name.
    """
    if not text:
        raise ParseError("empty model reference")
    image = None
    rest = text
    if "/" in text:
        slash = text.rindex("/")
        dot = text.find(".", slash)
        if dot < 0:
            raise ParseError(f"model reference {text!r} has no model name after the image")
        image = text[:dot]
        rest = text[dot + 1:]
        for segment in image.split("/"):
            if not segment or not _IMAGE_SEGMENT_RE.match(segment):
                raise ParseError(f"illegal image segment {segment!r} in model reference")
    parts = rest.split(".")
    for part in parts:
        if not _IDENT_RE.match(part):
            raise ParseError(f"illegal identifier {part!r} in model reference")
    name = parts[-1]
    package = ".".join(parts[:-1]) or None
    return ModelRef(name=name, package=package, image=image)


def parse_model_target(text: str) -> ModelTarget:
    if not text:
        raise ParseError("empty model target")
    if "://" in text:
        scheme = text.split("://", 1)[0]
        if not scheme:
            raise ParseError(f"model target URL {text!r} has an empty scheme")
        return ModelTarget("url", text)
    if not _IDENT_RE.match(text):
        raise ParseError(f"illegal model target name {text!r}")
    return ModelTarget("local_name", text)


class _ExtParser:
    # token texts that may continue a model-reference/URL word when adjacent
    _WORD_JOINERS = frozenset({".", "/", ":", "-"})

    def __init__(self, source: str, tokens: list[Token]):
        self.source = source
        self.tokens = tokens
        self.i = 0

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

    def is_word(self, word: str) -> bool:
        return (not self.at_end()
                and self.peek().kind in (TokenKind.KEYWORD, TokenKind.IDENTIFIER)
                and self.peek().upper == word)

    def expect_word(self, word: str):
        if not self.is_word(word):
            self.fail(f"expected {word}")
        return self.advance()

    def is_punct(self, text: str) -> bool:
        return (not self.at_end()
                and self.peek().kind is TokenKind.PUNCTUATION
                and self.peek().text == text)

    def expect_identifier(self, what: str) -> str:
        if self.at_end() or self.peek().kind not in (TokenKind.KEYWORD, TokenKind.IDENTIFIER):
            self.fail(f"expected {what}")
        return self.advance().text

    def read_word(self, what: str) -> tuple[str, int]:
        """Read a maximal run of adjacent tokens forming a name/URL word."""
        if self.at_end() or self.peek().kind not in (
                TokenKind.KEYWORD, TokenKind.IDENTIFIER, TokenKind.NUMBER):
            self.fail(f"expected {what}")
        start = self.advance()
        end = start.end
        while not self.at_end() and self.peek().start == end:
            tok = self.peek()
            if tok.kind in (TokenKind.KEYWORD, TokenKind.IDENTIFIER, TokenKind.NUMBER):
                end = self.advance().end
            elif tok.kind is TokenKind.OPERATOR and tok.text in self._WORD_JOINERS:
                end = self.advance().end
            else:
                break
        return self.source[start.start:end], start.start

    # -- clause grammar ------------------------------------------------

    def parse(self) -> tuple[ExtensionClause, int]:
        self.expect_word("TO")
        if self.at_end():
            self.fail("expected TRAIN, PREDICT, or EXPLAIN after TO")
        verb = self.peek().upper
        if verb not in EXTENSION_VERBS:
            self.fail("expected TRAIN, PREDICT, or EXPLAIN after TO")
        self.advance()
        if verb == "TRAIN":
            clause: ExtensionClause = self.parse_train()
        elif verb == "PREDICT":
            clause = self.parse_predict()
        else:
            clause = self.parse_explain()
        if self.is_punct(";"):
            stop_at = self.advance().end
        elif self.at_end():
            stop_at = len(self.source)
        else:
            self.fail("unexpected token after extension clause")
        return clause, stop_at

    def parse_train(self) -> TrainClause:
        word, pos = self.read_word("a model definition")
        try:
            model = parse_model_ref(word)
        except ParseError as e:
            self.fail(e.message, pos)
        attributes: AttrMap = {}
        columns = None
        label = None
        seen: list[str] = []
        if self.is_word("WITH"):
            self.advance()
            attributes = self.parse_attr_pairs()
            seen.append("WITH")
        if self.is_word("COLUMN"):
            self.advance()
            columns = [self.expect_identifier("a column name")]
            while self.is_punct(","):
                self.advance()
                columns.append(self.expect_identifier("a column name"))
            seen.append("COLUMN")
        if self.is_word("LABEL"):
            self.advance()
            label = self.expect_identifier("a label column name")
            seen.append("LABEL")
        if not self.is_word("INTO"):
            for kw in ("WITH", "COLUMN", "LABEL"):
                if self.is_word(kw):
                    if kw in seen:
                        self.fail(f"duplicate {kw} clause")
                    self.fail(f"{kw} clause out of order (expected WITH, COLUMN, LABEL, INTO)")
            self.fail("expected INTO")
        self.advance()
        word, pos = self.read_word("a model target")
        try:
            into = parse_model_target(word)
        except ParseError as e:
            self.fail(e.message, pos)
        return TrainClause(model, attributes,
                           tuple(columns) if columns is not None else None,
                           label, into)

    def parse_predict(self) -> PredictClause:
        parts = [self.expect_identifier("a result field")]
        while self.is_punct(".") or (not self.at_end()
                                     and self.peek().kind is TokenKind.OPERATOR
                                     and self.peek().text == "."):
            self.advance()
            parts.append(self.expect_identifier("a result field component"))
        if len(parts) > 3:
            self.fail("result field has more than 3 dot-separated components")
        self.expect_word("USING")
        word, pos = self.read_word("a model target")
        try:
            model = parse_model_target(word)
        except ParseError as e:
            self.fail(e.message, pos)
        return PredictClause(tuple(parts), model)

    def parse_explain(self) -> ExplainClause:
        word, pos = self.read_word("a model target")
        try:
            model = parse_model_target(word)
        except ParseError as e:
            self.fail(e.message, pos)
        attributes: AttrMap = {}
        if self.is_word("WITH"):
            self.advance()
            attributes = self.parse_attr_pairs()
        return ExplainClause(model, attributes)

    # -- attributes ----------------------------------------------------

    def parse_attr_pairs(self) -> AttrMap:
        attrs: AttrMap = {}
        while True:
            if self.at_end() or self.peek().kind not in (TokenKind.KEYWORD, TokenKind.IDENTIFIER):
                self.fail("expected an attribute key")
            key_tok = self.peek()
            key = self.advance().text
            while not self.at_end() and self.peek().kind is TokenKind.OPERATOR \
                    and self.peek().text == ".":
                self.advance()
                key += "." + self.expect_identifier("an attribute key component")
            if key in attrs:
                self.fail(f"duplicate attribute key {key!r}", key_tok.start)
            if self.at_end() or self.peek().kind is not TokenKind.OPERATOR \
                    or self.peek().text != "=":
                self.fail("expected '=' in attribute")
            self.advance()
            attrs[key] = self.parse_attr_value()
            if self.is_punct(","):
                self.advance()
                continue
            break
        return attrs

    def parse_attr_value(self, allow_list: bool = True) -> AttrValue:
        if self.at_end():
            self.fail("expected an attribute value")
        tok = self.peek()
        if tok.kind is TokenKind.NUMBER:
            self.advance()
            return self._number_attr(tok.text)
        if tok.kind is TokenKind.OPERATOR and tok.text == "-":
            self.advance()
            if self.at_end() or self.peek().kind is not TokenKind.NUMBER:
                self.fail("expected a number after '-'")
            return self._number_attr("-" + self.advance().text)
        if tok.kind is TokenKind.STRING:
            self.advance()
            return AttrValue("string", string_value(tok))
        if tok.kind is TokenKind.QUOTED_IDENTIFIER and tok.text[0] == '"':
            # double-quoted values are accepted as strings in attributes
            self.advance()
            return AttrValue("string", tok.text[1:-1])
        if tok.kind in (TokenKind.KEYWORD, TokenKind.IDENTIFIER):
            self.advance()
            if tok.upper in ("TRUE", "FALSE"):
                return AttrValue("bool", tok.upper == "TRUE")
            return AttrValue("identifier", tok.text)
        if tok.kind is TokenKind.PUNCTUATION and tok.text == "[":
            if not allow_list:
                self.fail("nested lists are not allowed")
            self.advance()
            items: list[AttrValue] = []
            if not self.is_punct("]"):
                items.append(self.parse_attr_value(allow_list=False))
                while self.is_punct(","):
                    self.advance()
                    item = self.parse_attr_value(allow_list=False)
                    if item.kind != items[0].kind:
                        self.fail(f"heterogeneous list: {item.kind} after {items[0].kind}",
                                  tok.start)
                    items.append(item)
            if not self.is_punct("]"):
                self.fail("expected ']'")
            self.advance()
            return AttrValue("list", items)
        self.fail("expected an attribute value")

    @staticmethod
    def _number_attr(text: str) -> AttrValue:
        if "." in text or "e" in text.lower():
            return AttrValue("float", float(text))
        return AttrValue("int", int(text))


def parse_extension(source: str) -> tuple[Optional[ExtensionClause], int, Optional[ParseIssue]]:
    """Parse one extension clause from text beginning (after whitespace) with TO.

    Returns (clause, stop_at, error); stop_at is one past the terminating
    semicolon, or end of input when there is none. On error the clause is
    None and stop_at echoes the error position.
    """
    try:
        tokens = tokenize(source)
    except LexError as e:
        return None, e.position, ParseIssue(e.position, e.message)
    parser = _ExtParser(source, tokens)
    try:
        clause, stop_at = parser.parse()
    except _Fail as f:
        return None, f.position, ParseIssue(f.position, f.message)
    return clause, stop_at, None


def parse_attributes(source: str) -> AttrMap:
    """Parse the comma-separated key=value pairs that follow WITH.

    Raises ParseError for duplicate keys, heterogeneous lists, and empty
    or trailing input.
    """
    try:
        tokens = tokenize(source)
    except LexError as e:
        raise ParseError(e.message, e.position)
    parser = _ExtParser(source, tokens)
    try:
        attrs = parser.parse_attr_pairs()
        if not parser.at_end():
            parser.fail("unexpected token after attributes")
    except _Fail as f:
        raise ParseError(f.message, f.position)
    return attrs


# -- canonical rendering (round-trip support) --------------------------


def render_model_ref(ref: ModelRef) -> str:
    parts = []
    if ref.image:
        parts.append(ref.image)
    if ref.package:
        parts.append(ref.package)
    parts.append(ref.name)
    return ".".join(parts)


def render_attr_value(value: AttrValue) -> str:
    if value.kind == "int":
        return str(value.value)
    if value.kind == "float":
        return repr(value.value)
    if value.kind == "bool":
        return "true" if value.value else "false"
    if value.kind == "string":
        return "'" + str(value.value).replace("'", "''") + "'"
    if value.kind == "identifier":
        return str(value.value)
    if value.kind == "list":
        return "[" + ", ".join(render_attr_value(v) for v in value.value) + "]"
    raise ValueError(f"unknown attribute kind {value.kind!r}")


def _render_attrs(attrs: AttrMap) -> str:
    return ", ".join(f"{k}={render_attr_value(v)}" for k, v in attrs.items())


def render_extension(clause: ExtensionClause) -> str:
    """Render a clause to canonical text; re-parsing yields an equal AST."""
    if isinstance(clause, TrainClause):
        parts = ["TO TRAIN", render_model_ref(clause.model)]
        if clause.attributes:
            parts.append("WITH " + _render_attrs(clause.attributes))
        if clause.columns is not None:
            parts.append("COLUMN " + ", ".join(clause.columns))
        if clause.label is not None:
            parts.append("LABEL " + clause.label)
        parts.append("INTO " + clause.into.value)
        return " ".join(parts) + ";"
    if isinstance(clause, PredictClause):
        return (f"TO PREDICT {'.'.join(clause.result_field)} "
                f"USING {clause.model.value};")
    if isinstance(clause, ExplainClause):
        text = f"TO EXPLAIN {clause.model.value}"
        if clause.attributes:
            text += " WITH " + _render_attrs(clause.attributes)
        return text + ";"
    raise ValueError(f"unknown extension clause {clause!r}")
