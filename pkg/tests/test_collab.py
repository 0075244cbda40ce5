import random

import pytest

from sqlbridge.collab import (
    append_extension,
    parse_dialect,
    parse_program,
)
from sqlbridge.dialect import DialectId, StatementKind, parse_prefix
from sqlbridge.errors import ParseError
from sqlbridge.extension import TrainClause, parse_extension
from sqlbridge.lexer import split_statements


class TestParseDialect:
    def test_two_call_protocol_stops_before_extension(self):
        out = parse_dialect(DialectId.MYSQL, "SELECT a FROM t TO TRAIN m INTO x;")
        assert out.error is None
        assert out.stop_at == 16
        assert len(out.statements) == 1
        assert out.statements[0].raw_text == "SELECT a FROM t "

    def test_plain_statement_single_call(self):
        out = parse_dialect(DialectId.MYSQL, "SELECT a FROM t;")
        assert out.error is None
        assert out.stop_at == 16
        assert len(out.statements) == 1

    def test_both_calls_fail(self):
        out = parse_dialect(DialectId.MYSQL, "SELEC a; TO TRAIN")
        assert out.error is not None
        assert out.error.position == 0
        assert out.statements == []

    def test_bad_prefix_before_extension(self):
        # the second call parses the prefix and fails inside it
        out = parse_dialect(DialectId.GENERIC, "SELECT `q` FROM t TO TRAIN m INTO x;")
        assert out.error is not None
        assert out.error.position == 7


class TestParseProgram:
    def test_single_normal_statement(self):
        program = parse_program(DialectId.GENERIC, "SELECT 1;")
        assert len(program.statements) == 1
        assert program.statements[0].extension is None

    def test_extension_attached_to_second_select(self):
        source = ("SELECT * FROM a; "
                  "SELECT * FROM a TO TRAIN linreg.Regressor LABEL y INTO m;")
        program = parse_program(DialectId.GENERIC, source)
        assert len(program.statements) == 2
        assert program.statements[0].extension is None
        ext = program.statements[1].extension
        assert isinstance(ext, TrainClause)
        assert ext.model.qualified_name() == "linreg.Regressor"

    def test_train_alias_is_not_an_extension(self):
        program = parse_program(DialectId.MYSQL, "SELECT * FROM t1, t2, t3 TRAIN;")
        assert len(program.statements) == 1
        assert program.statements[0].extension is None

    def test_extension_without_preceding_select(self):
        with pytest.raises(ParseError, match="preceding SELECT"):
            parse_program(DialectId.GENERIC, "TO TRAIN m INTO x;")

    def test_extension_after_create_rejected(self):
        with pytest.raises(ParseError, match="preceding SELECT"):
            parse_program(DialectId.GENERIC,
                          "CREATE TABLE u AS SELECT a FROM t TO TRAIN m INTO x;")

    def test_second_extension_rejected(self):
        with pytest.raises(ParseError, match="preceding SELECT|already has"):
            parse_program(DialectId.GENERIC,
                          "SELECT a FROM t TO TRAIN m INTO x; TO EXPLAIN m;")

    def test_error_position_rebased(self):
        source = "SELECT a FROM t; SELECT b FROM u TO TRAIN m LABEL y;"
        with pytest.raises(ParseError) as exc:
            parse_program(DialectId.GENERIC, source)
        assert exc.value.position == source.rindex(";")

    def test_spans_cover_program(self):
        source = "SELECT 1;  SELECT a FROM t TO TRAIN linreg.Regressor LABEL a INTO m; SELECT 2;"
        program = parse_program(DialectId.GENERIC, source)
        spans = program.source_spans
        assert spans[0].start == 0
        for prev, cur in zip(spans, spans[1:]):
            assert prev.end == cur.start
        assert spans[-1].end == len(source)

    def test_extension_span_owns_terminating_semicolon(self):
        source = "SELECT a FROM t TO TRAIN linreg.Regressor LABEL a INTO m;"
        program = parse_program(DialectId.GENERIC, source)
        assert program.source_spans == split_statements(source)

    @pytest.mark.parametrize("source", [
        "SELECT 1; SELECT 2; SELECT 3;",
        "SELECT train FROM predict;",  # lowercase non-reserved words as names
        "CREATE TABLE u AS SELECT a FROM t; SELECT a FROM u;",
    ])
    def test_alias_safety_no_spurious_extensions(self, source):
        program = parse_program(DialectId.GENERIC, source)
        assert all(s.extension is None for s in program.statements)

    def test_dialect_independence_of_extensions(self):
        source = ("SELECT a FROM t TO TRAIN m WITH lr=0.5 LABEL a INTO x; "
                  "SELECT a FROM t TO PREDICT p USING x;")
        generic = parse_program(DialectId.GENERIC, source)
        mysql = parse_program(DialectId.MYSQL, source)
        assert [s.extension for s in generic.statements] == \
            [s.extension for s in mysql.statements]


class TestAppendExtension:
    def _select(self, dialect=DialectId.GENERIC):
        return parse_prefix(dialect, "SELECT a FROM t;").statements[0]

    def _train(self):
        clause, _, _ = parse_extension("TO TRAIN m INTO x;")
        return clause

    def test_attach_to_select(self):
        stmts = [self._select()]
        out = append_extension(stmts, self._train())
        assert out[-1].extension is not None

    def test_reject_non_select(self):
        stmt = parse_prefix(DialectId.GENERIC,
                            "CREATE TABLE u AS SELECT a FROM t;").statements[0]
        with pytest.raises(ParseError):
            append_extension([stmt], self._train())

    def test_reject_empty_list(self):
        with pytest.raises(ParseError):
            append_extension([], self._train())

    def test_reject_double_extension(self):
        stmts = append_extension([self._select()], self._train())
        with pytest.raises(ParseError, match="already has"):
            append_extension(stmts, self._train())


def _random_program(rng: random.Random) -> tuple[str, int, list[int]]:
    """Build a random program; returns (source, statement_count, TO offsets)."""
    normals = [
        "SELECT 1;",
        "SELECT a FROM t;",
        "SELECT * FROM t1, t2;",
        "SELECT x FROM t WHERE x > 1 LIMIT 3;",
        "CREATE TABLE u AS SELECT a FROM t;",
        "SELECT ';' FROM t;",
        "SELECT * FROM t1, t2, t3 TRAIN;",
    ]
    extended = [
        ("SELECT a FROM t ", "TO TRAIN linreg.Regressor LABEL a INTO m;"),
        ("SELECT a, b FROM t ", "TO TRAIN m WITH lr=0.1, u=[1, 2] COLUMN a LABEL b INTO x;"),
        ("SELECT a FROM t ", "TO PREDICT p USING m;"),
        ("SELECT a FROM t ", "TO EXPLAIN m;"),
    ]
    parts = []
    to_offsets = []
    count = rng.randint(1, 6)
    pos = 0
    for _ in range(count):
        if rng.random() < 0.4:
            select, ext = rng.choice(extended)
            to_offsets.append(pos + len(select))
            text = select + ext
        else:
            text = rng.choice(normals)
        parts.append(text)
        pos += len(text)
        sep = rng.choice([" ", "\n", "  "])
        parts.append(sep)
        pos += len(sep)
    return "".join(parts), count, to_offsets


class TestOracleEquivalence:
    def test_thousand_random_programs_match_splitter(self):
        rng = random.Random(20240817)
        for _ in range(1000):
            source, count, to_offsets = _random_program(rng)
            program = parse_program(DialectId.GENERIC, source)
            oracle = split_statements(source)
            assert len(program.statements) == count
            assert len(oracle) == count
            assert program.source_spans == oracle
            # two-call protocol: the first dialect-parser call fails exactly
            # at the extension clause's TO keyword
            for to_offset in to_offsets:
                span = next(s for s in oracle
                            if s.start <= to_offset < s.end)
                out = parse_prefix(DialectId.GENERIC, source[span.start:])
                assert out.error is not None
                assert span.start + out.error.position == to_offset

    def test_progress_on_arbitrary_inputs(self):
        rng = random.Random(7)
        alphabet = "SELECT FROM;*'x`\"1.TO TRAIN "
        for _ in range(300):
            source = "".join(rng.choice(alphabet)
                             for _ in range(rng.randint(0, 40)))
            try:
                parse_program(DialectId.GENERIC, source)
            except ParseError:
                pass  # termination is the property under test
