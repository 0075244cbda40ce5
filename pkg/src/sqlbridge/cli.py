"""Command-line entry point: parse, compile, run, exec-step.

Exit codes are stable across subcommands:
0 success, 1 I/O or environment error, 2 parse/validation error,
3 execution error.
"""

from __future__ import annotations

import argparse
import sys

from .collab import ParsedProgram, parse_program
from .compiler import CompileConfig, compile_program
from .dialect import DialectId, StatementKind, dialect_from_name
from .engine import ModelStore, TableStore, execute_statement, run_workflow
from .errors import (
    CompileError,
    ExecutionError,
    LexError,
    ParseError,
    SqlBridgeError,
    WorkflowError,
)
from .extension import render_extension
from .workflow import decode_workflow, encode_workflow

EXIT_OK = 0
EXIT_IO = 1
EXIT_PARSE = 2
EXIT_EXEC = 3


def _line_col(text: str, position: int) -> tuple[int, int]:
    prefix = text[:position]
    line = prefix.count("\n") + 1
    col = position - (prefix.rfind("\n") + 1) + 1
    return line, col


def _report_parse_error(err: ParseError | LexError, source: str):
    pos = err.position if err.position is not None else 0
    line, col = _line_col(source, pos)
    message = err.message if hasattr(err, "message") else str(err)
    print(f"error: {message} at byte {pos} (line {line}, column {col})",
          file=sys.stderr)


def _render_select(ast) -> str:
    if ast.star:
        proj = "*"
    else:
        parts = []
        for p in ast.projections:
            base = p.expr.name if hasattr(p.expr, "name") else p.expr.text
            parts.append(f"{base} AS {p.alias}" if p.alias else base)
        proj = ", ".join(parts)
    frm = ", ".join(f"{f.table} AS {f.alias}" if f.alias else f.table
                    for f in ast.from_items)
    where = " AND ".join(f"{c.column} {c.op} {c.value!r}" for c in ast.where)
    return (f"projections=[{proj}] from=[{frm}] "
            f"where=[{where}] limit={ast.limit}")


def dump_program(program: ParsedProgram) -> str:
    """Deterministic structured dump of a parsed program (golden-testable)."""
    lines = []
    for i, (stmt, span) in enumerate(zip(program.statements, program.source_spans)):
        lines.append(f"statement {i}: kind={stmt.kind.value} "
                     f"span=[{span.start},{span.end})")
        lines.append(f"  text: {program.span_text(i).strip()}")
        if stmt.kind is StatementKind.SELECT:
            lines.append(f"  select: {_render_select(stmt.select_ast)}")
        elif stmt.kind is StatementKind.CREATE_TABLE_AS:
            lines.append(f"  create: table={stmt.create_target} "
                         f"select: {_render_select(stmt.create_select)}")
        if stmt.extension is not None:
            lines.append(f"  extension: {render_extension(stmt.extension)}")
        else:
            lines.append("  extension: none")
    return "\n".join(lines) + "\n"


def _read_source(path: str) -> str:
    with open(path, encoding="utf-8") as f:
        return f.read()


def cmd_parse(args) -> int:
    try:
        source = _read_source(args.file)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    try:
        dialect = dialect_from_name(args.dialect)
        program = parse_program(dialect, source)
    except (ParseError, LexError) as e:
        _report_parse_error(e, source)
        return EXIT_PARSE
    sys.stdout.write(dump_program(program))
    return EXIT_OK


def cmd_compile(args) -> int:
    try:
        source = _read_source(args.file)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    try:
        dialect = dialect_from_name(args.dialect)
        program = parse_program(dialect, source)
        config = CompileConfig(dialect=dialect, db_path=args.db,
                               model_store_path=args.model_store,
                               workflow_name=args.name)
        text = encode_workflow(compile_program(program, config))
    except (ParseError, LexError) as e:
        _report_parse_error(e, source)
        return EXIT_PARSE
    except (CompileError, WorkflowError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as f:
                f.write(text)
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_run(args) -> int:
    try:
        text = _read_source(args.file)
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    try:
        workflow = decode_workflow(text)
    except WorkflowError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    results = run_workflow(workflow, TableStore(args.db),
                           ModelStore(args.model_store))
    all_ok = True
    for result in results:
        if result.status == "ok":
            print(f"{result.name} ok")
            if result.output:
                sys.stdout.write(result.output)
        else:
            all_ok = False
            print(f"{result.name} failed")
            print(f"error: {result.error}", file=sys.stderr)
    return EXIT_OK if all_ok else EXIT_EXEC


def cmd_exec_step(args) -> int:
    try:
        dialect = dialect_from_name(args.dialect)
        result = execute_statement(args.statement, dialect,
                                   TableStore(args.db),
                                   ModelStore(args.model_store))
    except (ParseError, LexError) as e:
        _report_parse_error(e, args.statement)
        return EXIT_PARSE
    if result.status != "ok":
        print(f"error: {result.error}", file=sys.stderr)
        return EXIT_EXEC
    sys.stdout.write(result.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqlbridge",
        description="Compile SQL programs with ML clauses into workflows "
                    "and run them locally.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("parse", help="parse a SQL program and dump its AST")
    p.add_argument("file")
    p.add_argument("--dialect", default="generic")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("compile", help="compile a SQL program to a workflow YAML")
    p.add_argument("file")
    p.add_argument("--dialect", default="generic")
    p.add_argument("--db", required=True)
    p.add_argument("--model-store", required=True)
    p.add_argument("--name", default=None, help="workflow name")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("run", help="run a workflow YAML locally")
    p.add_argument("file")
    p.add_argument("--db", required=True)
    p.add_argument("--model-store", required=True)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("exec-step", help="execute a single statement (tier-2)")
    p.add_argument("--dialect", default="generic")
    p.add_argument("--db", required=True)
    p.add_argument("--model-store", required=True)
    p.add_argument("--statement", required=True)
    p.set_defaults(func=cmd_exec_step)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ExecutionError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_EXEC
    except SqlBridgeError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
