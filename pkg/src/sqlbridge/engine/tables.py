"""CSV-backed table store and the executable SELECT subset.

Each table t lives in <root>/t.csv with a header row. Column dtypes are
inferred from the data: all-integer -> INT, all-numeric -> FLOAT,
otherwise STRING. The evaluator supports projection (star, column refs
with rename, literals), cross-product FROM, conjunctive WHERE, and LIMIT.
"""

from __future__ import annotations

import csv
import itertools
import operator
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from ..dialect import ColumnRef, Comparison, LiteralValue, SelectAst
from ..errors import ExecutionError
from ..features import FLOAT, INT, STRING, FieldDesc

_INT_RE = re.compile(r"-?\d+\Z")

_OPS = {
    "=": operator.eq,
    "<": operator.lt,
    ">": operator.gt,
    "<=": operator.le,
    ">=": operator.ge,
    "<>": operator.ne,
}


@dataclass
class ResultSet:
    schema: list[FieldDesc]
    rows: list[tuple]


def _infer_dtype(values: list[str]) -> str:
    if not values:
        return STRING
    if all(_INT_RE.match(v) for v in values):
        return INT
    try:
        for v in values:
            float(v)
    except ValueError:
        return STRING
    return FLOAT


def _convert(value: str, dtype: str):
    if dtype == INT:
        return int(value)
    if dtype == FLOAT:
        return float(value)
    return value


class TableStore:
    """Directory of CSV tables; single writer assumed."""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    def table_path(self, name: str) -> Path:
        return self.root / f"{name}.csv"

    def has_table(self, name: str) -> bool:
        return self.table_path(name).is_file()

    def read_table(self, name: str) -> ResultSet:
        path = self.table_path(name)
        if not path.is_file():
            raise ExecutionError(f"unknown table {name!r}")
        with open(path, newline="") as f:
            reader = csv.reader(f)
            try:
                header = next(reader)
            except StopIteration:
                raise ExecutionError(f"table {name!r} has no header row")
            raw_rows = [row for row in reader]
        if len(set(header)) != len(header):
            raise ExecutionError(f"table {name!r} has duplicate column names")
        for row in raw_rows:
            if len(row) != len(header):
                raise ExecutionError(f"table {name!r} has a non-rectangular row")
        dtypes = [_infer_dtype([row[i] for row in raw_rows])
                  for i in range(len(header))]
        schema = [FieldDesc(n, d) for n, d in zip(header, dtypes)]
        rows = [tuple(_convert(v, d) for v, d in zip(row, dtypes))
                for row in raw_rows]
        return ResultSet(schema, rows)

    def write_table(self, name: str, result: ResultSet):
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.table_path(name), "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow([fld.name for fld in result.schema])
            for row in result.rows:
                writer.writerow([_render_value(v) for v in row])


def _render_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_result_set(result: ResultSet) -> str:
    """Delimited text rendering used when printing a result set."""
    lines = [",".join(fld.name for fld in result.schema)]
    for row in result.rows:
        lines.append(",".join(_render_value(v) for v in row))
    return "\n".join(lines) + "\n"


def eval_select(ast: SelectAst, store: TableStore) -> ResultSet:
    """Evaluate a SELECT: cross product, conjunctive filter, project, limit.

    Row order is file order, nested left-to-right for cross products.
    """
    tables = [(item, store.read_table(item.table)) for item in ast.from_items]

    # column name -> (flat index, FieldDesc); duplicates are ambiguous
    columns: list[FieldDesc] = []
    index_of: dict[str, int] = {}
    ambiguous: set[str] = set()
    for _, tbl in tables:
        for fld in tbl.schema:
            if fld.name in index_of:
                ambiguous.add(fld.name)
            else:
                index_of[fld.name] = len(columns)
            columns.append(fld)

    def resolve(name: str) -> int:
        if name in ambiguous:
            raise ExecutionError(f"ambiguous column {name!r}")
        if name not in index_of:
            raise ExecutionError(f"unknown column {name!r}")
        return index_of[name]

    if tables:
        combined = (tuple(itertools.chain.from_iterable(parts))
                    for parts in itertools.product(*[tbl.rows for _, tbl in tables]))
    else:
        combined = iter([()])

    def matches(row: tuple) -> bool:
        for cmp in ast.where:
            idx = resolve(cmp.column)
            fld = columns[idx]
            value = row[idx]
            literal = cmp.value
            if fld.dtype in (INT, FLOAT) and isinstance(literal, (int, float)) \
                    and not isinstance(literal, bool):
                ok = _OPS[cmp.op](float(value), float(literal))
            elif fld.dtype == STRING and isinstance(literal, str):
                ok = _OPS[cmp.op](value, literal)
            else:
                raise ExecutionError(
                    f"type mismatch comparing column {cmp.column!r} ({fld.dtype}) "
                    f"with literal {literal!r}")
            if not ok:
                return False
        return True

    filtered = (row for row in combined if matches(row))

    if ast.star:
        out_schema = list(columns)
        names = [fld.name for fld in out_schema]
        if len(set(names)) != len(names):
            raise ExecutionError("duplicate column names in result; "
                                 "star over overlapping tables is unsupported")
        projector = lambda row: row
    else:
        picks: list[tuple[str, str, object]] = []  # (name, dtype, index-or-constant)
        for proj in ast.projections:
            if isinstance(proj.expr, ColumnRef):
                idx = resolve(proj.expr.name)
                fld = columns[idx]
                picks.append((proj.alias or fld.name, fld.dtype, idx))
            else:
                lit = proj.expr
                if isinstance(lit.value, bool):
                    dtype = STRING
                elif isinstance(lit.value, int):
                    dtype = INT
                elif isinstance(lit.value, float):
                    dtype = FLOAT
                else:
                    dtype = STRING
                picks.append((proj.alias or lit.text, dtype, ("const", lit.value)))
        names = [p[0] for p in picks]
        if len(set(names)) != len(names):
            raise ExecutionError("duplicate column names in result")
        out_schema = [FieldDesc(name, dtype) for name, dtype, _ in picks]

        def projector(row: tuple) -> tuple:
            out = []
            for _, _, sel in picks:
                if isinstance(sel, tuple):
                    out.append(sel[1])
                else:
                    out.append(row[sel])
            return tuple(out)

    rows = []
    for row in filtered:
        rows.append(projector(row))
        if ast.limit is not None and len(rows) >= ast.limit:
            break
    if ast.limit is not None:
        rows = rows[:ast.limit]
    return ResultSet(out_schema, rows)
