"""SQL compiler toolchain with ML clause extensions.

Parses SQL programs extended with TO TRAIN / TO PREDICT / TO EXPLAIN
clauses via collaborative parsing over pluggable dialect parsers,
compiles programs into deterministic workflow YAML (one step per
statement), and executes workflows locally with run-time compilation of
each step, including automatic feature derivation and reference model
training, prediction, and explanation.
"""

from .collab import ParsedProgram, append_extension, parse_dialect, parse_program
from .compiler import (
    CompileConfig,
    ExplainPlan,
    NormalSqlPlan,
    PredictPlan,
    TrainPlan,
    compile_program,
    compile_statement,
)
from .dialect import (
    DialectId,
    ParseOutcome,
    SelectAst,
    Statement,
    StatementKind,
    dialect_differences,
    parse_prefix,
)
from .errors import (
    CompileError,
    ExecutionError,
    LexError,
    ParseError,
    SqlBridgeError,
    WorkflowError,
)
from .extension import (
    AttrValue,
    ExplainClause,
    ModelRef,
    ModelTarget,
    PredictClause,
    TrainClause,
    parse_attributes,
    parse_extension,
    parse_model_ref,
    render_extension,
)
from .features import FieldDesc, derive_features
from .lexer import StatementSpan, Token, split_statements, tokenize
from .workflow import (
    Step,
    Workflow,
    decode_workflow,
    encode_workflow,
    validate_workflow,
)

__version__ = "0.1.0"
