"""Two-tier compilation.

Tier 1 (compile_program) maps a parsed program to a workflow with exactly
one step per statement; it never touches table data or schemas. Tier 2
(compile_statement) runs inside a step, once upstream schemas are known,
and produces an executable plan, deriving features for TRAIN statements.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .collab import ParsedProgram
from .dialect import DialectId, Statement
from .errors import CompileError
from .extension import (
    AttrMap,
    ExplainClause,
    ModelRef,
    ModelTarget,
    PredictClause,
    TrainClause,
)
from .features import FeatureSet, FieldDesc, derive_features
from .registry import get_estimator
from .workflow import Step, Workflow

DEFAULT_WORKFLOW_NAME = "sqlflow-workflow"


@dataclass
class CompileConfig:
    dialect: DialectId
    db_path: str
    model_store_path: str
    workflow_name: Optional[str] = None


@dataclass
class NormalSqlPlan:
    statement: Statement

    @property
    def text(self) -> str:
        return self.statement.raw_text


@dataclass
class TrainPlan:
    statement: Statement
    features: FeatureSet
    label: Optional[FieldDesc]
    estimator: ModelRef
    attributes: AttrMap
    into: ModelTarget


@dataclass
class PredictPlan:
    statement: Statement
    model: ModelTarget
    result_field: tuple[str, ...]


@dataclass
class ExplainPlan:
    statement: Statement
    model: ModelTarget
    attributes: AttrMap


StepPlan = Union[NormalSqlPlan, TrainPlan, PredictPlan, ExplainPlan]


def compile_program(program: ParsedProgram, config: CompileConfig) -> Workflow:
    """Tier-1 compilation: one step per statement, in program order.

    Each step re-invokes this toolchain's step runner with the statement
    text verbatim; all schema- and data-dependent work is deferred to the
    step's own run time.
    """
    if not program.statements:
        raise CompileError("cannot compile an empty program")
    if not config.db_path or not config.model_store_path:
        raise CompileError("db_path and model_store_path must be nonempty")
    steps = []
    for i in range(len(program.statements)):
        text = program.span_text(i).strip()
        steps.append(Step(
            name=f"step-{i}",
            command=["sqlbridge", "exec-step"],
            args=[
                "--dialect", config.dialect.value,
                "--db", config.db_path,
                "--model-store", config.model_store_path,
                "--statement", text,
            ],
        ))
    return Workflow(config.workflow_name or DEFAULT_WORKFLOW_NAME, steps)


def compile_statement(statement: Statement, schema: Sequence[FieldDesc],
                      rows: Sequence[tuple]) -> StepPlan:
    """Tier-2 compilation of one statement against the run-time schema.

    Normal statements pass through untouched. For TRAIN the feature set is
    derived here, from the SELECT result's schema and data.
    """
    ext = statement.extension
    if ext is None:
        return NormalSqlPlan(statement)
    if isinstance(ext, TrainClause):
        estimator = get_estimator(ext.model)
        label_field = None
        if ext.label is not None:
            matches = [f for f in schema if f.name == ext.label]
            if not matches:
                raise CompileError(f"label {ext.label!r} not found in input schema")
            label_field = matches[0]
        if estimator.supervised and label_field is None:
            raise CompileError(
                f"estimator {ext.model.qualified_name()!r} is supervised and requires LABEL")
        if not estimator.supervised and label_field is not None:
            warnings.warn(
                f"estimator {ext.model.qualified_name()!r} is unsupervised; LABEL ignored")
        features = derive_features(schema, ext, rows)
        return TrainPlan(statement, features, label_field, ext.model,
                         ext.attributes, ext.into)
    if isinstance(ext, PredictClause):
        return PredictPlan(statement, ext.model, ext.result_field)
    if isinstance(ext, ExplainClause):
        return ExplainPlan(statement, ext.model, ext.attributes)
    raise CompileError(f"unknown extension clause {ext!r}")
