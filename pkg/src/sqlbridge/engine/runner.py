"""Step execution and the sequential local workflow runner.

run_workflow substitutes a cluster engine at desk scale: steps run
strictly in order, in process, and the first failure aborts the run with
prior results retained. Two step shapes are executable: plain "echo"
steps and this toolchain's own exec-step invocations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..collab import parse_program
from ..compiler import (
    ExplainPlan,
    NormalSqlPlan,
    PredictPlan,
    StepPlan,
    TrainPlan,
    compile_statement,
)
from ..dialect import DialectId, StatementKind, dialect_from_name
from ..errors import ExecutionError, LexError, ParseError, SqlBridgeError
from ..workflow import Workflow
from .models import ModelStore, explain, predict, render_ascii_bars, train
from .tables import ResultSet, TableStore, eval_select, format_result_set

EXPLANATION_BAR_WIDTH = 60


@dataclass
class StepResult:
    name: str
    status: str  # "ok" | "failed"
    output: str
    error: Optional[str] = None


def _require_local(target, action: str) -> str:
    if target.kind != "local_name":
        raise ExecutionError(
            f"unsupported storage scheme in {target.value!r}; only local model "
            f"names can be used to {action}")
    return target.value


def _execute(plan: StepPlan, tables: TableStore, models: ModelStore) -> str:
    if isinstance(plan, NormalSqlPlan):
        stmt = plan.statement
        if stmt.kind is StatementKind.SELECT:
            return format_result_set(eval_select(stmt.select_ast, tables))
        if stmt.kind is StatementKind.CREATE_TABLE_AS:
            result = eval_select(stmt.create_select, tables)
            tables.write_table(stmt.create_target, result)
            return f"table {stmt.create_target} written ({len(result.rows)} rows)\n"
        raise ExecutionError(f"statement kind {stmt.kind.value!r} is not executable")
    if isinstance(plan, TrainPlan):
        name = _require_local(plan.into, "save a model")
        data = eval_select(plan.statement.select_ast, tables)
        artifact = train(plan.features, plan.label, plan.estimator,
                         plan.attributes, data)
        models.save(name, artifact)
        return f"model {name} saved\n"
    if isinstance(plan, PredictPlan):
        name = _require_local(plan.model, "load a model")
        artifact = models.load(name)
        data = eval_select(plan.statement.select_ast, tables)
        result = predict(artifact, data, plan.result_field)
        if len(plan.result_field) > 1:
            table = ".".join(plan.result_field[:-1])
            tables.write_table(table, result)
            return f"table {table} written ({len(result.rows)} rows)\n"
        return format_result_set(result)
    if isinstance(plan, ExplainPlan):
        name = _require_local(plan.model, "load a model")
        artifact = models.load(name)
        data = eval_select(plan.statement.select_ast, tables)
        report = explain(artifact, data)
        return render_ascii_bars(report, EXPLANATION_BAR_WIDTH)
    raise ExecutionError(f"unknown step plan {plan!r}")


def exec_step(plan: StepPlan, tables: TableStore, models: ModelStore,
              step_name: str = "step") -> StepResult:
    """Execute one plan; failures are captured and annotated with the step name."""
    try:
        output = _execute(plan, tables, models)
    except SqlBridgeError as e:
        return StepResult(step_name, "failed", "", f"{step_name}: {e}")
    return StepResult(step_name, "ok", output)


def execute_statement(text: str, dialect: DialectId, tables: TableStore,
                      models: ModelStore, step_name: str = "step") -> StepResult:
    """Tier-2 entry point: parse one statement, compile it, execute it.

    For extended statements the SELECT is evaluated first so the run-time
    schema (and training sample) is available to the compiler. Raises
    ParseError for unparsable statements; execution failures come back as
    a failed StepResult.
    """
    program = parse_program(dialect, text)
    if len(program.statements) != 1:
        raise ParseError(
            f"expected exactly one statement, got {len(program.statements)}")
    stmt = program.statements[0]
    try:
        if stmt.extension is None:
            plan: StepPlan = NormalSqlPlan(stmt)
        else:
            data = eval_select(stmt.select_ast, tables)
            plan = compile_statement(stmt, data.schema, data.rows)
    except SqlBridgeError as e:
        return StepResult(step_name, "failed", "", f"{step_name}: {e}")
    return exec_step(plan, tables, models, step_name)


def _parse_runner_args(args: list[str]) -> dict[str, str]:
    flags = {}
    i = 0
    while i < len(args):
        if args[i].startswith("--") and i + 1 < len(args):
            flags[args[i][2:]] = args[i + 1]
            i += 2
        else:
            i += 1
    return flags


def _run_step(step, tables: TableStore, models: ModelStore) -> StepResult:
    if step.command[0] == "echo":
        text = " ".join(step.command[1:] + step.args)
        return StepResult(step.name, "ok", text + "\n")
    if step.command[0] == "sqlbridge":
        argv = step.command[1:] + step.args
        if argv and argv[0] == "exec-step":
            flags = _parse_runner_args(argv[1:])
            statement = flags.get("statement")
            if statement is None:
                return StepResult(step.name, "failed", "",
                                  f"{step.name}: exec-step requires --statement")
            try:
                dialect = dialect_from_name(flags.get("dialect", "generic"))
                # the run-time stores are the ones this runner was given;
                # embedded --db/--model-store paths serve standalone invocation
                return execute_statement(statement, dialect, tables, models,
                                         step_name=step.name)
            except (ParseError, LexError) as e:
                return StepResult(step.name, "failed", "", f"{step.name}: {e}")
    return StepResult(step.name, "failed", "",
                      f"{step.name}: unsupported command {step.command[0]!r}")


def run_workflow(workflow: Workflow, tables: TableStore,
                 models: ModelStore) -> list[StepResult]:
    """Run steps strictly in order; abort on the first failure."""
    results: list[StepResult] = []
    for step in workflow.steps:
        result = _run_step(step, tables, models)
        results.append(result)
        if result.status != "ok":
            break
    return results
