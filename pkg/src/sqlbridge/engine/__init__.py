"""Local execution engine: CSV table store, model store, step runner."""

from .tables import ResultSet, TableStore, eval_select, format_result_set
from .models import (
    ExplanationReport,
    ModelArtifact,
    ModelStore,
    explain,
    predict,
    render_ascii_bars,
    train,
)
from .runner import StepResult, exec_step, execute_statement, run_workflow

__all__ = [
    "ResultSet", "TableStore", "eval_select", "format_result_set",
    "ExplanationReport", "ModelArtifact", "ModelStore",
    "explain", "predict", "render_ascii_bars", "train",
    "StepResult", "exec_step", "execute_statement", "run_workflow",
]
