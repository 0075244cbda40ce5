"""Workflow intermediate representation and its deterministic YAML codec.

The encoder emits one fixed schema with a fixed key order and produces
byte-identical output for equal inputs; golden tests pin the exact bytes.
The decoder is strict: unknown keys, wrong kinds, and invariant
violations are errors.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

import yaml

from .errors import WorkflowError

API_VERSION = "sqlbridge.dev/v1"
KIND = "Workflow"

_NAME_RE = re.compile(r"[a-z0-9-]+\Z")
_MAX_NAME_LEN = 63


@dataclass
class Step:
    name: str
    command: list[str]
    args: list[str] = field(default_factory=list)
    env: dict[str, str] = field(default_factory=dict)


@dataclass
class Workflow:
    name: str
    steps: list[Step] = field(default_factory=list)


def validate_workflow(workflow: Workflow) -> list[str]:
    """Check all invariants; an empty list means the workflow is valid."""
    violations: list[str] = []

    def check_name(name: object, what: str):
        if not isinstance(name, str) or not _NAME_RE.match(name or ""):
            violations.append(f"{what} name {name!r} must match [a-z0-9-]+")
        elif len(name) > _MAX_NAME_LEN:
            violations.append(f"{what} name {name!r} exceeds {_MAX_NAME_LEN} characters")

    check_name(workflow.name, "workflow")
    seen: set[str] = set()
    for step in workflow.steps:
        check_name(step.name, "step")
        if step.name in seen:
            violations.append(f"duplicate step name {step.name!r}")
        seen.add(step.name)
        if not step.command or not all(isinstance(c, str) for c in step.command):
            violations.append(f"step {step.name!r}: command must be a nonempty list of strings")
        elif not step.command[0]:
            violations.append(f"step {step.name!r}: command[0] must be nonempty")
        if not all(isinstance(a, str) for a in step.args):
            violations.append(f"step {step.name!r}: args must be strings")
        for k, v in step.env.items():
            if not isinstance(k, str) or not isinstance(v, str):
                violations.append(f"step {step.name!r}: env entries must be strings")
    return violations


def _flow_list(items: list[str]) -> str:
    return "[" + ", ".join(json.dumps(i) for i in items) + "]"


def encode_workflow(workflow: Workflow) -> str:
    """Serialize to the fixed YAML schema; byte-identical for equal inputs."""
    violations = validate_workflow(workflow)
    if violations:
        raise WorkflowError("; ".join(violations))
    lines = [
        f"apiVersion: {API_VERSION}",
        f"kind: {KIND}",
        "metadata:",
        f"  name: {workflow.name}",
        "spec:",
    ]
    if not workflow.steps:
        lines.append("  steps: []")
    else:
        lines.append("  steps:")
        for step in workflow.steps:
            lines.append(f"  - name: {step.name}")
            lines.append(f"    command: {_flow_list(step.command)}")
            lines.append(f"    args: {_flow_list(step.args)}")
            if step.env:
                body = ", ".join(f"{json.dumps(k)}: {json.dumps(v)}"
                                 for k, v in step.env.items())
                lines.append("    env: {" + body + "}")
    return "\n".join(lines) + "\n"


def _expect_keys(mapping: dict, allowed: set[str], required: set[str], where: str):
    unknown = set(mapping) - allowed
    if unknown:
        raise WorkflowError(f"unknown key(s) {sorted(unknown)} in {where}")
    missing = required - set(mapping)
    if missing:
        raise WorkflowError(f"missing key(s) {sorted(missing)} in {where}")


def _string_list(value: object, where: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise WorkflowError(f"{where} must be a list of strings")
    return list(value)


def decode_workflow(text: str) -> Workflow:
    """Parse and validate a workflow document; inverse of encode_workflow."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise WorkflowError(f"malformed YAML: {e}")
    if not isinstance(doc, dict):
        raise WorkflowError("workflow document must be a mapping")
    _expect_keys(doc, {"apiVersion", "kind", "metadata", "spec"},
                 {"apiVersion", "kind", "metadata", "spec"}, "document")
    if doc["apiVersion"] != API_VERSION:
        raise WorkflowError(f"unsupported apiVersion {doc['apiVersion']!r}")
    if doc["kind"] != KIND:
        raise WorkflowError(f"unsupported kind {doc['kind']!r}")
    metadata = doc["metadata"]
    if not isinstance(metadata, dict):
        raise WorkflowError("metadata must be a mapping")
    _expect_keys(metadata, {"name"}, {"name"}, "metadata")
    spec = doc["spec"]
    if not isinstance(spec, dict):
        raise WorkflowError("spec must be a mapping")
    _expect_keys(spec, {"steps"}, {"steps"}, "spec")
    raw_steps = spec["steps"]
    if not isinstance(raw_steps, list):
        raise WorkflowError("spec.steps must be a list")
    steps: list[Step] = []
    for idx, raw in enumerate(raw_steps):
        where = f"spec.steps[{idx}]"
        if not isinstance(raw, dict):
            raise WorkflowError(f"{where} must be a mapping")
        _expect_keys(raw, {"name", "command", "args", "env"}, {"name", "command"}, where)
        env = raw.get("env", {})
        if not isinstance(env, dict):
            raise WorkflowError(f"{where}.env must be a mapping")
        steps.append(Step(
            name=raw["name"],
            command=_string_list(raw["command"], f"{where}.command"),
            args=_string_list(raw.get("args", []), f"{where}.args"),
            env=dict(env),
        ))
    workflow = Workflow(name=metadata["name"], steps=steps)
    violations = validate_workflow(workflow)
    if violations:
        raise WorkflowError("; ".join(violations))
    return workflow
