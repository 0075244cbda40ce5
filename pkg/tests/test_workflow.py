import random

import pytest

from sqlbridge.errors import WorkflowError
from sqlbridge.workflow import (
    Step,
    Workflow,
    decode_workflow,
    encode_workflow,
    validate_workflow,
)


def echo_workflow() -> Workflow:
    return Workflow(name="echo-hello-world", steps=[
        Step(name="step-0", command=["echo"], args=["Aloha"]),
        Step(name="step-1", command=["echo"], args=["El mundo"]),
    ])


ECHO_GOLDEN = """\
apiVersion: sqlbridge.dev/v1
kind: Workflow
metadata:
  name: echo-hello-world
spec:
  steps:
  - name: step-0
    command: ["echo"]
    args: ["Aloha"]
  - name: step-1
    command: ["echo"]
    args: ["El mundo"]
"""


class TestEncode:
    def test_echo_golden_bytes(self):
        assert encode_workflow(echo_workflow()) == ECHO_GOLDEN

    def test_empty_steps(self):
        text = encode_workflow(Workflow(name="w", steps=[]))
        assert "steps: []" in text
        assert text.endswith("\n")

    def test_double_quote_escaped(self):
        wf = Workflow(name="w", steps=[
            Step(name="s", command=["echo"], args=['say "hi"'])])
        text = encode_workflow(wf)
        assert 'args: ["say \\"hi\\""]' in text

    def test_env_rendered_when_nonempty(self):
        wf = Workflow(name="w", steps=[
            Step(name="s", command=["echo"], env={"A": "1", "B": "2"})])
        text = encode_workflow(wf)
        assert 'env: {"A": "1", "B": "2"}' in text

    def test_deterministic(self):
        wf = echo_workflow()
        assert encode_workflow(wf) == encode_workflow(wf)

    def test_invalid_name_rejected(self):
        with pytest.raises(WorkflowError):
            encode_workflow(Workflow(name="Bad_Name", steps=[]))

    def test_duplicate_step_names_rejected(self):
        wf = Workflow(name="w", steps=[
            Step(name="s", command=["echo"]),
            Step(name="s", command=["echo"])])
        with pytest.raises(WorkflowError):
            encode_workflow(wf)


class TestDecode:
    def test_round_trip_echo(self):
        assert decode_workflow(encode_workflow(echo_workflow())) == echo_workflow()

    def test_wrong_kind_rejected(self):
        text = ECHO_GOLDEN.replace("kind: Workflow", "kind: Pipeline")
        with pytest.raises(WorkflowError, match="kind"):
            decode_workflow(text)

    def test_missing_api_version_rejected(self):
        text = "\n".join(l for l in ECHO_GOLDEN.splitlines()
                         if not l.startswith("apiVersion"))
        with pytest.raises(WorkflowError, match="apiVersion"):
            decode_workflow(text)

    def test_unknown_key_rejected(self):
        text = ECHO_GOLDEN + "extra: true\n"
        with pytest.raises(WorkflowError, match="unknown"):
            decode_workflow(text)

    def test_malformed_yaml_rejected(self):
        with pytest.raises(WorkflowError):
            decode_workflow("apiVersion: [unclosed")

    def test_encode_decode_identity_on_canonical_document(self):
        wf = Workflow(name="w", steps=[
            Step(name="s-0", command=["echo"], args=["a"], env={"K": "v"})])
        text = encode_workflow(wf)
        assert encode_workflow(decode_workflow(text)) == text


class TestValidate:
    def test_valid_echo_workflow(self):
        assert validate_workflow(echo_workflow()) == []

    def test_duplicate_step_name_violation(self):
        wf = Workflow(name="w", steps=[
            Step(name="s", command=["echo"]),
            Step(name="s", command=["echo"])])
        assert len([v for v in validate_workflow(wf) if "duplicate" in v]) == 1

    def test_bad_name_violation(self):
        assert len(validate_workflow(Workflow(name="Bad_Name"))) == 1

    def test_empty_command_violation(self):
        wf = Workflow(name="w", steps=[Step(name="s", command=[])])
        assert any("command" in v for v in validate_workflow(wf))


def random_workflow(rng: random.Random) -> Workflow:
    texts = ["a", "hello world", 'quote " here', "tab\tsep", "semi;colon",
             "unié", "", "back\\slash", "colon: space"]
    steps = []
    for i in range(rng.randint(0, 6)):
        env = {f"k{j}": rng.choice(texts) for j in range(rng.randint(0, 3))}
        steps.append(Step(
            name=f"step-{i}",
            command=[rng.choice(["echo", "run", "do-it"])],
            args=[rng.choice(texts) for _ in range(rng.randint(0, 4))],
            env=env,
        ))
    return Workflow(name=rng.choice(["w", "my-flow", "flow-123"]), steps=steps)


def test_round_trip_on_randomized_workflows():
    rng = random.Random(99)
    for _ in range(100):
        wf = random_workflow(rng)
        text = encode_workflow(wf)
        assert text == encode_workflow(wf)  # byte-identical across calls
        assert decode_workflow(text) == wf
