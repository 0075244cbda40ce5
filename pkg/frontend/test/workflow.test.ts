import { readFileSync } from "node:fs";
import { describe, expect, it } from "vitest";

import { Workflow, encodeWorkflow, validateWorkflow } from "../src/workflow.js";

const GOLDEN = new URL("../../tests/golden/echo_workflow.yaml", import.meta.url);

function echoWorkflow(): Workflow {
  return {
    name: "echo-hello-world",
    steps: [
      { name: "step-0", command: ["echo"], args: ["Aloha"], env: {} },
      { name: "step-1", command: ["echo"], args: ["El mundo"], env: {} },
    ],
  };
}

describe("encodeWorkflow", () => {
  it("matches the shared golden file byte for byte", () => {
    const golden = readFileSync(GOLDEN, "utf-8");
    expect(encodeWorkflow(echoWorkflow())).toBe(golden);
  });

  it("renders empty step lists inline", () => {
    const text = encodeWorkflow({ name: "w", steps: [] });
    expect(text).toContain("steps: []");
    expect(text.endsWith("\n")).toBe(true);
  });

  it("escapes double quotes in args", () => {
    const text = encodeWorkflow({
      name: "w",
      steps: [{ name: "s", command: ["echo"], args: ['say "hi"'], env: {} }],
    });
    expect(text).toContain('args: ["say \\"hi\\""]');
  });

  it("escapes non-ascii text as unicode sequences", () => {
    const text = encodeWorkflow({
      name: "w",
      steps: [{ name: "s", command: ["echo"], args: ["unié"], env: {} }],
    });
    expect(text).toContain('args: ["uni\\u00e9"]');
  });

  it("renders env as a flow map only when nonempty", () => {
    const withEnv = encodeWorkflow({
      name: "w",
      steps: [{ name: "s", command: ["echo"], args: [], env: { A: "1" } }],
    });
    expect(withEnv).toContain('env: {"A": "1"}');
    const withoutEnv = encodeWorkflow({
      name: "w",
      steps: [{ name: "s", command: ["echo"], args: [], env: {} }],
    });
    expect(withoutEnv).not.toContain("env:");
  });

  it("is deterministic", () => {
    expect(encodeWorkflow(echoWorkflow())).toBe(encodeWorkflow(echoWorkflow()));
  });

  it("rejects invalid names", () => {
    expect(() => encodeWorkflow({ name: "Bad_Name", steps: [] })).toThrow();
  });
});

describe("validateWorkflow", () => {
  it("accepts the echo workflow", () => {
    expect(validateWorkflow(echoWorkflow())).toEqual([]);
  });

  it("flags duplicate step names", () => {
    const wf: Workflow = {
      name: "w",
      steps: [
        { name: "s", command: ["echo"], args: [], env: {} },
        { name: "s", command: ["echo"], args: [], env: {} },
      ],
    };
    expect(validateWorkflow(wf).some((v) => v.includes("duplicate"))).toBe(true);
  });

  it("flags empty commands", () => {
    const wf: Workflow = {
      name: "w",
      steps: [{ name: "s", command: [], args: [], env: {} }],
    };
    expect(validateWorkflow(wf).some((v) => v.includes("command"))).toBe(true);
  });
});
