// Workflow value type and its deterministic YAML emitter. The output
// format is pinned byte-for-byte by golden tests shared with the
// toolchain that consumes these files, so every formatting choice here
// (key order, flow lists, string escaping) is deliberate.

export interface Step {
  name: string;
  command: string[];
  args: string[];
  env: Record<string, string>;
}

export interface Workflow {
  name: string;
  steps: Step[];
}

const API_VERSION = "sqlbridge.dev/v1";
const KIND = "Workflow";
const NAME_RE = /^[a-z0-9-]+$/;
const MAX_NAME_LEN = 63;

export function validateName(name: string): boolean {
  return NAME_RE.test(name) && name.length <= MAX_NAME_LEN;
}

export function validateWorkflow(workflow: Workflow): string[] {
  const violations: string[] = [];
  if (!validateName(workflow.name)) {
    violations.push(`workflow name '${workflow.name}' must match [a-z0-9-]+`);
  }
  const seen = new Set<string>();
  for (const step of workflow.steps) {
    if (!validateName(step.name)) {
      violations.push(`step name '${step.name}' must match [a-z0-9-]+`);
    }
    if (seen.has(step.name)) {
      violations.push(`duplicate step name '${step.name}'`);
    }
    seen.add(step.name);
    if (step.command.length === 0 || step.command[0] === "") {
      violations.push(`step '${step.name}': command must be nonempty`);
    }
  }
  return violations;
}

// Quote like a strict JSON encoder that escapes everything outside
// printable ASCII, so the same string always yields the same bytes.
function quote(s: string): string {
  return JSON.stringify(s).replace(/[\u007f-\uffff]/g, (ch) => {
    return "\\u" + ch.charCodeAt(0).toString(16).padStart(4, "0");
  });
}

function flowList(items: string[]): string {
  return "[" + items.map(quote).join(", ") + "]";
}

export function encodeWorkflow(workflow: Workflow): string {
  const violations = validateWorkflow(workflow);
  if (violations.length > 0) {
    throw new Error(violations.join("; "));
  }
  const lines = [
    `apiVersion: ${API_VERSION}`,
    `kind: ${KIND}`,
    "metadata:",
    `  name: ${workflow.name}`,
    "spec:",
  ];
  if (workflow.steps.length === 0) {
    lines.push("  steps: []");
  } else {
    lines.push("  steps:");
    for (const step of workflow.steps) {
      lines.push(`  - name: ${step.name}`);
      lines.push(`    command: ${flowList(step.command)}`);
      lines.push(`    args: ${flowList(step.args)}`);
      const entries = Object.entries(step.env);
      if (entries.length > 0) {
        const body = entries
          .map(([k, v]) => `${quote(k)}: ${quote(v)}`)
          .join(", ");
        lines.push(`    env: {${body}}`);
      }
    }
  }
  return lines.join("\n") + "\n";
}
