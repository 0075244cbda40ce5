// Task/step builder: declare a workflow as a plain function whose body
// calls step(), then emit the YAML document for one invocation of it.

import { Step, Workflow, encodeWorkflow, validateName } from "./workflow.js";

export interface StepSpec {
  cmd: string[];
  args?: string[];
  env?: Record<string, string>;
}

export interface TaskHandle<A extends unknown[]> {
  name: string;
  body: (...args: A) => void;
}

interface TaskContext {
  name: string;
  steps: Step[];
}

let active: TaskContext | null = null;

/** Derive the workflow name from a function name: underscores become hyphens. */
export function taskName(fn: Function): string {
  return fn.name.replace(/_/g, "-");
}

export function task<A extends unknown[]>(
  body: (...args: A) => void,
): TaskHandle<A> {
  const name = taskName(body);
  if (!validateName(name)) {
    throw new Error(`invalid task name '${name}': must match [a-z0-9-]+`);
  }
  return { name, body };
}

export function step(spec: StepSpec): void {
  if (active === null) {
    throw new Error("step() called outside a task");
  }
  active.steps.push({
    name: `step-${active.steps.length}`,
    command: [...spec.cmd],
    args: [...(spec.args ?? [])],
    env: { ...(spec.env ?? {}) },
  });
}

/** Run the task body once with the given arguments and collect its steps. */
export function buildWorkflow<A extends unknown[]>(
  handle: TaskHandle<A>,
  ...args: A
): Workflow {
  if (active !== null) {
    throw new Error(
      `task '${handle.name}' started while '${active.name}' is active`,
    );
  }
  const context: TaskContext = { name: handle.name, steps: [] };
  active = context;
  try {
    handle.body(...args);
    return { name: context.name, steps: context.steps };
  } catch (err) {
    throw new Error(
      `task '${handle.name}' failed at step ${context.steps.length}: ${err}`,
    );
  } finally {
    active = null;
  }
}

export function emitYaml<A extends unknown[]>(
  handle: TaskHandle<A>,
  ...args: A
): string {
  return encodeWorkflow(buildWorkflow(handle, ...args));
}
