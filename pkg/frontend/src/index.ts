export {
  Step,
  Workflow,
  encodeWorkflow,
  validateName,
  validateWorkflow,
} from "./workflow.js";
export {
  StepSpec,
  TaskHandle,
  buildWorkflow,
  emitYaml,
  step,
  task,
  taskName,
} from "./builder.js";
