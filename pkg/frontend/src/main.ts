// Script entry point: print the two-step echo example workflow.

import { emitYaml, step, task } from "./builder.js";

function echo_hello_world(hello: string, world: string = "El mundo") {
  step({ cmd: ["echo"], args: [hello] });
  step({ cmd: ["echo"], args: [world] });
}

const echoHelloWorld = task(echo_hello_world);

process.stdout.write(emitYaml(echoHelloWorld, "Aloha"));
