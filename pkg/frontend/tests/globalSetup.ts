/** Start one qmut service on an ephemeral port for the whole test run. */

import { spawn, type ChildProcess } from "node:child_process";
import type { TestProject } from "vitest/node";

declare module "vitest" {
  export interface ProvidedContext {
    qmutBase: string;
  }
}

let child: ChildProcess | null = null;

export default async function setup(project: TestProject): Promise<() => void> {
  child = spawn("python3", ["-m", "qmut.cli", "serve"], {
    env: { ...process.env, QMUT_ADDR: "127.0.0.1:0" },
    stdio: ["ignore", "pipe", "inherit"],
  });
  const proc = child;

  const base = await new Promise<string>((resolve, reject) => {
    let seen = "";
    const timer = setTimeout(() => {
      reject(new Error(`qmut service did not announce itself: ${JSON.stringify(seen)}`));
    }, 20000);
    proc.stdout!.setEncoding("utf8");
    proc.stdout!.on("data", (chunk: string) => {
      seen += chunk;
      const match = seen.match(/qmut service listening on (\S+):(\d+)/);
      if (match) {
        clearTimeout(timer);
        resolve(`http://${match[1]}:${match[2]}`);
      }
    });
    proc.once("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`qmut service exited before listening (code ${code})`));
    });
  });

  project.provide("qmutBase", base);

  return () => {
    proc.kill("SIGTERM");
  };
}
