// Spawns the real decision service on a throwaway copy of the fixture
// registry so the what-if tests run against actual HTTP responses.

import { spawn, type ChildProcess } from "node:child_process";
import { copyFileSync, mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

export const PORT = 8414;
export const BASE_URL = `http://127.0.0.1:${PORT}`;

let child: ChildProcess | null = null;
let workDir: string | null = null;

async function waitForHealth(url: string, attempts = 60): Promise<void> {
  for (let i = 0; i < attempts; i++) {
    try {
      const resp = await fetch(`${url}/health`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error(`service at ${url} did not become healthy`);
}

export default async function setup(): Promise<() => void> {
  workDir = mkdtempSync(join(tmpdir(), "abdecide-ui-"));
  const registry = join(workDir, "registry.jsonl");
  copyFileSync(new URL("../fixtures/registry.jsonl", import.meta.url), registry);
  child = spawn(
    "abdecide",
    ["--registry", registry, "serve", "--port", String(PORT)],
    { stdio: "ignore" },
  );
  await waitForHealth(BASE_URL);
  return () => {
    child?.kill();
    if (workDir) rmSync(workDir, { recursive: true, force: true });
  };
}
