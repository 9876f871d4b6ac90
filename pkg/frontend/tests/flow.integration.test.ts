/** Full operator flow against a real controller + agent running the mock
 * engine: add device -> list -> portal data -> container lifecycle. */

import { spawn, type ChildProcess } from "node:child_process";
import { chmodSync, mkdtempSync, rmSync, writeFileSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import type { Credentials } from "../src/types.js";

const AGENT_KEY = "flow-test-key";
const creds: Credentials = { kind: "agent_key", key: AGENT_KEY };

let workDir: string;
let agentProcess: ChildProcess | undefined;
let controllerProcess: ChildProcess | undefined;
let api: ApiClient;

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const server = createServer();
    server.listen(0, "127.0.0.1", () => {
      const address = server.address();
      server.close(() =>
        typeof address === "object" && address ? resolve(address.port) : reject(new Error("no port")),
      );
    });
  });
}

async function waitFor(url: string, timeoutMs = 20000): Promise<void> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    try {
      const response = await fetch(url);
      if (response.ok) {
        return;
      }
    } catch {
      // not up yet
    }
    if (Date.now() > deadline) {
      throw new Error(`service at ${url} did not come up`);
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "dockhand-flow-"));
  const shim = join(workDir, "docker");
  writeFileSync(shim, '#!/bin/sh\nexec mock-docker "$@"\n');
  chmodSync(shim, 0o755);

  const agentPort = await freePort();
  const controllerPort = await freePort();
  const env = { ...process.env, MOCKDOCKER_STATE: join(workDir, "state.json") };

  agentProcess = spawn(
    "dockhand",
    ["agent", "--bind", `127.0.0.1:${agentPort}`, "--key", AGENT_KEY, "--docker-bin", shim],
    { env, stdio: "ignore" },
  );
  controllerProcess = spawn(
    "dockhand",
    ["serve", "--bind", `127.0.0.1:${controllerPort}`, "--store", join(workDir, "devices.json")],
    { env, stdio: "ignore" },
  );

  await waitFor(`http://127.0.0.1:${agentPort}/api/v1/health`);
  await waitFor(`http://127.0.0.1:${controllerPort}/api/devices`);
  api = new ApiClient(`http://127.0.0.1:${controllerPort}`);

  const device = await api.addDevice({
    name: "flow-lab",
    address: "127.0.0.1",
    port: agentPort,
    transport: "http_agent",
  });
  expect(device.id).toBeTruthy();
}, 40000);

afterAll(() => {
  agentProcess?.kill("SIGTERM");
  controllerProcess?.kill("SIGTERM");
  if (workDir) {
    rmSync(workDir, { recursive: true, force: true });
  }
});

describe("add -> list -> portal -> lifecycle", () => {
  it("walks the whole flow against the mock engine", async () => {
    const devices = await api.listDevices();
    expect(devices.map((entry) => entry.name)).toContain("flow-lab");
    const deviceId = devices.find((entry) => entry.name === "flow-lab")!.id;

    const probe = await api.probeDevice(deviceId, creds);
    expect(probe.status).toBe("reachable");

    let containers = await api.listContainers(deviceId, creds);
    expect(containers.length).toBe(2);
    const db = containers.find((row) => row.name === "db")!;
    expect(db.state).toBe("exited");

    const started = await api.containerAction(deviceId, db.container_id, "start", creds);
    expect(started.exit_code).toBe(0);

    containers = await api.listContainers(deviceId, creds);
    expect(containers.find((row) => row.name === "db")!.state).toBe("running");

    const logs = await api.containerLogs(deviceId, db.container_id, creds, 2);
    expect(logs.stdout).toBe("db ready\ndb stopped\n");

    const version = await api.execCommand(deviceId, "docker version", creds);
    expect(version.exit_code).toBe(0);
    expect(version.stdout).toContain("mock-docker");

    await api.containerAction(deviceId, db.container_id, "stop", creds);
    const removed = await api.removeContainer(deviceId, db.container_id, creds);
    expect(removed.exit_code).toBe(0);

    containers = await api.listContainers(deviceId, creds);
    expect(containers.map((row) => row.name)).toEqual(["web"]);
  }, 30000);

  it("maps rejected commands and bad keys the documented way", async () => {
    const devices = await api.listDevices();
    const deviceId = devices.find((entry) => entry.name === "flow-lab")!.id;

    const rejection = await api.execCommand(deviceId, "docker ps; id", creds).catch((error) => error);
    expect(rejection.status).toBe(422);
    expect(rejection.body.reason).toBe("forbidden_character");

    const badKey = await api
      .execCommand(deviceId, "docker ps", { kind: "agent_key", key: "wrong" })
      .catch((error) => error);
    expect(badKey.status).toBe(401);
    expect(badKey.code).toBe("auth_failed");
  }, 30000);
});
