/** Every ApiClient method issues only documented request shapes, and
 * credential material never rides in a URL. */

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import type { Credentials } from "../src/types.js";
import { installFetchSpy, type RecordedRequest } from "./contract.js";

const SECRETS = ["hunter2-password", "agent-key-xyzzy", "PRIVATE-KEY-MATERIAL"];

const sshCreds: Credentials = { kind: "ssh_password", username: "op", password: SECRETS[0] };
const agentCreds: Credentials = { kind: "agent_key", key: SECRETS[1] };
const keyCreds: Credentials = { kind: "ssh_key", username: "op", private_key: SECRETS[2] };

describe("api client contract", () => {
  let recorded: RecordedRequest[];
  let api: ApiClient;

  beforeEach(() => {
    recorded = installFetchSpy(() => ({
      body: { id: "d1", exit_code: 0, stdout: "", stderr: "", duration_ms: 1, status: "reachable" },
    }));
    api = new ApiClient();
  });

  it("covers the full surface with documented shapes only", async () => {
    await api.listDevices();
    await api.addDevice({ name: "lab", address: "h", port: 9090, transport: "http_agent" });
    await api.getDevice("d1");
    await api.probeDevice("d1", agentCreds);
    await api.execCommand("d1", "docker ps", sshCreds, 5000);
    await api.execCommand("d1", "docker ps", agentCreds);
    await api.listContainers("d1", agentCreds);
    await api.listImages("d1", sshCreds);
    await api.listVolumes("d1", agentCreds);
    await api.containerAction("d1", "c0ffee", "start", keyCreds);
    await api.containerAction("d1", "c0ffee", "stop", agentCreds);
    await api.containerAction("d1", "c0ffee", "restart", agentCreds);
    await api.removeContainer("d1", "c0ffee", agentCreds);
    await api.containerLogs("d1", "c0ffee", agentCreds, 50);
    expect(recorded.length).toBe(14);
  });

  it("never puts credential material into a URL", async () => {
    await api.probeDevice("d1", sshCreds);
    await api.execCommand("d1", "docker ps", keyCreds);
    await api.listContainers("d1", agentCreds);
    await api.containerLogs("d1", "c0ffee", sshCreds);
    for (const request of recorded) {
      for (const secret of SECRETS) {
        expect(request.url).not.toContain(secret);
        expect(request.url).not.toContain(encodeURIComponent(secret));
      }
    }
  });

  it("deletes without a body for devices but with credentials for containers", async () => {
    recorded = installFetchSpy(() => ({ status: 204 }));
    await api.removeDevice("d1");
    expect(recorded[0].body).toBeUndefined();
  });

  it("turns error statuses into ApiError with the server body", async () => {
    installFetchSpy(() => ({
      status: 422,
      body: { code: "validation_rejected", detail: "command rejected: not_docker", reason: "not_docker" },
    }));
    const failure = await api.execCommand("d1", "ls", agentCreds).catch((error) => error);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(422);
    expect(failure.code).toBe("validation_rejected");
    expect(failure.body.reason).toBe("not_docker");
  });
});
