/** Typed client for the controller REST API.
 *
 * Every request the console makes goes through this module, so the
 * contract tests only need to watch these call sites. Credentials ride
 * in JSON bodies on POST/DELETE and in headers on GET — never in URLs.
 */

import type {
  ApiErrorBody,
  CommandResult,
  ContainerRecord,
  Credentials,
  DeviceRecord,
  ImageRecord,
  ProbeResponse,
  TransportKind,
  VolumeRecord,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ApiErrorBody,
  ) {
    super(`${body.code}: ${body.detail}`);
  }

  get code(): string {
    return this.body.code;
  }
}

function credentialHeaders(credentials: Credentials): Record<string, string> {
  switch (credentials.kind) {
    case "ssh_password":
      return { "X-SSH-Username": credentials.username, "X-SSH-Password": credentials.password };
    case "agent_key":
      return { "X-Agent-Key": credentials.key };
    default:
      return {};
  }
}

export class ApiClient {
  constructor(private readonly base: string = "") {}

  private async request<T>(
    method: string,
    path: string,
    options: { body?: unknown; headers?: Record<string, string> } = {},
  ): Promise<T> {
    const init: RequestInit = { method, headers: { ...options.headers } };
    if (options.body !== undefined) {
      init.headers = { ...init.headers, "Content-Type": "application/json" };
      init.body = JSON.stringify(options.body);
    }
    const response = await fetch(this.base + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    const payload = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, payload as ApiErrorBody);
    }
    return payload as T;
  }

  listDevices(): Promise<DeviceRecord[]> {
    return this.request("GET", "/api/devices");
  }

  addDevice(device: {
    name: string;
    address: string;
    port: number;
    transport: TransportKind;
  }): Promise<DeviceRecord> {
    return this.request("POST", "/api/devices", { body: device });
  }

  getDevice(id: string): Promise<DeviceRecord> {
    return this.request("GET", `/api/devices/${id}`);
  }

  removeDevice(id: string): Promise<void> {
    return this.request("DELETE", `/api/devices/${id}`);
  }

  probeDevice(id: string, credentials: Credentials): Promise<ProbeResponse> {
    return this.request("POST", `/api/devices/${id}/probe`, { body: { credentials } });
  }

  execCommand(
    id: string,
    command: string,
    credentials: Credentials,
    timeoutMs?: number,
  ): Promise<CommandResult> {
    const body: Record<string, unknown> = { command, credentials };
    if (timeoutMs !== undefined) {
      body.timeout_ms = timeoutMs;
    }
    return this.request("POST", `/api/devices/${id}/exec`, { body });
  }

  listContainers(id: string, credentials: Credentials): Promise<ContainerRecord[]> {
    return this.request("GET", `/api/devices/${id}/containers`, {
      headers: credentialHeaders(credentials),
    });
  }

  listImages(id: string, credentials: Credentials): Promise<ImageRecord[]> {
    return this.request("GET", `/api/devices/${id}/images`, {
      headers: credentialHeaders(credentials),
    });
  }

  listVolumes(id: string, credentials: Credentials): Promise<VolumeRecord[]> {
    return this.request("GET", `/api/devices/${id}/volumes`, {
      headers: credentialHeaders(credentials),
    });
  }

  containerAction(
    id: string,
    containerId: string,
    action: "start" | "stop" | "restart",
    credentials: Credentials,
  ): Promise<CommandResult> {
    return this.request("POST", `/api/devices/${id}/containers/${containerId}/${action}`, {
      body: { credentials },
    });
  }

  removeContainer(id: string, containerId: string, credentials: Credentials): Promise<CommandResult> {
    return this.request("DELETE", `/api/devices/${id}/containers/${containerId}`, {
      body: { credentials },
    });
  }

  containerLogs(
    id: string,
    containerId: string,
    credentials: Credentials,
    tail = 100,
  ): Promise<{ stdout: string }> {
    return this.request("GET", `/api/devices/${id}/containers/${containerId}/logs?tail=${tail}`, {
      headers: credentialHeaders(credentials),
    });
  }
}
