/** Wire types mirrored from the controller REST API. */

export type TransportKind = "ssh" | "http_agent" | "local";

export type DeviceStatus = "unknown" | "reachable" | "unreachable";

export interface DeviceRecord {
  id: string;
  name: string;
  address: string;
  port: number;
  transport: TransportKind;
  created_at: string;
  last_status: DeviceStatus;
}

export interface CommandResult {
  exit_code: number;
  stdout: string;
  stderr: string;
  duration_ms: number;
  transport: TransportKind;
}

export interface ContainerRecord {
  container_id: string;
  name: string;
  image: string;
  status: string;
  state: "running" | "exited" | "created" | "paused" | "other";
}

export interface ImageRecord {
  image_id: string;
  repository: string;
  tag: string;
  size_text: string;
}

export interface VolumeRecord {
  volume_name: string;
  driver: string;
}

export interface ProbeResponse {
  status: "reachable" | "unreachable";
  error_kind?: string;
}

export interface ApiErrorBody {
  code: string;
  detail: string;
  reason?: string;
}

/** Session-only credentials; kept in memory and nowhere else. */
export type Credentials =
  | { kind: "ssh_password"; username: string; password: string }
  | { kind: "ssh_key"; username: string; private_key: string; passphrase?: string }
  | { kind: "agent_key"; key: string }
  | { kind: "none" };

export interface ConsoleEntry {
  command: string;
  result: CommandResult;
}
