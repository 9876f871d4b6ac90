/** Per-device portal: quick actions, custom command console with output
 * pane, and container/image/volume tables with lifecycle controls. */

import { ApiError } from "../api.js";
import type { ApiClient } from "../api.js";
import { clear, el } from "../dom.js";
import type { ViewState } from "../state.js";
import type { CommandResult, ContainerRecord, Credentials, DeviceRecord } from "../types.js";
import { promptCredentials } from "./credentialModal.js";

const REFRESH_INTERVAL_MS = 2000;

export interface PortalHandle {
  element: HTMLElement;
  dispose: () => void;
}

export function portalView(
  api: ApiClient,
  state: ViewState,
  device: DeviceRecord,
  onBack: () => void,
): PortalHandle {
  const root = el("section", { className: "panel portal" });
  let pollTimer: ReturnType<typeof setInterval> | null = null;

  // ---- credentials -------------------------------------------------------

  async function requireCredentials(notice?: string): Promise<Credentials | null> {
    const existing = state.credentialsFor(device.id);
    if (existing && !notice) {
      return existing;
    }
    const entered = await promptCredentials(device, notice);
    if (entered) {
      state.setCredentials(device.id, entered);
    }
    return entered;
  }

  /** Run an API call, reopening the credential prompt once on a 401. */
  async function withCredentials<T>(
    action: (credentials: Credentials) => Promise<T>,
  ): Promise<T | null> {
    let credentials = await requireCredentials();
    if (!credentials) {
      return null;
    }
    try {
      return await action(credentials);
    } catch (error) {
      if (error instanceof ApiError && error.status === 401) {
        state.clearCredentials(device.id);
        credentials = await requireCredentials("Invalid credentials — try again.");
        if (!credentials) {
          return null;
        }
        return await action(credentials);
      }
      throw error;
    }
  }

  // ---- output pane ---------------------------------------------------------

  const outputPane = el("div", { className: "output-pane", attrs: { "data-role": "output" } });

  function renderResult(command: string, result: CommandResult): void {
    const entry = el(
      "article",
      { className: "console-entry" },
      el("header", { text: `$ ${command}` }),
      el("p", {
        className: result.exit_code === 0 ? "exit ok" : "exit bad",
        text: `exit ${result.exit_code} in ${result.duration_ms} ms`,
      }),
    );
    if (result.stdout) {
      entry.append(el("pre", { className: "stdout", text: result.stdout }));
    }
    if (result.stderr) {
      entry.append(el("pre", { className: "stderr", text: result.stderr }));
    }
    outputPane.prepend(entry);
  }

  function renderNote(text: string): void {
    outputPane.prepend(el("p", { className: "notice", text }));
  }

  // ---- resource tables -------------------------------------------------------

  const containerTable = el("div", { className: "container-table", attrs: { "data-role": "containers" } });
  const resourcePane = el("div", { className: "resource-pane", attrs: { "data-role": "resources" } });

  function renderContainers(rows: ContainerRecord[]): void {
    clear(containerTable);
    containerTable.append(el("h3", { text: "Containers" }));
    if (rows.length === 0) {
      containerTable.append(el("p", { className: "empty-state", text: "No containers." }));
      return;
    }
    const table = el("table");
    table.append(
      el(
        "tr",
        {},
        el("th", { text: "Id" }),
        el("th", { text: "Name" }),
        el("th", { text: "Image" }),
        el("th", { text: "State" }),
        el("th", { text: "" }),
      ),
    );
    for (const row of rows) {
      const actions = el(
        "td",
        { className: "row-actions" },
        el("button", { text: "Start", onClick: () => void lifecycle(row, "start") }),
        el("button", { text: "Stop", onClick: () => void lifecycle(row, "stop") }),
        el("button", { text: "Restart", onClick: () => void lifecycle(row, "restart") }),
        el("button", { text: "Logs", onClick: () => void showLogs(row) }),
        el("button", { text: "Remove", className: "danger", onClick: () => void removeRow(row) }),
      );
      table.append(
        el(
          "tr",
          { attrs: { "data-container": row.container_id, "data-state": row.state } },
          el("td", { text: row.container_id.slice(0, 12) }),
          el("td", { text: row.name }),
          el("td", { text: row.image }),
          el("td", {}, el("span", { className: `badge state-${row.state}`, text: row.state })),
          actions,
        ),
      );
    }
    containerTable.append(table);
  }

  async function refreshContainers(): Promise<void> {
    const rows = await withCredentials((credentials) => api.listContainers(device.id, credentials));
    if (rows) {
      renderContainers(rows);
    }
  }

  function startPolling(): void {
    if (pollTimer === null) {
      pollTimer = setInterval(() => {
        refreshContainers().catch(() => undefined);
      }, REFRESH_INTERVAL_MS);
    }
  }

  async function lifecycle(row: ContainerRecord, action: "start" | "stop" | "restart"): Promise<void> {
    const result = await withCredentials((credentials) =>
      api.containerAction(device.id, row.container_id, action, credentials),
    );
    if (result) {
      renderResult(`docker ${action} ${row.container_id.slice(0, 12)}`, result);
      await refreshContainers();
      startPolling();
    }
  }

  async function removeRow(row: ContainerRecord): Promise<void> {
    const result = await withCredentials((credentials) =>
      api.removeContainer(device.id, row.container_id, credentials),
    );
    if (result) {
      renderResult(`docker rm ${row.container_id.slice(0, 12)}`, result);
      await refreshContainers();
      startPolling();
    }
  }

  async function showLogs(row: ContainerRecord): Promise<void> {
    const logs = await withCredentials((credentials) =>
      api.containerLogs(device.id, row.container_id, credentials),
    );
    if (logs) {
      renderResult(`docker logs --tail 100 ${row.container_id.slice(0, 12)}`, {
        exit_code: 0,
        stdout: logs.stdout,
        stderr: "",
        duration_ms: 0,
        transport: device.transport,
      });
    }
  }

  function renderResourceLines(title: string, lines: string[]): void {
    clear(resourcePane);
    resourcePane.append(el("h3", { text: title }));
    if (lines.length === 0) {
      resourcePane.append(el("p", { className: "empty-state", text: `No ${title.toLowerCase()}.` }));
      return;
    }
    const list = el("ul");
    for (const line of lines) {
      list.append(el("li", { text: line }));
    }
    resourcePane.append(list);
  }

  // ---- console ------------------------------------------------------------------

  const commandInput = el("input", {
    attrs: { type: "text", placeholder: "docker ps -a", "data-role": "command" },
  });
  const consoleError = el("p", { className: "notice error hidden", attrs: { "data-role": "console-error" } });

  async function runCustomCommand(): Promise<void> {
    const command = commandInput.value.trim();
    if (!command) {
      return;
    }
    consoleError.classList.add("hidden");
    if (!state.markBusy(device.id)) {
      consoleError.textContent = "A command is already running on this device.";
      consoleError.classList.remove("hidden");
      return;
    }
    try {
      const result = await withCredentials((credentials) =>
        api.execCommand(device.id, command, credentials),
      );
      if (result) {
        state.appendHistory(device.id, { command, result });
        renderResult(command, result);
        commandInput.value = "";
      }
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        // Rejected input never reaches the output pane.
        consoleError.textContent = `Command rejected: ${error.body.reason ?? error.body.detail}`;
        consoleError.classList.remove("hidden");
      } else if (error instanceof ApiError) {
        renderNote(`Request failed: ${error.body.code} — ${error.body.detail}`);
      } else {
        renderNote(`Request failed: ${String(error)}`);
      }
    } finally {
      state.clearBusy(device.id);
    }
  }

  // ---- quick actions -----------------------------------------------------------

  async function quickExec(command: string): Promise<void> {
    const result = await withCredentials((credentials) =>
      api.execCommand(device.id, command, credentials),
    );
    if (result) {
      state.appendHistory(device.id, { command, result });
      renderResult(command, result);
    }
  }

  const quickActions = el(
    "div",
    { className: "quick-actions" },
    el("button", { text: "ps", onClick: () => void refreshContainers() }),
    el("button", {
      text: "images",
      onClick: () =>
        void withCredentials((credentials) => api.listImages(device.id, credentials)).then(
          (rows) =>
            rows &&
            renderResourceLines(
              "Images",
              rows.map((row) => `${row.repository}:${row.tag} (${row.image_id.slice(0, 12)}, ${row.size_text})`),
            ),
        ),
    }),
    el("button", {
      text: "volume ls",
      onClick: () =>
        void withCredentials((credentials) => api.listVolumes(device.id, credentials)).then(
          (rows) =>
            rows && renderResourceLines("Volumes", rows.map((row) => `${row.volume_name} (${row.driver})`)),
        ),
    }),
    el("button", { text: "info", onClick: () => void quickExec("docker info") }),
    el("button", { text: "version", onClick: () => void quickExec("docker version") }),
  );

  // ---- layout ---------------------------------------------------------------------

  const consoleForm = el(
    "form",
    { className: "console-form" },
    commandInput,
    el("button", { text: "Run", attrs: { type: "submit" }, className: "primary" }),
  );
  consoleForm.addEventListener("submit", (event) => {
    event.preventDefault();
    void runCustomCommand();
  });

  root.append(
    el(
      "header",
      { className: "portal-header" },
      el("button", { text: "← Devices", onClick: onBack }),
      el("h2", { text: `${device.name} — ${device.address}:${device.port} (${device.transport})` }),
    ),
    quickActions,
    consoleForm,
    consoleError,
    el("div", { className: "portal-grid" }, containerTable, resourcePane, outputPane),
  );

  void refreshContainers();

  return {
    element: root,
    dispose: () => {
      if (pollTimer !== null) {
        clearInterval(pollTimer);
        pollTimer = null;
      }
    },
  };
}
