/** Device table with probe status badges and open/remove actions. */

import type { ApiClient } from "../api.js";
import { el } from "../dom.js";
import type { ViewState } from "../state.js";
import type { DeviceRecord } from "../types.js";
import { promptCredentials } from "./credentialModal.js";

export interface DeviceListHooks {
  onOpen: (deviceId: string) => void;
  onChanged: () => void;
}

function statusBadge(device: DeviceRecord, errorKind?: string): HTMLElement {
  const status = device.last_status;
  const text = status === "unreachable" && errorKind ? `unreachable: ${errorKind}` : status;
  return el("span", { className: `badge badge-${status}`, text });
}

export function deviceListView(
  api: ApiClient,
  state: ViewState,
  hooks: DeviceListHooks,
): HTMLElement {
  const panel = el("section", { className: "panel device-list" });
  panel.append(el("h2", { text: "Devices" }));

  if (state.devices.length === 0) {
    panel.append(
      el("p", {
        className: "empty-state",
        text: "No devices yet — add the address of a host running an engine to get started.",
      }),
    );
    return panel;
  }

  const probeErrors = new Map<string, string>();
  const table = el("table", { className: "devices" });
  table.append(
    el(
      "tr",
      {},
      el("th", { text: "Name" }),
      el("th", { text: "Endpoint" }),
      el("th", { text: "Transport" }),
      el("th", { text: "Status" }),
      el("th", { text: "" }),
    ),
  );

  for (const device of state.devices) {
    const badgeCell = el("td", {}, statusBadge(device, probeErrors.get(device.id)));

    const probe = async () => {
      let credentials = state.credentialsFor(device.id);
      if (!credentials) {
        const entered = await promptCredentials(device);
        if (!entered) {
          return;
        }
        credentials = entered;
        state.setCredentials(device.id, credentials);
      }
      const result = await api.probeDevice(device.id, credentials);
      device.last_status = result.status;
      if (result.error_kind) {
        probeErrors.set(device.id, result.error_kind);
      } else {
        probeErrors.delete(device.id);
      }
      badgeCell.replaceChildren(statusBadge(device, probeErrors.get(device.id)));
    };

    const remove = async () => {
      await api.removeDevice(device.id);
      hooks.onChanged();
    };

    table.append(
      el(
        "tr",
        { attrs: { "data-device": device.id } },
        el("td", { text: device.name }),
        el("td", { text: `${device.address}:${device.port}` }),
        el("td", { text: device.transport }),
        badgeCell,
        el(
          "td",
          { className: "row-actions" },
          el("button", { text: "Open", onClick: () => hooks.onOpen(device.id) }),
          el("button", { text: "Probe", onClick: () => void probe() }),
          el("button", { text: "Remove", className: "danger", onClick: () => void remove() }),
        ),
      ),
    );
  }

  panel.append(table);
  return panel;
}
