/** Home-screen form registering a new device. */

import { ApiError } from "../api.js";
import type { ApiClient } from "../api.js";
import { el, labeledInput } from "../dom.js";
import type { TransportKind } from "../types.js";

export function addDeviceView(api: ApiClient, onAdded: () => void): HTMLElement {
  const name = labeledInput("Name", { type: "text", placeholder: "lab" });
  const address = labeledInput("Address", { type: "text", placeholder: "192.168.10.23" });
  const port = labeledInput("Port", { type: "number", value: "9090", min: "1", max: "65535" });

  const transport = el("select");
  for (const kind of ["http_agent", "ssh"] as TransportKind[]) {
    transport.append(el("option", { text: kind, attrs: { value: kind } }));
  }
  const transportField = el(
    "label",
    { className: "field" },
    el("span", { text: "Transport" }),
    transport,
  );

  const inlineError = el("p", { className: "notice error hidden" });
  const banner = el("p", { className: "notice error hidden", attrs: { "data-role": "banner" } });

  const form = el(
    "form",
    { className: "panel add-device" },
    el("h2", { text: "Add a device" }),
    name.wrapper,
    address.wrapper,
    port.wrapper,
    transportField,
    inlineError,
    banner,
    el("button", { text: "Add device", attrs: { type: "submit" }, className: "primary" }),
  );

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    inlineError.classList.add("hidden");
    banner.classList.add("hidden");

    const addressValue = address.input.value.trim();
    const portValue = Number(port.input.value);
    if (!addressValue) {
      inlineError.textContent = "Address must not be empty.";
      inlineError.classList.remove("hidden");
      return; // no request leaves the browser
    }
    if (!Number.isInteger(portValue) || portValue < 1 || portValue > 65535) {
      inlineError.textContent = "Port must be between 1 and 65535.";
      inlineError.classList.remove("hidden");
      return;
    }

    try {
      await api.addDevice({
        name: name.input.value.trim() || addressValue,
        address: addressValue,
        port: portValue,
        transport: transport.value as TransportKind,
      });
    } catch (error) {
      banner.textContent =
        error instanceof ApiError
          ? `Could not add device: ${error.body.detail || error.body.code}`
          : `Could not add device: ${String(error)}`;
      banner.classList.remove("hidden");
      return;
    }
    form.reset();
    port.input.value = "9090";
    onAdded();
  });

  return form;
}
