/** Bootstrap and hash routing: "#/" home (add device + list),
 * "#/device/<id>" portal. Only device ids ever appear in the URL. */

import { ApiClient } from "./api.js";
import { clear, el } from "./dom.js";
import { ViewState } from "./state.js";
import { addDeviceView } from "./views/addDevice.js";
import { deviceListView } from "./views/deviceList.js";
import { portalView } from "./views/portal.js";
import type { PortalHandle } from "./views/portal.js";

export function startApp(root: HTMLElement, api: ApiClient = new ApiClient()): void {
  const state = new ViewState();
  let activePortal: PortalHandle | null = null;

  function navigate(hash: string): void {
    window.location.hash = hash;
  }

  async function renderHome(): Promise<void> {
    state.setDevices(await api.listDevices());
    clear(root);
    root.append(
      el("h1", { text: "dockhand" }),
      addDeviceView(api, () => void render()),
      deviceListView(api, state, {
        onOpen: (deviceId) => navigate(`#/device/${deviceId}`),
        onChanged: () => void render(),
      }),
    );
  }

  async function renderPortal(deviceId: string): Promise<void> {
    state.setDevices(await api.listDevices());
    const device = state.device(deviceId);
    clear(root);
    if (!device) {
      root.append(
        el("p", { className: "notice error", text: "Unknown device." }),
        el("button", { text: "Back", onClick: () => navigate("#/") }),
      );
      return;
    }
    state.selectedDeviceId = deviceId;
    activePortal = portalView(api, state, device, () => navigate("#/"));
    root.append(el("h1", { text: "dockhand" }), activePortal.element);
  }

  async function render(): Promise<void> {
    activePortal?.dispose();
    activePortal = null;
    state.selectedDeviceId = null;
    const hash = window.location.hash;
    const portalMatch = /^#\/device\/([A-Za-z0-9-]+)$/.exec(hash);
    if (portalMatch) {
      await renderPortal(portalMatch[1]);
    } else {
      await renderHome();
    }
  }

  window.addEventListener("hashchange", () => void render());
  void render();
}

declare global {
  interface Window {
    __dockhandTest?: boolean;
  }
}

if (typeof window !== "undefined" && !window.__dockhandTest) {
  const mount = document.getElementById("app");
  if (mount) {
    startApp(mount);
  }
}
