/** Modal collecting per-device credentials before the first action.
 * Values resolve into memory only; cancel resolves null and the pending
 * action is abandoned. */

import { clear, el, labeledInput } from "../dom.js";
import type { Credentials, DeviceRecord } from "../types.js";

export function promptCredentials(
  device: DeviceRecord,
  notice?: string,
): Promise<Credentials | null> {
  if (device.transport === "local") {
    return Promise.resolve({ kind: "none" });
  }
  return new Promise((resolve) => {
    const overlay = el("div", { className: "modal-overlay" });
    const form = el("form", { className: "modal" });

    const finish = (credentials: Credentials | null) => {
      overlay.remove();
      resolve(credentials);
    };

    form.append(el("h3", { text: `Credentials for ${device.name}` }));
    if (notice) {
      form.append(el("p", { className: "notice error", text: notice }));
    }

    let build: () => Credentials;
    if (device.transport === "http_agent") {
      const key = labeledInput("Agent key", { type: "password", autocomplete: "off" });
      form.append(key.wrapper);
      build = () => ({ kind: "agent_key", key: key.input.value });
    } else {
      const username = labeledInput("SSH username", { type: "text", autocomplete: "off" });
      const password = labeledInput("SSH password", { type: "password", autocomplete: "off" });
      const privateKey = el("textarea", {
        className: "key-input",
        attrs: { placeholder: "...or paste a private key", rows: "4" },
      });
      const passphrase = labeledInput("Key passphrase (optional)", {
        type: "password",
        autocomplete: "off",
      });
      form.append(username.wrapper, password.wrapper, privateKey, passphrase.wrapper);
      build = () =>
        privateKey.value.trim()
          ? {
              kind: "ssh_key",
              username: username.input.value,
              private_key: privateKey.value,
              passphrase: passphrase.input.value || undefined,
            }
          : {
              kind: "ssh_password",
              username: username.input.value,
              password: password.input.value,
            };
    }

    const error = el("p", { className: "notice error hidden" });
    const buttons = el(
      "div",
      { className: "modal-buttons" },
      el("button", {
        text: "Cancel",
        attrs: { type: "button" },
        onClick: () => finish(null),
      }),
      el("button", { text: "Use credentials", attrs: { type: "submit" }, className: "primary" }),
    );
    form.append(error, buttons);

    form.addEventListener("submit", (event) => {
      event.preventDefault();
      const credentials = build();
      if (
        (credentials.kind === "ssh_password" || credentials.kind === "ssh_key") &&
        !credentials.username
      ) {
        clear(error);
        error.textContent = "A username is required for SSH.";
        error.classList.remove("hidden");
        return;
      }
      finish(credentials);
    });

    overlay.append(form);
    document.body.append(overlay);
  });
}
