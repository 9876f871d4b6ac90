/** In-memory view state. Credentials live here and only here — a page
 * reload forgets them by design. Console history is append-only for the
 * session. */

import type { ConsoleEntry, Credentials, DeviceRecord } from "./types.js";

export class ViewState {
  devices: DeviceRecord[] = [];
  selectedDeviceId: string | null = null;
  private history = new Map<string, ConsoleEntry[]>();
  private credentials = new Map<string, Credentials>();
  private busyDevices = new Set<string>();

  setDevices(devices: DeviceRecord[]): void {
    this.devices = devices;
  }

  device(id: string): DeviceRecord | undefined {
    return this.devices.find((device) => device.id === id);
  }

  consoleHistory(deviceId: string): readonly ConsoleEntry[] {
    return this.history.get(deviceId) ?? [];
  }

  appendHistory(deviceId: string, entry: ConsoleEntry): void {
    const entries = this.history.get(deviceId) ?? [];
    entries.push(entry);
    this.history.set(deviceId, entries);
  }

  credentialsFor(deviceId: string): Credentials | undefined {
    return this.credentials.get(deviceId);
  }

  setCredentials(deviceId: string, credentials: Credentials): void {
    this.credentials.set(deviceId, credentials);
  }

  clearCredentials(deviceId: string): void {
    this.credentials.delete(deviceId);
  }

  /** Single in-flight command per device: returns false when already busy. */
  markBusy(deviceId: string): boolean {
    if (this.busyDevices.has(deviceId)) {
      return false;
    }
    this.busyDevices.add(deviceId);
    return true;
  }

  clearBusy(deviceId: string): void {
    this.busyDevices.delete(deviceId);
  }

  isBusy(deviceId: string): boolean {
    return this.busyDevices.has(deviceId);
  }
}
