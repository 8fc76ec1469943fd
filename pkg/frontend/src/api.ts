// Thin fetch/EventSource wrappers over the backend's documented routes.
// The console is served by the same origin that runs the platform, so all
// paths are relative.

import type { BuildEvent } from "./stages.js";

export interface FunctionSummary {
  name: string;
  runtime: string;
  status: string;
  endpoint_path: string | null;
  failure_detail: string | null;
}

export interface DeviceRecord {
  id: string;
  kind: string;
  attributes: Record<string, unknown>;
}

async function asJson<T>(response: Response): Promise<T> {
  if (!response.ok) {
    const body = await response.text();
    throw new Error(`${response.status}: ${body}`);
  }
  return (await response.json()) as T;
}

export function newSessionId(): string {
  return Array.from(crypto.getRandomValues(new Uint8Array(6)))
    .map((b) => b.toString(16).padStart(2, "0"))
    .join("");
}

export function openBuildStream(
  session: string,
  onEvent: (event: BuildEvent) => void,
  onDrop?: () => void,
): () => void {
  const es = new EventSource(`/build/${session}/events`);
  es.onmessage = (e) => {
    try {
      onEvent(JSON.parse(e.data));
    } catch {}
  };
  es.onerror = () => {
    es.close();
    onDrop?.();
  };
  return () => es.close();
}

export async function startBuild(
  description: string,
  runtime: string,
  session: string,
): Promise<Record<string, unknown>> {
  const response = await fetch("/build", {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ description, runtime, session }),
  });
  return asJson(response);
}

export async function listFunctions(): Promise<FunctionSummary[]> {
  const doc = await asJson<{ functions: FunctionSummary[] }>(await fetch("/functions"));
  return doc.functions;
}

export async function removeFunction(name: string): Promise<void> {
  await asJson(await fetch(`/functions/${encodeURIComponent(name)}`, { method: "DELETE" }));
}

export interface InvokeReply {
  status: number;
  body: string;
  guestError: boolean;
}

export async function invokeFunction(name: string, payload: string): Promise<InvokeReply> {
  const response = await fetch(`/fn/${encodeURIComponent(name)}`, {
    method: "POST",
    body: payload,
  });
  return {
    status: response.status,
    body: await response.text(),
    guestError: response.headers.get("X-Guest-Error") === "1",
  };
}

export async function listDevices(): Promise<string[]> {
  return asJson(await fetch("/devices"));
}

export async function getDevice(id: string): Promise<DeviceRecord> {
  return asJson(await fetch(`/devices/${encodeURIComponent(id)}`));
}
