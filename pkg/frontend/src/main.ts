import {
  getDevice,
  invokeFunction,
  listDevices,
  listFunctions,
  newSessionId,
  openBuildStream,
  removeFunction,
  startBuild,
} from "./api.js";
import { failureBanner, stageRows } from "./format.js";
import type { BuildEvent, ConsoleState } from "./stages.js";
import { initialState, reduce } from "./stages.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

const descriptionInput = el<HTMLTextAreaElement>("description");
const runtimeSelect = el<HTMLSelectElement>("runtime");
const buildButton = el<HTMLButtonElement>("build-btn");
const buildNote = el<HTMLSpanElement>("build-note");
const stageList = el<HTMLOListElement>("stage-list");
const banner = el<HTMLDivElement>("banner");
const invokePanel = el<HTMLElement>("invoke-panel");
const invokeName = el<HTMLElement>("invoke-name");
const invokePayload = el<HTMLInputElement>("invoke-payload");
const invokeSend = el<HTMLButtonElement>("invoke-send");
const invokeOut = el<HTMLPreElement>("invoke-out");
const fnRows = el<HTMLTableSectionElement>("fn-rows");
const fnRefresh = el<HTMLButtonElement>("fn-refresh");
const deviceGrid = el<HTMLDivElement>("device-grid");

let state: ConsoleState = initialState();
let closeStream: (() => void) | null = null;
let liveFunction: string | null = null;

function renderStages() {
  stageList.innerHTML = "";
  for (const row of stageRows(state)) {
    const item = document.createElement("li");
    item.className = `stage ${row.look}`;
    const label = document.createElement("span");
    label.textContent = row.stage;
    item.appendChild(label);
    if (row.duration) {
      const time = document.createElement("span");
      time.className = "duration";
      time.textContent = row.duration;
      item.appendChild(time);
    }
    stageList.appendChild(item);
  }

  const text = failureBanner(state.failure);
  banner.textContent = text;
  banner.hidden = text === "";
}

function onBuildEvent(event: BuildEvent) {
  state = reduce(state, event);
  renderStages();
  if (state.done) {
    buildButton.disabled = false;
    if (state.ok && state.result && typeof state.result.function === "string") {
      liveFunction = state.result.function;
      invokeName.textContent = liveFunction;
      invokePanel.hidden = false;
    }
    void refreshFunctions();
  }
}

buildButton.addEventListener("click", () => {
  const description = descriptionInput.value.trim();
  if (!description) {
    buildNote.textContent = "describe the function first";
    return;
  }
  buildNote.textContent = "";
  buildButton.disabled = true;
  invokePanel.hidden = true;
  liveFunction = null;
  state = initialState();
  renderStages();

  closeStream?.();
  const session = newSessionId();
  // subscribe before posting so no stage event is missed
  closeStream = openBuildStream(session, onBuildEvent);
  startBuild(description, runtimeSelect.value, session).catch((err) => {
    buildNote.textContent = String(err);
    buildButton.disabled = false;
    closeStream?.();
  });
});

invokeSend.addEventListener("click", async () => {
  if (!liveFunction) return;
  invokeOut.textContent = "...";
  try {
    const reply = await invokeFunction(liveFunction, invokePayload.value);
    const marker = reply.guestError ? " (guest error)" : "";
    invokeOut.textContent = `${reply.status}${marker}\n${reply.body}`;
  } catch (err) {
    invokeOut.textContent = String(err);
  }
});

async function refreshFunctions() {
  let rows;
  try {
    rows = await listFunctions();
  } catch {
    return;
  }
  fnRows.innerHTML = "";
  for (const fn of rows) {
    const tr = document.createElement("tr");
    const status = fn.status.toLowerCase();
    tr.innerHTML =
      `<td>${fn.name}</td><td>${fn.runtime}</td>` +
      `<td class="status-${status}">${fn.status}</td>`;
    const actions = document.createElement("td");
    if (fn.status === "Running") {
      const drop = document.createElement("button");
      drop.textContent = "remove";
      drop.addEventListener("click", async () => {
        await removeFunction(fn.name).catch(() => undefined);
        if (liveFunction === fn.name) {
          liveFunction = null;
          invokePanel.hidden = true;
        }
        void refreshFunctions();
      });
      actions.appendChild(drop);
    }
    tr.appendChild(actions);
    fnRows.appendChild(tr);
  }
}

fnRefresh.addEventListener("click", () => void refreshFunctions());

async function refreshDevices() {
  let ids: string[];
  try {
    ids = await listDevices();
  } catch {
    return;
  }
  const cards = await Promise.all(
    ids.map((id) => getDevice(id).catch(() => null)),
  );
  deviceGrid.innerHTML = "";
  for (const device of cards) {
    if (!device) continue;
    const card = document.createElement("div");
    card.className = "device";
    const title = document.createElement("h3");
    title.textContent = device.id;
    card.appendChild(title);
    const attrs = document.createElement("dl");
    for (const [name, value] of Object.entries(device.attributes)) {
      const dt = document.createElement("dt");
      dt.textContent = name;
      const dd = document.createElement("dd");
      dd.textContent = String(value);
      attrs.appendChild(dt);
      attrs.appendChild(dd);
    }
    card.appendChild(attrs);
    deviceGrid.appendChild(card);
  }
}

renderStages();
void refreshFunctions();
void refreshDevices();
setInterval(() => void refreshDevices(), 2000);
