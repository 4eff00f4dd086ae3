/** DOM wiring: panels, polling, and the action loop against the service. */

import { ApiClient, ApiError } from "./api.js";
import { groupColumns } from "./columns.js";
import { causeRows, chatView } from "./diagnosis.js";
import {
  escapeHtml,
  renderCauses,
  renderChat,
  renderColumns,
  renderGantt,
  renderImpact,
  renderNodeDetail,
  renderStaleBadge,
  renderToggles,
} from "./render.js";
import { PANELS, Panel, ViewState } from "./state.js";
import { GraphPayload, SchedulePayload, localName } from "./types.js";
import { WhatifModel, impactRows } from "./whatif.js";

const api = new ApiClient("");
const state = new ViewState();
const whatif = new WhatifModel();

let graphCache: GraphPayload | null = null;
let scheduleCache: SchedulePayload | null = null;
let highlighted = new Set<string>();

function el(id: string): HTMLElement {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found;
}

function setStatus(text: string, isError = false): void {
  const status = el("status");
  status.textContent = text;
  status.className = isError ? "status error" : "status";
}

function refreshHeader(): void {
  el("version").textContent = `graph v${state.currentVersion}`;
  for (const panel of PANELS) {
    const badge = document.querySelector(`#tab-${panel} .stale-slot`);
    if (badge) badge.innerHTML = renderStaleBadge(state.isStale(panel));
  }
}

async function loadGraph(): Promise<void> {
  try {
    const envelope = await api.graph();
    graphCache = envelope.data;
    state.notePanelLoaded("graph", envelope.graph_version);
    state.notePanelLoaded("matching", envelope.graph_version);
    el("columns").innerHTML = renderColumns(groupColumns(graphCache), highlighted);
    el("whatif-toggles").innerHTML = renderToggles(whatif.toggles(graphCache));
    if (graphCache.nodes.length === 0) {
      el("columns").innerHTML =
        '<p class="empty">empty model &mdash; ingest a .ttl file via POST /api/graph/ttl or restart with --graph</p>';
    }
    if (state.selectedNode) {
      el("detail").innerHTML = renderNodeDetail(graphCache, state.selectedNode);
    }
    await loadConditions();
    refreshHeader();
    setStatus("connected");
  } catch (error) {
    setStatus(`connection lost: ${String(error)} — retrying`, true);
  }
}

async function loadConditions(): Promise<void> {
  const envelope = await api.conditions();
  state.noteServerVersion(envelope.graph_version);
  const select = el("condition-select") as HTMLSelectElement;
  const previous = select.value;
  select.innerHTML = envelope.data
    .map(
      (row) =>
        `<option value="${escapeHtml(row.condition)}">${escapeHtml(localName(row.condition))}</option>`,
    )
    .join("");
  if (previous) select.value = previous;
}

function selectNode(iri: string): void {
  state.selectedNode = iri;
  if (graphCache) {
    el("detail").innerHTML = renderNodeDetail(graphCache, iri);
  }
}

function activatePanel(panel: Panel): void {
  state.activePanel = panel;
  for (const candidate of PANELS) {
    el(`panel-${candidate}`).classList.toggle("active", candidate === panel);
    el(`tab-${candidate}`).classList.toggle("active", candidate === panel);
  }
}

async function onToggleCapability(input: HTMLInputElement): Promise<void> {
  const resource = input.dataset.resource!;
  const capability = input.dataset.capability!;
  const action = input.checked ? "add" : "remove";
  try {
    const envelope = await api.toggleCapability(resource, capability, action);
    whatif.noteApplied(resource, capability, action);
    state.noteServerVersion(envelope.graph_version);
    el("impact").innerHTML = renderImpact(impactRows(envelope.data));
    await loadGraph();
    state.notePanelLoaded("matching", envelope.graph_version);
  } catch (error) {
    input.checked = !input.checked; // roll the control back
    setStatus(describe(error), true);
  }
  refreshHeader();
}

async function onSchedule(commit: boolean): Promise<void> {
  const product = (el("product-input") as HTMLInputElement).value.trim();
  const count = Number((el("count-input") as HTMLInputElement).value) || 1;
  try {
    if (!scheduleCache || !commit) {
      if (product) {
        await api.createRuns(product, count);
      }
      const envelope = await api.schedulePreview(undefined, true);
      scheduleCache = envelope.data;
      state.notePanelLoaded("schedule", envelope.graph_version);
      el("gantt").innerHTML = renderGantt(scheduleCache);
      setStatus(`previewed schedule, makespan ${scheduleCache.makespan_s} s`);
    } else {
      const envelope = await api.commitSchedule(scheduleCache);
      state.notePanelLoaded("schedule", envelope.graph_version);
      setStatus(`committed ${envelope.data.committed_steps} allocations`);
      await loadGraph();
    }
  } catch (error) {
    setStatus(describe(error), true);
  }
  refreshHeader();
}

async function onDiagnose(): Promise<void> {
  const condition = (el("condition-select") as HTMLSelectElement).value;
  if (!condition) return;
  try {
    const envelope = await api.diagnose(condition);
    state.notePanelLoaded("diagnosis", envelope.graph_version);
    el("causes").innerHTML = renderCauses(causeRows(envelope.data));
  } catch (error) {
    setStatus(describe(error), true);
  }
  refreshHeader();
}

async function onChat(): Promise<void> {
  const input = el("chat-input") as HTMLInputElement;
  const question = input.value.trim();
  if (!question) return;
  try {
    const envelope = await api.chat(question);
    state.notePanelLoaded("diagnosis", envelope.graph_version);
    el("chat-answer").innerHTML = renderChat(chatView(envelope.data));
  } catch (error) {
    el("chat-answer").innerHTML = `<p class="badge error-badge">${escapeHtml(describe(error))}</p>`;
  }
  refreshHeader();
}

function onCauseClick(anchor: HTMLAnchorElement): void {
  const nodes = (anchor.dataset.evidence ?? "").split(" ").filter(Boolean);
  highlighted = new Set(nodes);
  if (graphCache) {
    el("columns").innerHTML = renderColumns(groupColumns(graphCache), highlighted);
  }
  activatePanel("graph");
  if (nodes.length) selectNode(nodes[nodes.length - 1]);
}

function describe(error: unknown): string {
  return error instanceof ApiError ? error.message : String(error);
}

async function poll(): Promise<void> {
  try {
    const envelope = await api.conditions();
    state.noteServerVersion(envelope.graph_version);
    setStatus("connected");
  } catch {
    setStatus("connection lost — retrying", true);
  }
  refreshHeader();
}

function wire(): void {
  document.body.addEventListener("click", (event) => {
    const target = event.target as HTMLElement;
    const nodeButton = target.closest("button.node") as HTMLButtonElement | null;
    if (nodeButton?.dataset.iri) {
      selectNode(nodeButton.dataset.iri);
      return;
    }
    const link = target.closest("a[data-iri]") as HTMLAnchorElement | null;
    if (link?.dataset.iri) {
      event.preventDefault();
      selectNode(link.dataset.iri);
      return;
    }
    const cause = target.closest("a.cause") as HTMLAnchorElement | null;
    if (cause) {
      event.preventDefault();
      onCauseClick(cause);
    }
  });
  el("whatif-toggles").addEventListener("change", (event) => {
    const input = event.target as HTMLInputElement;
    if (input.dataset.resource) void onToggleCapability(input);
  });
  for (const panel of PANELS) {
    el(`tab-${panel}`).addEventListener("click", () => activatePanel(panel));
  }
  el("preview-button").addEventListener("click", () => void onSchedule(false));
  el("commit-button").addEventListener("click", () => void onSchedule(true));
  el("refresh-button").addEventListener("click", () => void loadGraph());
  el("diagnose-button").addEventListener("click", () => void onDiagnose());
  el("chat-form").addEventListener("submit", (event) => {
    event.preventDefault();
    void onChat();
  });
  activatePanel("graph");
  void loadGraph();
  window.setInterval(() => void poll(), 2500);
}

document.addEventListener("DOMContentLoaded", wire);
