/** HTML builders. Pure string-in/string-out so they are testable without a
 * DOM; main.ts assigns the results to innerHTML. */

import { nodeNeighborhood } from "./columns.js";
import type { FourColumns } from "./columns.js";
import { ganttLanes, scheduleProblems } from "./gantt.js";
import type { CauseRow, ChatView } from "./diagnosis.js";
import type { ImpactRow } from "./whatif.js";
import type { CapabilityToggle } from "./whatif.js";
import { GraphNode, GraphPayload, SchedulePayload, localName } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function nodeChip(node: GraphNode, highlighted: Set<string>): string {
  const classes = ["node", `kind-${node.kind}`];
  if (highlighted.has(node.iri)) classes.push("highlight");
  const label = node.label || localName(node.iri);
  return (
    `<button class="${classes.join(" ")}" data-iri="${escapeHtml(node.iri)}">` +
    `${escapeHtml(label)}</button>`
  );
}

export function renderColumns(columns: FourColumns, highlighted: Set<string> = new Set()): string {
  const chip = (node: GraphNode) => nodeChip(node, highlighted);
  const resourceCards = columns.resources
    .map(
      (card) => `
      <div class="resource-card">
        ${chip(card.resource)}
        <div class="card-row">${card.capabilities.map(chip).join("") || '<span class="empty">no capabilities</span>'}</div>
        ${card.scopedCauses.length ? `<div class="card-row scoped">${card.scopedCauses.map(chip).join("")}</div>` : ""}
      </div>`,
    )
    .join("");
  const orphans = columns.orphanScopedCauses.map(chip).join("");
  return `
    <div class="column" id="col-products">
      <h3>Products &amp; processes</h3>
      ${columns.productsAndProcesses.map(chip).join("") || '<p class="empty">none</p>'}
    </div>
    <div class="column" id="col-required">
      <h3>Required capabilities</h3>
      ${columns.requiredCapabilities.map(chip).join("") || '<p class="empty">none</p>'}
    </div>
    <div class="column" id="col-resources">
      <h3>Resources</h3>
      ${resourceCards || '<p class="empty">none</p>'}${orphans}
    </div>
    <div class="column" id="col-conditions">
      <h3>Conditions &amp; global causes</h3>
      ${columns.conditions.map(chip).join("") || '<p class="empty">none</p>'}
      <h4>Global causes</h4>
      ${columns.globalCauses.map(chip).join("") || '<p class="empty">none</p>'}
    </div>`;
}

export function renderNodeDetail(graph: GraphPayload, iri: string): string {
  const node = graph.nodes.find((candidate) => candidate.iri === iri);
  if (!node) {
    return `<p class="empty">unknown node</p>`;
  }
  const { out, incoming } = nodeNeighborhood(graph, iri);
  const attrs = Object.entries(node.attrs)
    .map(([name, value]) => `<tr><td>${escapeHtml(name)}</td><td>${escapeHtml(JSON.stringify(value))}</td></tr>`)
    .join("");
  const edgeRow = (kind: string, other: string, direction: string) =>
    `<tr><td>${direction} ${escapeHtml(kind)}</td><td><a href="#" data-iri="${escapeHtml(other)}">${escapeHtml(localName(other))}</a></td></tr>`;
  return `
    <h3>${escapeHtml(node.label || localName(node.iri))}</h3>
    <p class="iri">${escapeHtml(node.iri)} <span class="kind-badge">${node.kind}</span></p>
    <table class="detail">
      ${attrs}
      ${out.map((edge) => edgeRow(edge.kind, edge.object, "&rarr;")).join("")}
      ${incoming.map((edge) => edgeRow(edge.kind, edge.subject, "&larr;")).join("")}
    </table>`;
}

export function renderToggles(toggles: CapabilityToggle[]): string {
  if (!toggles.length) return '<p class="empty">no capabilities in the model</p>';
  return toggles
    .map(
      (toggle) => `
      <label class="toggle ${toggle.provided ? "on" : "off"}">
        <input type="checkbox" data-resource="${escapeHtml(toggle.resource)}"
               data-capability="${escapeHtml(toggle.capability)}"
               ${toggle.provided ? "checked" : ""}>
        ${escapeHtml(localName(toggle.resource))} &rarr; ${escapeHtml(localName(toggle.capability))}
      </label>`,
    )
    .join("");
}

export function renderImpact(rows: ImpactRow[]): string {
  if (!rows.length) return '<p class="empty">no eligibility changes</p>';
  const body = rows
    .map(
      (row) => `
      <tr class="${row.starved ? "starved" : ""}">
        <td>${escapeHtml(localName(row.step))}${row.starved ? ' <span class="badge starved-badge">starved</span>' : ""}</td>
        <td>${row.before.map(localName).map(escapeHtml).join(", ") || "&ndash;"}</td>
        <td>${row.after.map(localName).map(escapeHtml).join(", ") || "&ndash;"}</td>
      </tr>`,
    )
    .join("");
  return `<table class="impact"><tr><th>step</th><th>before</th><th>after</th></tr>${body}</table>`;
}

export function renderGantt(schedule: SchedulePayload): string {
  const problems = scheduleProblems(schedule);
  if (problems.length) {
    return (
      '<p class="badge error-badge">infeasible schedule payload</p><ul>' +
      problems.map((problem) => `<li>${escapeHtml(problem)}</li>`).join("") +
      "</ul>"
    );
  }
  if (!schedule.assignments.length) {
    return '<p class="empty">no schedule yet &mdash; create runs and preview one</p>';
  }
  const lanes = ganttLanes(schedule)
    .map(
      (lane) => `
      <div class="lane">
        <span class="lane-label">${escapeHtml(localName(lane.resource))}</span>
        <div class="lane-track">
          ${lane.bars
            .map(
              (bar) =>
                `<div class="bar" style="left:${bar.leftPct.toFixed(2)}%;width:${bar.widthPct.toFixed(2)}%"` +
                ` title="${escapeHtml(bar.step)} @ ${bar.start}s">${escapeHtml(localName(bar.step))}</div>`,
            )
            .join("")}
        </div>
      </div>`,
    )
    .join("");
  return `${lanes}<p class="makespan">makespan: ${schedule.makespan_s} s</p>`;
}

export function renderCauses(rows: CauseRow[]): string {
  if (!rows.length) {
    return '<p class="empty">no plausible causes recorded &mdash; extend the model to cover this condition</p>';
  }
  return (
    "<ol class='causes'>" +
    rows
      .map(
        (row) => `
        <li>
          <a href="#" class="cause" data-evidence="${escapeHtml(row.evidenceNodes.join(" "))}">
            ${escapeHtml(localName(row.cause))}
          </a>
          <span class="badge scope-${row.scope}">${row.scope}</span>
          <span class="weight">${row.weight.toFixed(2)}</span>
        </li>`,
      )
      .join("") +
    "</ol>"
  );
}

export function renderChat(view: ChatView): string {
  const text = `<p class="chat-text">${escapeHtml(view.text).replaceAll("\n", "<br>")}</p>`;
  if (view.causes) {
    return text + renderCauses(view.causes);
  }
  if (view.intent === "unknown") {
    return `<p class="badge warn-badge">no matching operation</p>${text}`;
  }
  return text;
}

export function renderStaleBadge(stale: boolean): string {
  return stale ? '<span class="badge stale-badge">stale &mdash; refresh</span>' : "";
}
