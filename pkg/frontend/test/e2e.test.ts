/** End-to-end: drive the console's data pipeline against a live service
 * loaded with the demo model. Covers the console acceptance items: four
 * populated columns, what-if starve + restore, overlap-free Gantt lanes,
 * and the chat prompt rendering ranked causes. */

import { test } from "node:test";
import assert from "node:assert/strict";
import { spawn } from "node:child_process";
import { fileURLToPath } from "node:url";
import { dirname, resolve } from "node:path";

import { ApiClient } from "../src/api.js";
import { groupColumns } from "../src/columns.js";
import { chatView } from "../src/diagnosis.js";
import { ganttLanes, scheduleProblems } from "../src/gantt.js";
import { renderCauses, renderColumns, renderGantt, renderImpact } from "../src/render.js";
import { ViewState } from "../src/state.js";
import { WhatifModel, impactRows, restoresState, starvedSteps } from "../src/whatif.js";

const repoRoot = resolve(dirname(fileURLToPath(import.meta.url)), "..", "..", "..");
const demoTtl = resolve(repoRoot, "src", "pprakg", "fixtures", "demo.ttl");
const EV = "http://ev.example/";

function startService(): Promise<{ stop: () => void; baseUrl: string }> {
  return new Promise((resolvePromise, rejectPromise) => {
    const child = spawn(
      "python3",
      ["-m", "pprakg.cli", "serve", "--addr", "127.0.0.1:0", "--graph", demoTtl],
      { cwd: repoRoot },
    );
    let output = "";
    const timer = setTimeout(() => rejectPromise(new Error(`service did not start: ${output}`)), 15000);
    child.stdout?.on("data", (chunk) => {
      output += String(chunk);
      const match = output.match(/serving on (http:\/\/[^\s]+)/);
      if (match) {
        clearTimeout(timer);
        resolvePromise({ stop: () => child.kill("SIGTERM"), baseUrl: match[1] });
      }
    });
    child.stderr?.on("data", (chunk) => {
      output += String(chunk);
    });
    child.on("error", (error) => {
      clearTimeout(timer);
      rejectPromise(error as Error);
    });
  });
}

test("e2e console pipeline against a live service", async () => {
  const service = await startService();
  const api = new ApiClient(service.baseUrl);
  const state = new ViewState();
  try {
    // --- four-column browser renders every node group ------------------
    const graphEnvelope = await api.graph();
    state.notePanelLoaded("graph", graphEnvelope.graph_version);
    const columns = groupColumns(graphEnvelope.data);
    assert.ok(columns.productsAndProcesses.length >= 5, "products/processes column empty");
    assert.ok(columns.requiredCapabilities.length === 3, "required capabilities column wrong");
    assert.ok(columns.resources.length === 3, "resource column wrong");
    assert.ok(columns.conditions.length === 2 && columns.globalCauses.length === 2);
    const agvCard = columns.resources.find((card) => card.resource.iri === `${EV}AGV1`);
    assert.ok(agvCard, "AGV card missing");
    assert.deepEqual(agvCard.scopedCauses.map((n) => n.iri), [`${EV}AgvBatteryLow`]);
    const columnsHtml = renderColumns(columns);
    for (const label of ["Battery cell module", "Transport AGV", "Upstream logistics delay"]) {
      assert.ok(columnsHtml.includes(label), `column html missing ${label}`);
    }

    // --- what-if toggle: starve, badge, restore -------------------------
    const whatifModel = new WhatifModel();
    const before = whatifModel.toggles(graphEnvelope.data);
    const torqueToggle = before.find((t) => t.capability === `${EV}Robot20Torque`);
    assert.ok(torqueToggle && torqueToggle.provided);

    const removal = await api.toggleCapability(`${EV}Robot20`, `${EV}Robot20Torque`, "remove");
    whatifModel.noteApplied(`${EV}Robot20`, `${EV}Robot20Torque`, "remove");
    state.noteServerVersion(removal.graph_version);
    assert.deepEqual(starvedSteps(removal.data), [`${EV}Unscrew`]);
    assert.ok(renderImpact(impactRows(removal.data)).includes("starved-badge"));
    assert.ok(state.isStale("graph"), "graph panel should be stale after the toggle");

    const midGraph = await api.graph();
    const offToggle = whatifModel
      .toggles(midGraph.data)
      .find((t) => t.capability === `${EV}Robot20Torque`);
    assert.ok(offToggle && !offToggle.provided, "removed capability should show switched off");

    const readd = await api.toggleCapability(`${EV}Robot20`, `${EV}Robot20Torque`, "add");
    whatifModel.noteApplied(`${EV}Robot20`, `${EV}Robot20Torque`, "add");
    assert.ok(restoresState(removal.data, readd.data), "second toggle must restore state");
    const restoredGraph = await api.graph();
    assert.deepEqual(
      restoredGraph.data.edges.filter((e) => e.kind === "providesCapability"),
      graphEnvelope.data.edges.filter((e) => e.kind === "providesCapability"),
    );
    state.notePanelLoaded("graph", restoredGraph.graph_version);
    assert.equal(state.isStale("graph"), false);

    // --- schedule: lanes never overlap ----------------------------------
    await api.createRuns(`${EV}CellModule`, 2);
    const preview = await api.schedulePreview(undefined, true);
    assert.deepEqual(scheduleProblems(preview.data), []);
    const lanes = ganttLanes(preview.data);
    assert.ok(lanes.length >= 2, "expected several resource lanes");
    for (const lane of lanes) {
      for (let i = 1; i < lane.bars.length; i += 1) {
        const previous = lane.bars[i - 1];
        assert.ok(
          lane.bars[i].start >= previous.start + previous.duration,
          `lane ${lane.resource} overlaps`,
        );
      }
    }
    assert.ok(renderGantt(preview.data).includes("lane-track"));

    // a hand-crafted overlapping payload must be refused with a badge
    const forged = structuredClone(preview.data);
    forged.assignments[1].start_s = forged.assignments[0].start_s;
    forged.assignments[1].resource = forged.assignments[0].resource;
    assert.ok(renderGantt(forged).includes("error-badge"));

    // --- chat prompt renders the fixture's ranked causes ----------------
    const chat = await api.chat("Why did the battery not arrive in time");
    const view = chatView(chat.data);
    assert.equal(view.intent, "diagnose");
    assert.ok(view.causes, "diagnose answer must carry causes");
    assert.deepEqual(
      view.causes.map((row) => [row.cause, row.scope]),
      [
        [`${EV}AgvBatteryLow`, "resource-specific"],
        [`${EV}UpstreamDelay`, "global"],
      ],
    );
    const causesHtml = renderCauses(view.causes);
    assert.ok(causesHtml.indexOf("AgvBatteryLow") < causesHtml.indexOf("UpstreamDelay"));
  } finally {
    service.stop();
  }
});
