import { test } from "node:test";
import assert from "node:assert/strict";

import { WhatifModel, impactRows, restoresState, starvedSteps } from "../src/whatif.js";
import { ev, sampleGraph } from "./fixtures.js";
import { ImpactReport } from "../src/types.js";

const starvingImpact: ImpactReport = {
  resource: ev("Robot20"),
  capability: ev("Robot20Torque"),
  action: "remove",
  changed: [
    { step: ev("Unscrew"), before: [ev("Robot20")], after: [], starved: true },
  ],
};

const restoringImpact: ImpactReport = {
  resource: ev("Robot20"),
  capability: ev("Robot20Torque"),
  action: "add",
  changed: [
    { step: ev("Unscrew"), before: [], after: [ev("Robot20")], starved: false },
  ],
};

test("toggles reflect current providesCapability edges", () => {
  const model = new WhatifModel();
  const toggles = model.toggles(sampleGraph);
  assert.deepEqual(
    toggles.map((t) => [t.resource, t.capability, t.provided]),
    [
      [ev("AGV1"), ev("AgvTransport"), true],
      [ev("Robot20"), ev("Robot20Torque"), true],
    ],
  );
  assert.equal(model.nextAction(toggles[0]), "remove");
});

test("removed pair stays listed switched off so it can be restored", () => {
  const model = new WhatifModel();
  model.noteApplied(ev("Robot20"), ev("Robot20Torque"), "remove");
  const graph = structuredClone(sampleGraph);
  graph.edges = graph.edges.filter((e) => e.object !== ev("Robot20Torque"));
  const toggles = model.toggles(graph);
  const torque = toggles.find((t) => t.capability === ev("Robot20Torque"));
  assert.ok(torque);
  assert.equal(torque.provided, false);
  assert.equal(model.nextAction(torque), "add");
  model.noteApplied(ev("Robot20"), ev("Robot20Torque"), "add");
  const restored = model.toggles(sampleGraph).find((t) => t.capability === ev("Robot20Torque"));
  assert.ok(restored);
  assert.equal(restored.provided, true);
});

test("impact rows carry the starved flag", () => {
  const rows = impactRows(starvingImpact);
  assert.equal(rows.length, 1);
  assert.equal(rows[0].starved, true);
  assert.deepEqual(starvedSteps(starvingImpact), [ev("Unscrew")]);
  assert.deepEqual(starvedSteps(restoringImpact), []);
});

test("a second toggle restores the initial state", () => {
  assert.ok(restoresState(starvingImpact, restoringImpact));
  assert.ok(!restoresState(starvingImpact, starvingImpact));
});
