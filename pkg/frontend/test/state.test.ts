import { test } from "node:test";
import assert from "node:assert/strict";

import { ViewState } from "../src/state.js";

test("server versions are monotone", () => {
  const state = new ViewState();
  state.noteServerVersion(3);
  state.noteServerVersion(1); // late response must not roll back
  assert.equal(state.currentVersion, 3);
});

test("panels become stale when the version moves on", () => {
  const state = new ViewState();
  state.notePanelLoaded("schedule", 2);
  assert.equal(state.isStale("schedule"), false);
  state.noteServerVersion(3); // e.g. a what-if toggle elsewhere
  assert.equal(state.isStale("schedule"), true);
  assert.deepEqual(state.stalePanels(), ["schedule"]);
});

test("reloading a panel clears its staleness", () => {
  const state = new ViewState();
  state.notePanelLoaded("graph", 1);
  state.noteServerVersion(5);
  assert.equal(state.isStale("graph"), true);
  state.notePanelLoaded("graph", 5);
  assert.equal(state.isStale("graph"), false);
});

test("panels never loaded are not stale", () => {
  const state = new ViewState();
  state.noteServerVersion(9);
  assert.equal(state.isStale("diagnosis"), false);
});
