import { test } from "node:test";
import assert from "node:assert/strict";

import { ganttLanes, scheduleProblems } from "../src/gantt.js";
import { ev, sampleSchedule } from "./fixtures.js";

test("lanes are per resource, bars chronological", () => {
  const lanes = ganttLanes(sampleSchedule);
  assert.deepEqual(lanes.map((lane) => lane.resource), [ev("AGV1"), ev("Robot20")]);
  const agv = lanes[0];
  assert.deepEqual(agv.bars.map((bar) => bar.start), [0, 30]);
  assert.equal(agv.bars[0].leftPct, 0);
  assert.equal(agv.bars[0].widthPct, 20); // 30 of 150
});

test("feasible schedule has no problems", () => {
  assert.deepEqual(scheduleProblems(sampleSchedule), []);
});

test("overlap within a lane is reported", () => {
  const broken = structuredClone(sampleSchedule);
  broken.assignments[2].start_s = 10; // collides with the first transport
  broken.makespan_s = 150;
  const problems = scheduleProblems(broken);
  assert.ok(problems.some((p) => p.includes("overlaps")));
});

test("single bar from zero is fine", () => {
  const single = {
    assignments: [{ step: "s", resource: "r", start_s: 0, duration_s: 5 }],
    makespan_s: 5,
    graph_version: null,
  };
  assert.deepEqual(scheduleProblems(single), []);
  assert.equal(ganttLanes(single)[0].bars[0].widthPct, 100);
});

test("makespan mismatch and negative values are caught", () => {
  const wrong = structuredClone(sampleSchedule);
  wrong.makespan_s = 999;
  assert.ok(scheduleProblems(wrong).some((p) => p.includes("makespan")));
  const negative = structuredClone(sampleSchedule);
  negative.assignments[0].start_s = -1;
  assert.ok(scheduleProblems(negative).some((p) => p.includes("negative")));
});

test("empty schedule is not a problem, just empty", () => {
  assert.deepEqual(scheduleProblems({ assignments: [], makespan_s: 0, graph_version: null }), []);
  assert.deepEqual(ganttLanes({ assignments: [], makespan_s: 0, graph_version: null }), []);
});
