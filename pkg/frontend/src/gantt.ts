/** Gantt lane layout plus the client-side overlap guard.
 *
 * The guard exists only to refuse rendering an infeasible payload; the
 * schedule itself is never recomputed on the client.
 */

import { SchedulePayload, ScheduleRow } from "./types.js";

export interface GanttBar {
  step: string;
  start: number;
  duration: number;
  /** Percent offsets for CSS positioning. */
  leftPct: number;
  widthPct: number;
}

export interface GanttLane {
  resource: string;
  bars: GanttBar[];
}

export function ganttLanes(schedule: SchedulePayload): GanttLane[] {
  const horizon = Math.max(schedule.makespan_s, 1);
  const byResource = new Map<string, ScheduleRow[]>();
  for (const row of schedule.assignments) {
    const rows = byResource.get(row.resource) ?? [];
    rows.push(row);
    byResource.set(row.resource, rows);
  }
  const lanes: GanttLane[] = [];
  for (const resource of [...byResource.keys()].sort()) {
    const rows = byResource.get(resource)!;
    rows.sort((a, b) => a.start_s - b.start_s || (a.step < b.step ? -1 : 1));
    lanes.push({
      resource,
      bars: rows.map((row) => ({
        step: row.step,
        start: row.start_s,
        duration: row.duration_s,
        leftPct: (row.start_s / horizon) * 100,
        widthPct: (row.duration_s / horizon) * 100,
      })),
    });
  }
  return lanes;
}

/** Problems found in a schedule payload; non-empty means "do not render". */
export function scheduleProblems(schedule: SchedulePayload): string[] {
  const problems: string[] = [];
  let maxEnd = 0;
  for (const lane of ganttLanes(schedule)) {
    let previousEnd = -1;
    let previousStep = "";
    for (const bar of lane.bars) {
      if (bar.duration <= 0) {
        problems.push(`${bar.step}: non-positive duration`);
      }
      if (bar.start < 0) {
        problems.push(`${bar.step}: negative start`);
      }
      if (bar.start < previousEnd) {
        problems.push(`${lane.resource}: ${previousStep} overlaps ${bar.step}`);
      }
      previousEnd = Math.max(previousEnd, bar.start + bar.duration);
      previousStep = bar.step;
      maxEnd = Math.max(maxEnd, bar.start + bar.duration);
    }
  }
  if (schedule.assignments.length > 0 && schedule.makespan_s !== maxEnd) {
    problems.push(`makespan ${schedule.makespan_s} does not match last finish ${maxEnd}`);
  }
  return problems;
}
