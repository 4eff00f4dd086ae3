/** A miniature graph payload shaped like the service's demo export. */

import { GraphPayload, SchedulePayload } from "../src/types.js";

const EV = "http://ev.example/";

export const ev = (name: string) => EV + name;

export const sampleGraph: GraphPayload = {
  prefixes: { ex: EV },
  nodes: [
    { iri: ev("CellModule"), kind: "ProductClass", label: "Battery cell module", attrs: {} },
    { iri: ev("Transport"), kind: "ProcessClass", label: "Transport battery", attrs: { duration_s: 30 } },
    { iri: ev("Unscrew"), kind: "ProcessClass", label: "Unscrew housing bolts", attrs: { duration_s: 60 } },
    { iri: ev("ReqTorque"), kind: "RequiredCapability", label: "Torque", attrs: { torque_nm__ge: 12 } },
    { iri: ev("AGV1"), kind: "Resource", label: "Transport AGV", attrs: {} },
    { iri: ev("Robot20"), kind: "Resource", label: "Heavy robot", attrs: {} },
    { iri: ev("AgvTransport"), kind: "ProvidedCapability", label: "Pallet transport", attrs: {} },
    { iri: ev("Robot20Torque"), kind: "ProvidedCapability", label: "Screwdriver 20 Nm", attrs: { torque_nm: 20 } },
    { iri: ev("BatteryLate"), kind: "UndesiredCondition", label: "Battery not arrived in time", attrs: {} },
    { iri: ev("AgvBatteryLow"), kind: "PlausibleCause", label: "AGV battery low", attrs: { weight: 0.9 } },
    { iri: ev("UpstreamDelay"), kind: "PlausibleCause", label: "Upstream delay", attrs: { weight: 0.7 } },
  ],
  edges: [
    { subject: ev("Transport"), kind: "hasSuccessor", object: ev("Unscrew") },
    { subject: ev("Unscrew"), kind: "requiresCapability", object: ev("ReqTorque") },
    { subject: ev("AGV1"), kind: "providesCapability", object: ev("AgvTransport") },
    { subject: ev("Robot20"), kind: "providesCapability", object: ev("Robot20Torque") },
    { subject: ev("AGV1"), kind: "definesCause", object: ev("AgvBatteryLow") },
    { subject: ev("BatteryLate"), kind: "hasPlausibleCause", object: ev("AgvBatteryLow") },
    { subject: ev("BatteryLate"), kind: "hasPlausibleCause", object: ev("UpstreamDelay") },
    { subject: ev("BatteryLate"), kind: "affects", object: ev("Transport") },
  ],
};

export const sampleSchedule: SchedulePayload = {
  assignments: [
    { step: "urn:ppr:run:r0001:Transport", resource: ev("AGV1"), start_s: 0, duration_s: 30 },
    { step: "urn:ppr:run:r0001:Unscrew", resource: ev("Robot20"), start_s: 30, duration_s: 60 },
    { step: "urn:ppr:run:r0002:Transport", resource: ev("AGV1"), start_s: 30, duration_s: 30 },
    { step: "urn:ppr:run:r0002:Unscrew", resource: ev("Robot20"), start_s: 90, duration_s: 60 },
  ],
  makespan_s: 150,
  graph_version: 3,
};
