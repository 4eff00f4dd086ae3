/** Payload shapes of the pprakg HTTP service. */

export interface Envelope<T> {
  ok: boolean;
  data: T;
  errors: { code: string; message: string; line?: number; column?: number }[];
  graph_version: number;
}

export type NodeKind =
  | "ProductClass"
  | "ProcessClass"
  | "RequiredCapability"
  | "ProvidedCapability"
  | "Resource"
  | "UndesiredCondition"
  | "PlausibleCause"
  | "ProductInstance"
  | "ProcessStepInstance";

export interface GraphNode {
  iri: string;
  kind: NodeKind;
  label: string;
  attrs: Record<string, unknown>;
}

export interface GraphEdge {
  subject: string;
  kind: string;
  object: string;
}

export interface GraphPayload {
  prefixes: Record<string, string>;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface Violation {
  rule_id: string;
  severity: "error" | "warning";
  subject: string;
  message: string;
}

export interface MatchReport {
  step: string;
  eligible: string[];
  explanations: Record<string, ConstraintCheck[]>;
}

export interface ConstraintCheck {
  requirement: string;
  via: string | null;
  constraint: { attribute: string; op: string; value: unknown } | null;
  satisfied: boolean;
  witness: unknown;
}

export interface ImpactEntry {
  step: string;
  before: string[];
  after: string[];
  starved: boolean;
}

export interface ImpactReport {
  resource: string;
  capability: string;
  action: "add" | "remove";
  changed: ImpactEntry[];
}

export interface ScheduleRow {
  step: string;
  resource: string;
  start_s: number;
  duration_s: number;
}

export interface SchedulePayload {
  assignments: ScheduleRow[];
  makespan_s: number;
  graph_version: number | null;
}

export interface RunInfo {
  run_id: string;
  product_class: string;
  steps: string[];
  created_at: number;
}

export interface EvidenceEdge {
  subject: string;
  kind: string;
  object: string;
}

export interface RankedCause {
  cause: string;
  scope: "global" | "resource-specific";
  weight: number;
  evidence: EvidenceEdge[];
}

export interface DiagnosisReport {
  context: {
    condition: string;
    affected_step: string | null;
    observed_on_resource: string | null;
  };
  causes: RankedCause[];
}

export interface ConditionRow {
  condition: string;
  affects: string[];
}

export interface ChatAnswer {
  intent: "diagnose" | "schedule" | "match" | "lookup" | "unknown";
  answer_text: string;
  structured: unknown;
}

/** Last path segment of an IRI, for display. */
export function localName(iri: string): string {
  for (const sep of ["#", "/", ":"]) {
    const index = iri.lastIndexOf(sep);
    if (index >= 0 && index < iri.length - 1) {
      return iri.slice(index + 1);
    }
  }
  return iri;
}
