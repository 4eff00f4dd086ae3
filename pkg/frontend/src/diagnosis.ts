/** Diagnosis explorer model: ranked causes with clickable evidence paths,
 * and the chat answer interpretation. Never invents causes: everything
 * shown comes out of a DiagnosisReport payload. */

import { ChatAnswer, DiagnosisReport, RankedCause } from "./types.js";

export interface CauseRow {
  cause: string;
  scope: "global" | "resource-specific";
  weight: number;
  /** Nodes on the evidence path, for highlighting in the graph browser. */
  evidenceNodes: string[];
}

function evidenceNodes(cause: RankedCause): string[] {
  const seen = new Set<string>();
  const ordered: string[] = [];
  for (const edge of cause.evidence) {
    for (const node of [edge.subject, edge.object]) {
      if (!seen.has(node)) {
        seen.add(node);
        ordered.push(node);
      }
    }
  }
  return ordered;
}

export function causeRows(report: DiagnosisReport): CauseRow[] {
  return report.causes.map((cause) => ({
    cause: cause.cause,
    scope: cause.scope,
    weight: cause.weight,
    evidenceNodes: evidenceNodes(cause),
  }));
}

export interface ChatView {
  intent: ChatAnswer["intent"];
  text: string;
  /** Present only for diagnose answers; taken verbatim from the payload. */
  causes: CauseRow[] | null;
}

export function chatView(answer: ChatAnswer): ChatView {
  if (answer.intent === "diagnose" && answer.structured) {
    return {
      intent: answer.intent,
      text: answer.answer_text,
      causes: causeRows(answer.structured as DiagnosisReport),
    };
  }
  return { intent: answer.intent, text: answer.answer_text, causes: null };
}
