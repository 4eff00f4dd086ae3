/** Thin fetch client for the pprakg service; all data shown in the console
 * comes through here. */

import {
  ChatAnswer,
  ConditionRow,
  DiagnosisReport,
  Envelope,
  GraphPayload,
  ImpactReport,
  MatchReport,
  RunInfo,
  SchedulePayload,
  Violation,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    message: string,
    readonly status: number,
    readonly errors: { code: string; message: string }[],
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<Envelope<T>> {
    const response = await fetch(this.baseUrl + path, init);
    const envelope = (await response.json()) as Envelope<T>;
    if (!envelope.ok) {
      const detail = envelope.errors.map((e) => `${e.code}: ${e.message}`).join("; ");
      throw new ApiError(detail || `request failed (${response.status})`, response.status, envelope.errors);
    }
    return envelope;
  }

  private post<T>(path: string, body: unknown): Promise<Envelope<T>> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  graph(): Promise<Envelope<GraphPayload>> {
    return this.request("/api/graph");
  }

  validate(): Promise<Envelope<Violation[]>> {
    return this.request("/api/validate");
  }

  eligible(step: string): Promise<Envelope<MatchReport>> {
    return this.request(`/api/processes/${encodeURIComponent(step)}/eligible`);
  }

  conditions(asset?: string): Promise<Envelope<ConditionRow[]>> {
    const query = asset ? `?asset=${encodeURIComponent(asset)}` : "";
    return this.request(`/api/conditions${query}`);
  }

  createRuns(product: string, n: number): Promise<Envelope<{ runs: RunInfo[] }>> {
    return this.post("/api/runs", { product, n });
  }

  schedulePreview(runIds?: string[], improve = false): Promise<Envelope<SchedulePayload>> {
    return this.post("/api/schedule", { run_ids: runIds, policy: { improve } });
  }

  commitSchedule(schedule: SchedulePayload): Promise<Envelope<{ committed_steps: number }>> {
    return this.post("/api/schedule/commit", schedule);
  }

  toggleCapability(
    resource: string,
    capability: string,
    action: "add" | "remove",
  ): Promise<Envelope<ImpactReport>> {
    return this.post(`/api/resources/${encodeURIComponent(resource)}/capability`, {
      capability,
      action,
    });
  }

  diagnose(condition: string, observedOnResource?: string): Promise<Envelope<DiagnosisReport>> {
    return this.post("/api/diagnose", {
      condition,
      observed_on_resource: observedOnResource ?? null,
    });
  }

  chat(question: string): Promise<Envelope<ChatAnswer>> {
    return this.post("/api/chat", { question });
  }
}
