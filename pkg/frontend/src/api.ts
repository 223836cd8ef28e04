// Thin client for the answer service; no additional endpoints.

import type { AnswerEnvelope, CorpusStats, ResolveResult, RunTrace } from "./types";

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new Error(`GET ${path} failed: ${response.status}`);
    }
    return (await response.json()) as T;
  }

  async health(): Promise<{ status: string; corpus: CorpusStats }> {
    return this.getJson("/healthz");
  }

  async answer(question: string, mode: "workflow" | "baseline"): Promise<AnswerEnvelope> {
    const response = await fetch(`${this.baseUrl}/v1/answer`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ question, mode }),
    });
    if (!response.ok) {
      throw new Error(`answer failed: ${response.status}`);
    }
    return (await response.json()) as AnswerEnvelope;
  }

  async trace(runId: string): Promise<RunTrace> {
    return this.getJson(`/v1/runs/${encodeURIComponent(runId)}/trace`);
  }

  resolveUrl(name: string, type: string, k = 5): string {
    const params = new URLSearchParams({ q: name, type, k: String(k) });
    return `${this.baseUrl}/v1/entities/resolve?${params}`;
  }

  async resolve(name: string, type: string, k = 5): Promise<ResolveResult> {
    return this.getJson(
      `/v1/entities/resolve?${new URLSearchParams({ q: name, type, k: String(k) })}`,
    );
  }
}
