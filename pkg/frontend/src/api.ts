import type { DecisionAck, DocumentPayload, StatsPayload, Verdict } from './types.js';

/** Thin typed client over the review service HTTP API. */
export class ReviewApi {
  constructor(private readonly base: string = '') {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, init);
    if (!res.ok) {
      let detail = res.statusText;
      try {
        const body = await res.json();
        if (body && typeof body.error === 'string') detail = body.error;
      } catch {
        // leave the status text
      }
      throw new Error(`${res.status}: ${detail}`);
    }
    return (await res.json()) as T;
  }

  fetchDocument(): Promise<DocumentPayload> {
    return this.request<DocumentPayload>('/api/document');
  }

  fetchStats(): Promise<StatsPayload> {
    return this.request<StatsPayload>('/api/stats');
  }

  postDecision(line: number, edit: number, verdict: Verdict): Promise<DecisionAck> {
    return this.request<DecisionAck>(`/api/lines/${line}/edits/${edit}/decision`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ verdict }),
    });
  }

  async fetchExport(): Promise<string> {
    const res = await fetch(this.base + '/api/export');
    if (!res.ok) throw new Error(`${res.status}: export failed`);
    return res.text();
  }
}
