// Thin client over the /v1 JSON + SSE contract.  fetch is injectable
// so tests can run against a mock service.

import { CreatedSession, ExampleBatch, ServiceError, SessionEvent, WordRef } from "./types";

type FetchLike = (url: string, init?: any) => Promise<{
  status: number;
  json(): Promise<any>;
}>;

async function unwrap(response: { status: number; json(): Promise<any> }): Promise<any> {
  const body = await response.json();
  if (response.status >= 400) {
    throw new ServiceError(response.status, body.code ?? "Unknown",
      body.message ?? "request failed");
  }
  return body;
}

export class ServiceClient {
  baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl: string, fetchFn?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  async createSession(seed: WordRef, langs: [string, string][],
                      config?: Record<string, unknown>): Promise<CreatedSession> {
    return unwrap(await this.fetchFn(`${this.baseUrl}/v1/sessions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ seed, langs, ...(config ? { config } : {}) }),
    }));
  }

  async recenter(sessionId: string, word: WordRef): Promise<void> {
    await unwrap(await this.fetchFn(
      `${this.baseUrl}/v1/sessions/${sessionId}/recenter`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(word),
      }));
  }

  async examples(sessionId: string, n: number,
                 edge?: { u: WordRef; v: WordRef }): Promise<ExampleBatch> {
    const params = new URLSearchParams({ n: String(n) });
    if (edge) {
      params.set("u", `${edge.u.lang}:${edge.u.word}`);
      params.set("v", `${edge.v.lang}:${edge.v.word}`);
    }
    return unwrap(await this.fetchFn(
      `${this.baseUrl}/v1/sessions/${sessionId}/examples?${params}`));
  }

  async search(prefix: string, lang: string): Promise<string[]> {
    const params = new URLSearchParams({ q: prefix, lang });
    const body = await unwrap(await this.fetchFn(`${this.baseUrl}/v1/search?${params}`));
    return body.completions;
  }

  eventsUrl(sessionId: string, cursor: number): string {
    return `${this.baseUrl}/v1/sessions/${sessionId}/events?cursor=${cursor}`;
  }
}

/** EventSource wrapper that resumes from the last seen seq on error. */
export class EventStream {
  private source: EventSource | null = null;
  cursor: number;
  private closed = false;

  constructor(
    private client: ServiceClient,
    private sessionId: string,
    private onEvent: (event: SessionEvent) => void,
    private onStatus?: (connected: boolean) => void,
    startCursor = -1,
  ) {
    this.cursor = startCursor;
    this.open();
  }

  private open(): void {
    this.source = new EventSource(this.client.eventsUrl(this.sessionId, this.cursor));
    this.source.onopen = () => this.onStatus?.(true);
    this.source.onmessage = (message) => this.handle(message.data);
    for (const kind of ["word_added", "word_removed", "coords_updated",
                        "recentered", "converged"]) {
      this.source.addEventListener(kind, (message: MessageEvent) =>
        this.handle(message.data));
    }
    this.source.onerror = () => {
      // auto-resume from the cursor after a short pause
      this.onStatus?.(false);
      this.source?.close();
      if (!this.closed) {
        setTimeout(() => !this.closed && this.open(), 1000);
      }
    };
  }

  private handle(data: string): void {
    const event = JSON.parse(data) as SessionEvent;
    if (event.seq > this.cursor) {
      this.cursor = event.seq;
      this.onEvent(event);
    }
  }

  close(): void {
    this.closed = true;
    this.source?.close();
  }
}
