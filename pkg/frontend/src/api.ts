// Service client. The transport is injectable so tests can run a scripted
// mock server; the browser entry point passes window.fetch and EventSource.

import type { EventPage, Snapshot, StreamDelta } from "./types.js";

export interface StreamHandle {
  close(): void;
}

export interface ApiClient {
  getState(): Promise<Snapshot>;
  getEvents(since: number): Promise<EventPage>;
  applyAction(id: string): Promise<Response>;
  rejectAction(id: string): Promise<Response>;
  setMode(mode: string): Promise<Response>;
  injectDisturbance(body: unknown): Promise<Response>;
  tick(): Promise<Response>;
  openStream(
    onDelta: (delta: StreamDelta) => void,
    onDown: () => void,
  ): StreamHandle;
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

interface EventSourceLike {
  onmessage: ((ev: { data: string }) => void) | null;
  onerror: ((ev: unknown) => void) | null;
  close(): void;
}

export class HttpApiClient implements ApiClient {
  constructor(
    private base: string,
    private fetchImpl: FetchLike,
    private eventSource: (url: string) => EventSourceLike,
  ) {}

  private async json<T>(path: string): Promise<T> {
    const res = await this.fetchImpl(`${this.base}${path}`);
    if (!res.ok) {
      throw new Error(`GET ${path} -> ${res.status}`);
    }
    return (await res.json()) as T;
  }

  getState(): Promise<Snapshot> {
    return this.json<Snapshot>("/api/state");
  }

  getEvents(since: number): Promise<EventPage> {
    return this.json<EventPage>(`/api/events?since=${since}`);
  }

  private post(path: string, body?: unknown): Promise<Response> {
    return this.fetchImpl(`${this.base}${path}`, {
      method: "POST",
      headers: body === undefined ? {} : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
  }

  applyAction(id: string): Promise<Response> {
    return this.post(`/api/actions/${encodeURIComponent(id)}/apply`);
  }

  rejectAction(id: string): Promise<Response> {
    return this.post(`/api/actions/${encodeURIComponent(id)}/reject`);
  }

  setMode(mode: string): Promise<Response> {
    return this.post("/api/mode", { mode });
  }

  injectDisturbance(body: unknown): Promise<Response> {
    return this.post("/api/disturbance", body);
  }

  tick(): Promise<Response> {
    return this.post("/api/tick");
  }

  openStream(
    onDelta: (delta: StreamDelta) => void,
    onDown: () => void,
  ): StreamHandle {
    const source = this.eventSource(`${this.base}/api/stream`);
    source.onmessage = (ev) => {
      try {
        onDelta(JSON.parse(ev.data) as StreamDelta);
      } catch {
        // keepalive or malformed frame: ignore
      }
    };
    source.onerror = () => onDown();
    return { close: () => source.close() };
  }
}
