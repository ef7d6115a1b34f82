/**
 * HTTP client for the report-generation service.
 *
 * `fetch` is injectable so unit tests can run without a server; the
 * event stream is read from the raw response body because Node exposes
 * fetch streaming but no EventSource.
 */

import {
  parseChatTurn,
  parseDeck,
  parseDeckEvent,
  type ChatTurn,
  type Deck,
  type DeckEvent,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export interface EventStreamHandle {
  close(): void;
  done: Promise<void>;
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = globalThis.fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const res = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!res.ok) {
      const body = await res.text().catch(() => "");
      throw new ApiError(res.status, `${init?.method ?? "GET"} ${path} -> ${res.status}: ${body}`);
    }
    return res;
  }

  async createSession(): Promise<string> {
    const res = await this.request("/sessions", { method: "POST" });
    const body = (await res.json()) as { session_id?: unknown };
    if (typeof body.session_id !== "string") throw new ApiError(500, "missing session_id");
    return body.session_id;
  }

  async sendMessage(sessionId: string, text: string): Promise<ChatTurn> {
    const res = await this.request(`/sessions/${sessionId}/messages`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ text }),
    });
    return parseChatTurn(await res.json());
  }

  async getDeck(name: string): Promise<Deck> {
    const res = await this.request(`/decks/${encodeURIComponent(name)}`);
    return parseDeck(await res.json());
  }

  /**
   * Subscribe to the session's deck-update stream. `onEvent` fires once per
   * `data:` frame (the initial `event: hello` handshake carries no data
   * payload we act on). Returns a handle whose `close()` aborts the request.
   */
  streamEvents(
    sessionId: string,
    onEvent: (event: DeckEvent) => void,
    onStatus?: (status: "open" | "closed") => void,
  ): EventStreamHandle {
    const controller = new AbortController();
    const done = (async () => {
      const res = await this.request(`/sessions/${sessionId}/events`, {
        signal: controller.signal,
      });
      if (!res.body) throw new ApiError(500, "event stream has no body");
      onStatus?.("open");
      const reader = res.body.getReader();
      const decoder = new TextDecoder();
      let buffer = "";
      try {
        for (;;) {
          const { value, done: eof } = await reader.read();
          if (eof) break;
          buffer += decoder.decode(value, { stream: true });
          let sep: number;
          while ((sep = buffer.indexOf("\n\n")) >= 0) {
            const frame = buffer.slice(0, sep);
            buffer = buffer.slice(sep + 2);
            for (const line of frame.split("\n")) {
              if (!line.startsWith("data:")) continue;
              const payload = line.slice(5).trim();
              if (!payload || payload === "{}") continue;
              onEvent(parseDeckEvent(JSON.parse(payload)));
            }
          }
        }
      } finally {
        onStatus?.("closed");
      }
    })().catch((err: unknown) => {
      // closing the handle aborts the fetch; that is a normal shutdown
      if (controller.signal.aborted) return;
      throw err;
    });
    // mark the rejection as observed so a dropped connection never becomes
    // an unhandled rejection; callers awaiting `done` still see the error
    done.catch(() => {});
    return { close: () => controller.abort(), done };
  }
}
