import { describe, expect, it } from "vitest";
import type { ApiClient, EventStreamHandle } from "../src/api.js";
import { ChatController } from "../src/controller.js";
import type { ChatTurn, Deck, DeckEvent } from "../src/types.js";

function turn(overrides: Partial<ChatTurn> = {}): ChatTurn {
  return {
    session_id: "s1",
    user_text: "hi",
    reply_text: "ok",
    clarification: null,
    deck_version: 0,
    deck_name: null,
    ...overrides,
  };
}

function deck(slideCount = 1): Deck {
  return {
    name: "report",
    parameters: { comparable_firms: [], horizon_months: 12, aggregation_metric: "mean" },
    slides: Array.from({ length: slideCount }, (_, i) => ({
      title: `Slide ${i}`,
      date: "2025-01-15",
      objects: [],
    })),
  };
}

interface FakeApiOptions {
  replies?: Array<ChatTurn | Error>;
  decks?: Record<string, Deck>;
}

/** Minimal scripted stand-in for ApiClient. */
function fakeApi(options: FakeApiOptions = {}) {
  const replies = [...(options.replies ?? [])];
  const sent: string[] = [];
  let emit: ((e: DeckEvent) => void) | null = null;
  let closed = false;
  const stub = {
    sent,
    pushEvent(e: DeckEvent) {
      emit?.(e);
    },
    get streamClosed() {
      return closed;
    },
    async createSession() {
      return "s1";
    },
    async sendMessage(_sid: string, text: string) {
      sent.push(text);
      const next = replies.shift() ?? turn();
      if (next instanceof Error) throw next;
      return next;
    },
    async getDeck(name: string) {
      const d = options.decks?.[name];
      if (!d) throw new Error(`no deck ${name}`);
      return d;
    },
    streamEvents(
      _sid: string,
      onEvent: (e: DeckEvent) => void,
      onStatus?: (s: "open" | "closed") => void,
    ): EventStreamHandle {
      emit = onEvent;
      onStatus?.("open");
      return {
        close: () => {
          closed = true;
          onStatus?.("closed");
        },
        done: Promise.resolve(),
      };
    },
  };
  return { stub, api: stub as unknown as ApiClient };
}

async function settled() {
  await new Promise((r) => setTimeout(r, 0));
}

describe("ChatController", () => {
  it("start() opens a session and the event stream", async () => {
    const { api } = fakeApi();
    const c = new ChatController(api);
    await c.start();
    expect(c.getView().sessionId).toBe("s1");
    expect(c.getView().connection).toBe("open");
  });

  it("blocks empty input and input before the session opens", async () => {
    const { api } = fakeApi();
    const c = new ChatController(api);
    expect(c.canSend("hello")).toBe(false);
    await c.start();
    expect(c.canSend("   ")).toBe(false);
    expect(c.canSend("hello")).toBe(true);
    await expect(c.send("  ")).rejects.toThrow("nothing to send");
  });

  it("send() is optimistic: the entry is pending before the reply lands", async () => {
    let release!: () => void;
    const gate = new Promise<void>((r) => (release = r));
    const { stub, api } = fakeApi();
    const realSend = stub.sendMessage.bind(stub);
    stub.sendMessage = async (sid: string, text: string) => {
      await gate;
      return realSend(sid, text);
    };
    const c = new ChatController(api);
    await c.start();
    const sending = c.send("create a piechart");
    expect(c.getView().transcript[0].status).toBe("pending");
    release();
    await sending;
    expect(c.getView().transcript[0].status).toBe("ok");
  });

  it("failed sends are marked and retry() re-sends the same text", async () => {
    const { stub, api } = fakeApi({
      replies: [new Error("network down"), turn({ reply_text: "recovered" })],
    });
    const c = new ChatController(api);
    await c.start();
    const id = await c.send("create a piechart");
    expect(c.getView().transcript[0].status).toBe("failed");
    expect(c.getView().transcript[0].error).toContain("network down");
    await c.retry(id);
    expect(stub.sent).toEqual(["create a piechart", "create a piechart"]);
    const entries = c.getView().transcript;
    expect(entries[entries.length - 1].turn?.reply_text).toBe("recovered");
  });

  it("retry() rejects turns that did not fail", async () => {
    const { api } = fakeApi({ replies: [turn()] });
    const c = new ChatController(api);
    await c.start();
    const id = await c.send("hello");
    await expect(c.retry(id)).rejects.toThrow("not retryable");
    await expect(c.retry(999)).rejects.toThrow("not retryable");
  });

  it("clarification candidates become quick replies; ticker questions are free text", async () => {
    const { api } = fakeApi({
      replies: [
        turn({ clarification: { missing: "object", unknown_word: "pizzachart", candidates: ["piechart", "barchart"] } }),
        turn({ clarification: { missing: "ticker", unknown_word: null, candidates: [] } }),
      ],
    });
    const c = new ChatController(api);
    await c.start();
    await c.send("create a pizzachart using the TSLA data");
    expect(c.quickReplies()).toEqual(["piechart", "barchart"]);
    await c.send("create a briefing deck about Tesla Motor");
    expect(c.quickReplies()).toEqual([]);
  });

  it("refetches the deck when a turn bumps the version", async () => {
    const { api } = fakeApi({
      replies: [turn({ deck_version: 1, deck_name: "report" })],
      decks: { report: deck(3) },
    });
    const c = new ChatController(api);
    await c.start();
    await c.send("create a piechart using the TSLA data");
    expect(c.getView().deckVersion).toBe(1);
    expect(c.getView().deck?.slides).toHaveLength(3);
  });

  it("refetches the deck when the event stream announces an update", async () => {
    const { stub, api } = fakeApi({ decks: { report: deck(10) } });
    const c = new ChatController(api);
    await c.start();
    stub.pushEvent({ deck_version: 1, deck_name: "report" });
    await settled();
    expect(c.getView().deckVersion).toBe(1);
    expect(c.getView().deck?.slides).toHaveLength(10);
  });

  it("a failed deck refetch keeps the last good preview and sets the banner", async () => {
    const decks: Record<string, Deck> = { report: deck(2) };
    const { stub, api } = fakeApi({ decks });
    const c = new ChatController(api);
    await c.start();
    stub.pushEvent({ deck_version: 1, deck_name: "report" });
    await settled();
    delete decks.report;
    stub.pushEvent({ deck_version: 2, deck_name: "report" });
    await settled();
    const view = c.getView();
    expect(view.deck?.slides).toHaveLength(2);
    expect(view.deckError).toContain("no deck report");
  });

  it("stop() closes the event stream", async () => {
    const { stub, api } = fakeApi();
    const c = new ChatController(api);
    await c.start();
    c.stop();
    expect(stub.streamClosed).toBe(true);
    expect(c.getView().connection).toBe("closed");
  });

  it("notifies subscribers on every view change", async () => {
    const { api } = fakeApi({ replies: [turn()] });
    const c = new ChatController(api);
    const seen: string[] = [];
    c.onChange((v) => seen.push(`${v.transcript.length}:${v.transcript[v.transcript.length - 1]?.status ?? "-"}`));
    await c.start();
    await c.send("hello");
    expect(seen).toContain("1:pending");
    expect(seen[seen.length - 1]).toBe("1:ok");
  });
});
