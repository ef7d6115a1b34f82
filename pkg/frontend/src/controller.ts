/**
 * Chat controller: wires the API client to the view reducer.
 *
 * Sends are optimistic (a pending transcript entry appears immediately),
 * failed turns stay in the transcript and can be retried, and deck
 * previews refresh both after turns that bump the deck version and when
 * the server pushes an update over the event stream.
 */

import type { ApiClient, EventStreamHandle } from "./api.js";
import {
  canSend,
  initialView,
  quickReplies,
  reduce,
  type SessionEvent,
  type SessionView,
} from "./state.js";
import { SchemaError } from "./types.js";

export class ChatController {
  private view: SessionView = initialView;
  private nextTurnId = 1;
  private stream: EventStreamHandle | null = null;
  private readonly listeners: Array<(view: SessionView) => void> = [];

  constructor(private readonly api: ApiClient) {}

  getView(): SessionView {
    return this.view;
  }

  onChange(listener: (view: SessionView) => void): void {
    this.listeners.push(listener);
  }

  private dispatch(event: SessionEvent): void {
    this.view = reduce(this.view, event);
    for (const listener of this.listeners) listener(this.view);
  }

  /** Create the session and open its deck-update stream. */
  async start(): Promise<void> {
    const sessionId = await this.api.createSession();
    this.dispatch({ type: "session_opened", sessionId });
    this.stream = this.api.streamEvents(
      sessionId,
      (event) => {
        void this.refreshDeck(event.deck_name, event.deck_version);
      },
      (status) => this.dispatch({ type: "connection", status }),
    );
  }

  stop(): void {
    this.stream?.close();
    this.stream = null;
  }

  canSend(text: string): boolean {
    return canSend(this.view, text);
  }

  /** Quick-reply button labels; empty means the answer must be typed. */
  quickReplies(): string[] {
    return quickReplies(this.view);
  }

  /** Send a message; resolves to the transcript entry id. */
  async send(text: string): Promise<number> {
    if (!this.canSend(text)) throw new Error("nothing to send");
    const sessionId = this.view.sessionId!;
    const id = this.nextTurnId++;
    this.dispatch({ type: "turn_sent", id, userText: text });
    try {
      const turn = await this.api.sendMessage(sessionId, text);
      this.dispatch({ type: "turn_ok", id, turn });
      if (turn.deck_name !== null && turn.deck_version > this.view.deckVersion) {
        await this.refreshDeck(turn.deck_name, turn.deck_version);
      }
      return id;
    } catch (err) {
      this.dispatch({ type: "turn_failed", id, error: String(err) });
      return id;
    }
  }

  /** Re-send the text of a failed transcript entry. */
  async retry(id: number): Promise<number> {
    const entry = this.view.transcript.find((e) => e.id === id);
    if (!entry || entry.status !== "failed") throw new Error(`turn ${id} is not retryable`);
    return this.send(entry.userText);
  }

  private async refreshDeck(name: string, version: number): Promise<void> {
    try {
      const deck = await this.api.getDeck(name);
      this.dispatch({ type: "deck_loaded", deck, version });
    } catch (err) {
      if (err instanceof SchemaError) {
        this.dispatch({ type: "deck_invalid", error: err.message });
      } else {
        this.dispatch({ type: "deck_invalid", error: String(err) });
      }
    }
  }
}
