/**
 * Session view state as a pure reducer over transcript and deck events.
 *
 * Replaying the same event list always reproduces the same view, which is
 * what the tests assert. Nothing in here touches the network or the DOM.
 */

import type { ChatTurn, Clarification, Deck } from "./types.js";

export type ConnectionStatus = "connecting" | "open" | "closed";

export interface TranscriptEntry {
  id: number;
  userText: string;
  status: "pending" | "ok" | "failed";
  turn: ChatTurn | null;
  error: string | null;
}

export interface SessionView {
  sessionId: string | null;
  transcript: TranscriptEntry[];
  pendingClarification: Clarification | null;
  deck: Deck | null;
  deckVersion: number;
  deckError: string | null;
  connection: ConnectionStatus;
}

export type SessionEvent =
  | { type: "session_opened"; sessionId: string }
  | { type: "turn_sent"; id: number; userText: string }
  | { type: "turn_ok"; id: number; turn: ChatTurn }
  | { type: "turn_failed"; id: number; error: string }
  | { type: "deck_loaded"; deck: Deck; version: number }
  | { type: "deck_invalid"; error: string }
  | { type: "connection"; status: ConnectionStatus };

export const initialView: SessionView = {
  sessionId: null,
  transcript: [],
  pendingClarification: null,
  deck: null,
  deckVersion: 0,
  deckError: null,
  connection: "connecting",
};

export function reduce(view: SessionView, event: SessionEvent): SessionView {
  switch (event.type) {
    case "session_opened":
      return { ...view, sessionId: event.sessionId };
    case "turn_sent":
      return {
        ...view,
        transcript: [
          ...view.transcript,
          { id: event.id, userText: event.userText, status: "pending", turn: null, error: null },
        ],
      };
    case "turn_ok":
      return {
        ...view,
        transcript: view.transcript.map((e) =>
          e.id === event.id ? { ...e, status: "ok", turn: event.turn } : e,
        ),
        pendingClarification: event.turn.clarification,
      };
    case "turn_failed":
      return {
        ...view,
        transcript: view.transcript.map((e) =>
          e.id === event.id ? { ...e, status: "failed", error: event.error } : e,
        ),
      };
    case "deck_loaded":
      // stale responses never roll the preview back
      if (event.version < view.deckVersion) return view;
      return { ...view, deck: event.deck, deckVersion: event.version, deckError: null };
    case "deck_invalid":
      // keep the last good preview, surface the banner
      return { ...view, deckError: event.error };
    case "connection":
      return { ...view, connection: event.status };
  }
}

export function replay(events: SessionEvent[]): SessionView {
  return events.reduce(reduce, initialView);
}

/** Quick-reply labels for the pending clarification; [] means free text only. */
export function quickReplies(view: SessionView): string[] {
  return view.pendingClarification ? [...view.pendingClarification.candidates] : [];
}

/** Send is allowed only for non-blank input on an open session. */
export function canSend(view: SessionView, text: string): boolean {
  return view.sessionId !== null && text.trim().length > 0;
}
