"""Session-oriented HTTP facade over the parse -> resolve -> execute loop.

REST+JSON on one port, with a server-sent event stream per session that
announces deck version bumps so previews can refresh.
"""

from __future__ import annotations

import asyncio
import json
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import HTMLResponse, PlainTextResponse, StreamingResponse
from pydantic import BaseModel

from .deck_model import serialize_deck
from .docgen import render_html
from .errors import DeckforgeError
from .kb import kb_load, kb_save
from .mapping import (
    ClarificationRequest,
    ResolvedIntent,
    SessionState,
    apply_clarification,
    is_run_trigger,
    parse_parameter_edits,
    resolve,
    update_parameters,
)
from .parser import tag_command
from .sim import ExperimentConfig, run_experiment, write_curves_csv
from .skills import execute_atomic, execute_macro, record_macro
from .workspace import Workspace


@dataclass
class ChatTurn:
    session_id: str
    user_text: str
    reply_text: str
    clarification: ClarificationRequest | None
    deck_version: int
    deck_name: str | None = None

    def to_dict(self) -> dict:
        clar = None
        if self.clarification is not None:
            clar = {
                "missing": self.clarification.missing,
                "unknown_word": self.clarification.unknown_word,
                "candidates": list(self.clarification.candidates),
            }
        return {
            "session_id": self.session_id,
            "user_text": self.user_text,
            "reply_text": self.reply_text,
            "clarification": clar,
            "deck_version": self.deck_version,
            "deck_name": self.deck_name,
        }


@dataclass
class Session:
    session_id: str
    state: SessionState = field(default_factory=SessionState)
    # (event loop, asyncio.Queue) per open event stream; the loop is kept so a
    # worker thread can hand events to the stream's loop safely
    subscribers: list = field(default_factory=list)


class ChatService:
    """Synchronous core shared by the HTTP app, the REPL, and the tests."""

    def __init__(self, workspace: Workspace):
        self.workspace = workspace
        self.sessions: dict[str, Session] = {}

    def create_session(self) -> Session:
        session = Session(session_id=uuid.uuid4().hex[:12])
        self.sessions[session.session_id] = session
        return session

    def get_session(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise DeckforgeError(f"unknown session {session_id!r}")
        return session

    def handle_message(self, session_id: str, text: str) -> ChatTurn:
        session = self.get_session(session_id)
        ws = self.workspace
        state = session.state

        def turn(reply: str, clar: ClarificationRequest | None = None, deck: str | None = None) -> ChatTurn:
            return ChatTurn(session_id, text, reply, clar, ws.deck_version, deck)

        try:
            if not text or not text.strip():
                return turn("error[empty_command]: say something like 'create a piechart'.")

            if is_run_trigger(text):
                return self._run_analysis(session, text)

            if state.pending is not None:
                outcome = apply_clarification(state, text, ws.kb, ws.aliases)
                ws.save_kb()
                ws.save_aliases()
                return self._handle_outcome(session, text, outcome)

            edits = parse_parameter_edits(text)
            if edits:
                params = update_parameters(state, edits)
                summary = (
                    f"Parameters updated: firms={list(params.comparable_firms)}, "
                    f"horizon={params.horizon_months} months, metric={params.aggregation_metric}."
                )
                if state.staged is not None:
                    summary += " Say 'Run the analysis' to regenerate."
                return turn(summary)

            tagged = tag_command(ws.model, text)
            outcome = resolve(tagged, ws.kb, state, ws.aliases)
            return self._handle_outcome(session, text, outcome)
        except DeckforgeError as exc:
            return turn(f"error[{exc.code}]: {exc}")

    def _handle_outcome(self, session: Session, text: str, outcome) -> ChatTurn:
        ws = self.workspace
        state = session.state
        if isinstance(outcome, ClarificationRequest):
            return ChatTurn(
                session.session_id, text, outcome.question(), outcome, ws.deck_version
            )
        intent: ResolvedIntent = outcome
        if intent.object in ws.library.macros:
            state.staged = intent
            return ChatTurn(
                session.session_id,
                text,
                f"Ready to build '{intent.object}' for {intent.data_ref} into deck "
                f"'{intent.presentation}'. Say 'Run the analysis' to proceed.",
                None,
                ws.deck_version,
                intent.presentation,
            )
        # atomic skills execute immediately
        data = ws.require_dataset(intent.data_ref)
        deck = execute_atomic(ws.library, intent, data, ws, state.deck_parameters)
        ws.save_deck(deck)
        version = ws.bump_version()
        state.history.append(intent)
        self._notify(session, version, deck.name)
        return ChatTurn(
            session.session_id,
            text,
            f"Done: {intent.action} {intent.object} from {intent.data_ref} in '{deck.name}' "
            f"({len(deck.slides)} slides).",
            None,
            version,
            deck.name,
        )

    def _run_analysis(self, session: Session, text: str) -> ChatTurn:
        ws = self.workspace
        state = session.state
        intent = state.staged
        if intent is None:
            return ChatTurn(
                session.session_id, text,
                "Nothing is staged; describe an analysis first.", None, ws.deck_version,
            )
        data = ws.require_dataset(intent.data_ref)
        # regenerate from scratch so reruns with identical parameters are idempotent
        ws.delete_deck(intent.presentation)
        deck = execute_macro(
            ws.library, intent.object, data, ws,
            params=state.deck_parameters, presentation=intent.presentation,
        )
        ws.save_deck(deck)
        version = ws.bump_version()
        self._notify(session, version, deck.name)
        return ChatTurn(
            session.session_id, text,
            f"Analysis complete: deck '{deck.name}' now has {len(deck.slides)} slides.",
            None, version, deck.name,
        )

    def record_session_macro(self, session_id: str, name: str):
        session = self.get_session(session_id)
        macro = record_macro(self.workspace.library, session.state.history, name, self.workspace.kb)
        self.workspace.save_library()
        self.workspace.save_kb()
        return macro

    def _notify(self, session: Session, version: int, deck_name: str) -> None:
        event = {"deck_version": version, "deck_name": deck_name}
        for loop, queue in list(session.subscribers):
            loop.call_soon_threadsafe(queue.put_nowait, event)


class MessageBody(BaseModel):
    text: str


class MacroBody(BaseModel):
    name: str
    session_id: str


class ExperimentBody(BaseModel):
    alpha: float
    vocab_size: int
    pdf_shape: str
    repetitions: int = 10
    slides_per_phase: int = 3000
    episode_size: int = 10
    seed: int = 0


def create_app(workspace: Workspace) -> FastAPI:
    app = FastAPI(title="deckforge", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )
    service = ChatService(workspace)
    app.state.service = service

    @app.post("/sessions")
    def create_session():
        session = service.create_session()
        return {"session_id": session.session_id}

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, body: MessageBody):
        if session_id not in service.sessions:
            raise HTTPException(404, f"unknown session {session_id!r}")
        return service.handle_message(session_id, body.text).to_dict()

    @app.get("/sessions/{session_id}/events")
    async def events(session_id: str):
        if session_id not in service.sessions:
            raise HTTPException(404, f"unknown session {session_id!r}")
        session = service.sessions[session_id]
        queue: asyncio.Queue = asyncio.Queue()
        subscriber = (asyncio.get_running_loop(), queue)
        session.subscribers.append(subscriber)

        async def stream():
            try:
                yield "event: hello\ndata: {}\n\n"
                while True:
                    event = await queue.get()
                    yield f"data: {json.dumps(event)}\n\n"
            finally:
                session.subscribers.remove(subscriber)

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/decks/{name}")
    def get_deck(name: str):
        deck = workspace.decks.get(name)
        if deck is None:
            raise HTTPException(404, f"no deck named {name!r}")
        return PlainTextResponse(serialize_deck(deck), media_type="application/json")

    @app.get("/decks/{name}/html")
    def get_deck_html(name: str):
        deck = workspace.decks.get(name)
        if deck is None:
            raise HTTPException(404, f"no deck named {name!r}")
        return HTMLResponse(render_html(deck))

    @app.get("/kb")
    def get_kb():
        return PlainTextResponse(kb_save(workspace.kb), media_type="application/json")

    @app.put("/kb")
    def put_kb(body: dict):
        try:
            workspace.save_kb(kb_load(json.dumps(body)))
        except DeckforgeError as exc:
            raise HTTPException(400, str(exc)) from exc
        return {"ok": True}

    @app.get("/skills")
    def get_skills():
        return {
            "atomic": sorted(workspace.library.atomic),
            "macros": sorted(workspace.library.macros),
        }

    @app.post("/skills/macros")
    def post_macro(body: MacroBody):
        try:
            macro = service.record_session_macro(body.session_id, body.name)
        except DeckforgeError as exc:
            raise HTTPException(400, str(exc)) from exc
        return {"name": macro.name, "steps": len(macro.steps)}

    @app.post("/experiments")
    def post_experiment(body: ExperimentBody):
        try:
            config = ExperimentConfig(
                alpha=body.alpha,
                vocab_size=body.vocab_size,
                pdf_shape=body.pdf_shape,
                repetitions=body.repetitions,
                slides_per_phase=body.slides_per_phase,
                episode_size=body.episode_size,
                seed=body.seed,
            )
        except DeckforgeError as exc:
            raise HTTPException(400, str(exc)) from exc
        result = run_experiment(config)
        out = workspace.root / "experiments" / "curves.csv"
        write_curves_csv(result, str(out))
        return {
            "curves_csv": str(out),
            "mean_eval_score": {v: result.mean_eval_score(v) for v in result.eval_rep_means},
        }

    return app
