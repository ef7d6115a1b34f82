"""Resolves tagged commands into skill invocations, driving clarification turns.

Slot filling order is fixed (action, object, data, presentation, then
literal parameters) so dialogs are deterministic. Company-name aliases
live in a plain dict, separate from the belief knowledge base.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field, replace

from .deck_model import DeckParameters
from .errors import (
    AmbiguityError,
    DeckforgeError,
    InvalidChoiceError,
    ValidationError,
)
from .kb import NOT_FOUND, KnowledgeBase
from .parser.crf import TaggedCommand

MACRO_MAIN_CONCEPT = "object"
RUN_TRIGGER = "run the analysis"

_TICKER_RE = re.compile(r"^[A-Z][A-Z0-9]{0,5}$")


@dataclass(frozen=True)
class ResolvedIntent:
    action: str
    object: str
    data_ref: str
    presentation: str
    extra_params: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ClarificationRequest:
    missing: str  # main-concept or literal slot name ("ticker", "data", ...)
    unknown_word: str | None
    candidates: tuple[str, ...]

    def question(self) -> str:
        if self.missing == "ticker":
            word = f" '{self.unknown_word}'" if self.unknown_word else ""
            return f"I don't recognize the company{word}. What is its ticker?"
        if self.candidates:
            opts = ", ".join(self.candidates)
            word = f" '{self.unknown_word}'" if self.unknown_word else ""
            return f"I don't know the {self.missing}{word}. Did you mean one of: {opts}?"
        return f"Which {self.missing} should I use?"


@dataclass
class SessionState:
    deck_parameters: DeckParameters = field(default_factory=DeckParameters)
    pending: ClarificationRequest | None = None
    tagged: TaggedCommand | None = None
    answers: dict = field(default_factory=dict)  # literal slot answers for the pending command
    staged: ResolvedIntent | None = None  # awaiting the run trigger
    history: list = field(default_factory=list)  # executed intents, for macro recording


def is_run_trigger(text: str) -> bool:
    return text.strip().strip(".!?").lower() == RUN_TRIGGER


def concept_spans(tagged: TaggedCommand) -> list[tuple[str, str]]:
    """Contiguous runs of one concept label, as (label, joined surface text)."""
    spans = []
    current_label, current_tokens = None, []
    for tok, lab in zip(tagged.tokens, tagged.labels):
        if lab == current_label and lab != "OUTSIDE":
            current_tokens.append(tok)
            continue
        if current_label not in (None, "OUTSIDE"):
            spans.append((current_label, " ".join(current_tokens)))
        current_label, current_tokens = lab, [tok]
    if current_label not in (None, "OUTSIDE"):
        spans.append((current_label, " ".join(current_tokens)))
    return spans


def _single_span(spans: list[tuple[str, str]], label: str) -> str | None:
    found = [text for lab, text in spans if lab == label]
    if len(found) > 1:
        raise AmbiguityError(f"two {label} spans: {found[0]!r} and {found[1]!r}")
    return found[0] if found else None


def _resolve_closed(kb: KnowledgeBase, mc: str, word: str):
    lowered = word.lower()
    if lowered in kb.ontology.subs(mc):
        return lowered
    return kb.infer(mc, lowered)


def resolve(
    tagged: TaggedCommand,
    kb: KnowledgeBase,
    state: SessionState,
    aliases: dict[str, str] | None = None,
):
    """ResolvedIntent if every slot fills, else the first ClarificationRequest.

    The tagged command is remembered on the session so a later
    apply_clarification can resume where resolution stopped.
    """
    aliases = aliases or {}
    if state.tagged is None or state.tagged.tokens != tagged.tokens:
        state.answers = {}
    state.tagged = tagged
    spans = concept_spans(tagged)

    def clarify(request: ClarificationRequest) -> ClarificationRequest:
        state.pending = request
        return request

    # action: defaults to create when the command names none
    action_word = _single_span(spans, "ACTION")
    if action_word is None:
        action = state.answers.get("action", "create")
    else:
        action = _resolve_closed(kb, "action", action_word)
        if action is NOT_FOUND:
            action = state.answers.get("action")
            if action is None:
                return clarify(
                    ClarificationRequest("action", action_word.lower(), kb.ontology.subs("action"))
                )

    # object
    object_word = _single_span(spans, "OBJECT")
    if object_word is None:
        obj = state.answers.get("object")
        if obj is None:
            return clarify(ClarificationRequest("object", None, kb.ontology.subs("object")))
    else:
        obj = _resolve_closed(kb, "object", object_word)
        if obj is NOT_FOUND:
            obj = state.answers.get("object")
            if obj is None:
                return clarify(
                    ClarificationRequest("object", object_word.lower(), kb.ontology.subs("object"))
                )

    # data
    data_word = _single_span(spans, "DATA")
    extra: dict = {}
    if obj == "company_briefing_deck":  # the built-in macro runs per company ticker
        ticker = state.answers.get("ticker")
        if ticker is None and data_word is not None:
            lowered = data_word.lower()
            if _TICKER_RE.match(data_word):
                ticker = data_word
            elif lowered in aliases:
                ticker = aliases[lowered]
        if ticker is None:
            return clarify(ClarificationRequest("ticker", data_word, ()))
        data_ref = ticker
        extra["ticker"] = ticker
    else:
        data_ref = data_word or state.answers.get("data")
        if data_ref is None:
            return clarify(ClarificationRequest("data", None, ()))

    # presentation defaults to a shared report deck
    presentation = _single_span(spans, "PRESENTATION") or state.answers.get("presentation") or "report"

    state.pending = None
    return ResolvedIntent(
        action=action,
        object=obj,
        data_ref=data_ref,
        presentation=presentation,
        extra_params=extra,
    )


def apply_clarification(
    state: SessionState,
    answer: str,
    kb: KnowledgeBase,
    aliases: dict[str, str] | None = None,
):
    """Consume the pending clarification, teach the KB or alias table, resume."""
    if state.pending is None:
        raise DeckforgeError("no pending clarification on this session")
    pending = state.pending
    answer = answer.strip()
    aliases = aliases if aliases is not None else {}

    if pending.candidates:  # closed-class main concept
        if answer.lower() not in pending.candidates:
            raise InvalidChoiceError(
                f"{answer!r} is not one of: {', '.join(pending.candidates)}"
            )
        chosen = answer.lower()
        if pending.unknown_word:
            kb.learn(pending.missing, pending.unknown_word, chosen)
        state.answers[pending.missing] = chosen
    elif pending.missing == "ticker":
        ticker = answer.upper()
        if not _TICKER_RE.match(ticker):
            raise InvalidChoiceError(f"{answer!r} does not look like a ticker symbol")
        if pending.unknown_word:
            aliases[pending.unknown_word.lower()] = ticker
        state.answers["ticker"] = ticker
    else:  # open literal slot (data, presentation)
        if not answer:
            raise InvalidChoiceError("empty answer")
        state.answers[pending.missing] = answer

    state.pending = None
    return resolve(state.tagged, kb, state, aliases)


def update_parameters(state: SessionState, edits: list[tuple[str, str, object]]) -> DeckParameters:
    """Apply (param, operation, value) edits to the session's deck parameters."""
    params = state.deck_parameters
    for param, op, value in edits:
        if param == "comparable_firms":
            firms = list(params.comparable_firms)
            if op == "add":
                if value not in firms:
                    firms.append(str(value))
            elif op == "remove":
                if value in firms:
                    firms.remove(value)
                else:
                    warnings.warn(f"{value!r} not in comparable firms; ignoring", stacklevel=2)
            else:
                raise ValidationError(f"unknown operation {op!r} for comparable_firms")
            params = replace(params, comparable_firms=tuple(firms))
        elif param == "horizon_months":
            if op != "set":
                raise ValidationError(f"unknown operation {op!r} for horizon_months")
            months = int(value)
            if months <= 0:
                raise ValidationError("horizon must be positive")
            params = replace(params, horizon_months=months)
        elif param == "aggregation_metric":
            if op != "set":
                raise ValidationError(f"unknown operation {op!r} for aggregation_metric")
            params = replace(params, aggregation_metric=str(value))
        else:
            raise ValidationError(f"unknown parameter {param!r}")
    state.deck_parameters = params
    return params


_FIRM_EDIT_RE = re.compile(
    r"\b(adding|removing)\s+(?:the\s+)?(?:company\s+|firm\s+)?"
    r"[\"']?([A-Za-z][\w&.\- ]*?)[\"']?(?=\s+and\s|\s*[,.;]|$)",
    re.IGNORECASE,
)
_HORIZON_TO_RE = re.compile(r"\bto\s+(\d+)\s+months?\b", re.IGNORECASE)
_HORIZON_RE = re.compile(r"\b(\d+)\s+months?\b", re.IGNORECASE)


def parse_parameter_edits(text: str) -> list[tuple[str, str, object]] | None:
    """Rule-based detection of what-if parameter edits; None when text is not one."""
    edits: list[tuple[str, str, object]] = []
    lowered = text.lower()

    if "comparable" in lowered or "adding the company" in lowered or "removing the company" in lowered:
        for op, firm in _FIRM_EDIT_RE.findall(text):
            edits.append(("comparable_firms", "add" if op.lower() == "adding" else "remove", firm.strip()))

    if "horizon" in lowered or ("month" in lowered and any(ch.isdigit() for ch in text)):
        m = _HORIZON_TO_RE.search(text)
        if m is None:
            matches = _HORIZON_RE.findall(text)
            m_val = matches[-1] if matches else None
        else:
            m_val = m.group(1)
        if m_val is not None:
            edits.append(("horizon_months", "set", int(m_val)))

    if "median" in lowered or ("mean" in lowered and ("use" in lowered or "instead" in lowered or "metric" in lowered)):
        i_median = lowered.find("median")
        i_mean = lowered.find("mean")
        if i_median >= 0 and (i_mean < 0 or i_median < i_mean):
            edits.append(("aggregation_metric", "set", "median"))
        elif i_mean >= 0:
            edits.append(("aggregation_metric", "set", "mean"))

    return edits or None
