"""Synthetic annotated command corpus: templates x lexicon substitution.

Mirrors the scale of the original annotation effort (50 training and 25
test commands) without any proprietary data.
"""

from __future__ import annotations

from random import Random

from ..errors import FormatError
from .crf import LABELS, TaggedCommand

_ACTIONS = [
    "create", "make", "generate", "build", "produce", "update",
    "modify", "refresh", "revise", "delete", "remove", "drop",
]
_OBJECTS = [
    "Piechart", "piechart", "barchart", "Barchart", "histogram",
    "linechart", "chart", "graph", "table", "CompanyBriefingDeck",
    "briefing deck", "pie chart",
]
_DATA = [
    "Energy", "Finance", "Tech", "Healthcare", "Sales",
    "Revenue", "Marketing", "Trading", "Commodities", "Equities",
    "AAPL", "MSFT", "F", "GM", "Tesla Motor", "Acme Corp",
]
_PRESENTATIONS = [
    "weekly report", "weeklyreport", "monthly summary", "client deck",
    "quarterly review", "board pack", "sales update", "team briefing",
]

# Slots: {A}=ACTION {O}=OBJECT {D}=DATA {P}=PRESENTATION; all else OUTSIDE.
_TEMPLATES = [
    "Please {A} a {O} using {D} data and add it in the {P} .",
    "{A} a {O} from the {D} dataset for the {P} .",
    "Can you {A} a {O} with {D} data in the {P} ?",
    "{A} the {O} in the {P} using {D} data .",
    "{A} the {O} from the {P} .",
    "Please {A} the {P} with a {O} of {D} data .",
    "I need a {O} of {D} in my {P} .",
    "{A} me a {O} showing {D} figures and put it in the {P} .",
    "{A} the {D} numbers in the {P} .",
    "Please {A} a {O} about {D} and include it in the {P} .",
    "{A} a {O} using the {D} data .",
    "put a {O} of {D} data in the {P} please .",
    "{A} a {O} about {D}",
    "{A} a {O} for {D}",
]

_OUTSIDE_ONLY = [
    "please do it now",
    "thanks that is all",
    "Run the analysis now please",
]

_SLOT_LABEL = {"{A}": "ACTION", "{O}": "OBJECT", "{D}": "DATA", "{P}": "PRESENTATION"}
_SLOT_POOL = {"{A}": _ACTIONS, "{O}": _OBJECTS, "{D}": _DATA, "{P}": _PRESENTATIONS}


def _instantiate(template: str, rng: Random) -> TaggedCommand:
    tokens: list[str] = []
    labels: list[str] = []
    for piece in template.split():
        if piece in _SLOT_LABEL:
            filler = rng.choice(_SLOT_POOL[piece])
            for tok in filler.split():
                tokens.append(tok)
                labels.append(_SLOT_LABEL[piece])
        else:
            tokens.append(piece)
            labels.append("OUTSIDE")
    return TaggedCommand(tuple(tokens), tuple(labels))


def generate_corpus(n: int, seed: int = 0) -> list[TaggedCommand]:
    """n distinct annotated commands, deterministic for a fixed seed."""
    rng = Random(seed)
    out: list[TaggedCommand] = []
    for text in _OUTSIDE_ONLY[: max(0, min(len(_OUTSIDE_ONLY), n // 20))]:
        toks = tuple(text.split())
        out.append(TaggedCommand(toks, tuple("OUTSIDE" for _ in toks)))
    seen = {c.tokens for c in out}
    while len(out) < n:
        cmd = _instantiate(rng.choice(_TEMPLATES), rng)
        if cmd.tokens in seen:
            continue
        seen.add(cmd.tokens)
        out.append(cmd)
    return out


def train_test_corpora(seed: int = 0) -> tuple[list[TaggedCommand], list[TaggedCommand]]:
    """Disjoint 50-command training and 25-command test sets."""
    full = generate_corpus(75, seed=seed)
    rng = Random(seed + 1)
    rng.shuffle(full)
    return full[:50], full[50:]


def save_corpus_file(corpus: list[TaggedCommand], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for cmd in corpus:
            fh.write(" ".join(f"{t}/{l}" for t, l in zip(cmd.tokens, cmd.labels)) + "\n")


def load_corpus_file(path: str) -> list[TaggedCommand]:
    corpus = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            tokens, labels = [], []
            for item in line.split():
                if "/" not in item:
                    raise FormatError(f"line {lineno}: missing /LABEL in {item!r}")
                tok, lab = item.rsplit("/", 1)
                if lab not in LABELS:
                    raise FormatError(f"line {lineno}: unknown label {lab!r}")
                tokens.append(tok)
                labels.append(lab)
            corpus.append(TaggedCommand(tuple(tokens), tuple(labels)))
    return corpus
