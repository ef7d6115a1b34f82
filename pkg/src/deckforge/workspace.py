"""File-backed workspace: knowledge base, aliases, skill library, decks, datasets.

Everything persists as plain JSON/CSV under one directory so a restart
reloads the exact prior state, including the deck version counter.
"""

from __future__ import annotations

import datetime as dt
import json
import os
import re
from pathlib import Path
from typing import Callable

from .deck_model import Deck, DeckParameters, TimeSeries, load_timeseries_csv, parse_deck, serialize_deck
from .errors import DataError
from .kb import KnowledgeBase, NaiveKB, RobustKB, kb_load, kb_save
from .parser import CrfModel, load_model, save_model, train_tagger, train_test_corpora
from .skills import SkillLibrary, load_library, save_library

ENV_WORKSPACE = "DECKFORGE_WORKSPACE"
ENV_FROZEN_DATE = "DECKFORGE_FROZEN_DATE"

# vocabulary every fresh workspace understands out of the box
_SEED_VOCABULARY = [
    ("object", "briefing deck", "company_briefing_deck"),
    ("object", "companybriefingdeck", "company_briefing_deck"),
    ("object", "pie chart", "piechart"),
]


def _safe_stem(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]+", "_", name) or "deck"


def default_clock() -> dt.date:
    frozen = os.environ.get(ENV_FROZEN_DATE)
    if frozen:
        return dt.date.fromisoformat(frozen)
    return dt.date.today()


class Workspace:
    """Single-writer persistent store for one deployment directory."""

    def __init__(
        self,
        root: str | Path,
        kb_variant: str = "rkb",
        clock: Callable[[], dt.date] | None = None,
        train_parser: bool = True,
    ):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "datasets").mkdir(exist_ok=True)
        (self.root / "decks").mkdir(exist_ok=True)
        (self.root / "experiments").mkdir(exist_ok=True)
        self.clock = clock or default_clock

        self.kb = self._load_kb(kb_variant)
        self.aliases = self._load_json("aliases.json", {})
        self.library = self._load_library()
        self.decks: dict[str, Deck] = self._load_decks()
        meta = self._load_json("meta.json", {"deck_version": 0})
        self.deck_version = int(meta["deck_version"])
        self.model: CrfModel | None = None
        if train_parser:
            self.model = self._load_or_train_model()

    # --- persistence helpers ---------------------------------------------

    def _path(self, name: str) -> Path:
        return self.root / name

    def _load_json(self, name: str, default):
        p = self._path(name)
        if p.exists():
            return json.loads(p.read_text(encoding="utf-8"))
        return default

    def _save_json(self, name: str, value) -> None:
        self._path(name).write_text(json.dumps(value, indent=2), encoding="utf-8")

    def _load_kb(self, variant: str) -> KnowledgeBase:
        p = self._path("kb.json")
        if p.exists():
            return kb_load(p.read_text(encoding="utf-8"))
        kb = RobustKB() if variant == "rkb" else NaiveKB()
        for mc, word, sc in _SEED_VOCABULARY:
            kb.learn(mc, word, sc)
        self.kb = kb
        self.save_kb(kb)
        return kb

    def save_kb(self, kb: KnowledgeBase | None = None) -> None:
        if kb is not None:
            self.kb = kb
        self._path("kb.json").write_text(kb_save(self.kb), encoding="utf-8")

    def save_aliases(self) -> None:
        self._save_json("aliases.json", self.aliases)

    def _load_library(self) -> SkillLibrary:
        p = self._path("skills.json")
        if p.exists():
            return load_library(p.read_text(encoding="utf-8"))
        return SkillLibrary()

    def save_library(self) -> None:
        self._path("skills.json").write_text(save_library(self.library), encoding="utf-8")

    def _load_decks(self) -> dict[str, Deck]:
        decks = {}
        for p in sorted((self.root / "decks").glob("*.json")):
            deck = parse_deck(p.read_text(encoding="utf-8"))
            decks[deck.name] = deck
        return decks

    def save_deck(self, deck: Deck) -> None:
        self.decks[deck.name] = deck
        path = self.root / "decks" / f"{_safe_stem(deck.name)}.json"
        path.write_text(serialize_deck(deck), encoding="utf-8")

    def delete_deck(self, name: str) -> None:
        self.decks.pop(name, None)
        path = self.root / "decks" / f"{_safe_stem(name)}.json"
        if path.exists():
            path.unlink()

    def bump_version(self) -> int:
        self.deck_version += 1
        self._save_json("meta.json", {"deck_version": self.deck_version})
        return self.deck_version

    # --- datasets ----------------------------------------------------------

    def dataset(self, name: str) -> TimeSeries | None:
        path = self.root / "datasets" / f"{name}.csv"
        if not path.exists():
            return None
        return load_timeseries_csv(str(path), name=name)

    def require_dataset(self, name: str) -> TimeSeries:
        series = self.dataset(name)
        if series is None:
            raise DataError(f"dataset {name!r} not found in the workspace")
        return series

    def peer_series(self, params: DeckParameters) -> list[TimeSeries]:
        out = []
        for firm in params.comparable_firms:
            series = self.dataset(firm)
            if series is not None:
                out.append(series)
        return out

    # --- parser model -------------------------------------------------------

    def _load_or_train_model(self) -> CrfModel:
        p = self._path("parser_model.json")
        if p.exists():
            return load_model(str(p))
        train, _ = train_test_corpora()
        model = train_tagger(train, epochs=50, seed=0)
        save_model(model, str(p))
        return model
