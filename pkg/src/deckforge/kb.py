"""Vocabulary knowledge bases: naive first-write and belief-scored learn-and-forget.

Both variants map (main-concept, user word) to a sub-concept behind one
interface so the mapping engine and the simulation harness can swap them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import AlreadyMappedError, FormatError, OntologyError, VariantMismatchError

KB_SCHEMA_VERSION = 1


class _NotFound:
    def __repr__(self) -> str:  # pragma: no cover
        return "NOT_FOUND"

    def __bool__(self) -> bool:
        return False


NOT_FOUND = _NotFound()


@dataclass(frozen=True)
class Ontology:
    """Main-concept to ordered sub-concept sets; ordering fixes tie-breaks."""

    sub_concepts: dict[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        owners: dict[str, str] = {}
        for mc, subs in self.sub_concepts.items():
            if not subs:
                raise OntologyError(f"main-concept {mc!r} has no sub-concepts")
            for sc in subs:
                if sc in owners:
                    raise OntologyError(f"sub-concept {sc!r} under both {owners[sc]!r} and {mc!r}")
                owners[sc] = mc
        object.__setattr__(
            self,
            "sub_concepts",
            {mc: tuple(sorted(subs)) for mc, subs in self.sub_concepts.items()},
        )

    @property
    def main_concepts(self) -> tuple[str, ...]:
        return tuple(self.sub_concepts)

    def subs(self, mc: str) -> tuple[str, ...]:
        if mc not in self.sub_concepts:
            raise OntologyError(f"unknown main-concept {mc!r}")
        return self.sub_concepts[mc]

    def check_sub(self, mc: str, sc: str) -> None:
        if sc not in self.subs(mc):
            raise OntologyError(f"{sc!r} is not a sub-concept of {mc!r}")

    def with_sub_concept(self, mc: str, sc: str) -> "Ontology":
        """New ontology with sc added under mc (no-op if already present)."""
        if sc in self.subs(mc):
            return self
        updated = dict(self.sub_concepts)
        updated[mc] = tuple(sorted((*updated[mc], sc)))
        return Ontology(updated)


def default_ontology() -> Ontology:
    return Ontology(
        {
            "object": ("piechart", "barchart", "linechart", "table", "company_briefing_deck"),
            "action": ("create", "update", "delete"),
        }
    )


class NaiveKB:
    """First mapping wins forever; there is no way to forget."""

    variant = "nkb"

    def __init__(self, ontology: Ontology | None = None):
        self.ontology = ontology if ontology is not None else default_ontology()
        self.word_map: dict[tuple[str, str], str] = {}

    def infer(self, mc: str, word: str):
        self.ontology.subs(mc)
        return self.word_map.get((mc, word), NOT_FOUND)

    def add(self, mc: str, word: str, sc: str) -> "NaiveKB":
        self.ontology.check_sub(mc, sc)
        if (mc, word) in self.word_map:
            raise AlreadyMappedError(f"({mc!r}, {word!r}) already mapped")
        self.word_map[(mc, word)] = sc
        return self

    def learn(self, mc: str, word: str, sc: str) -> "NaiveKB":
        """Tolerant add: an existing mapping is left untouched."""
        try:
            self.add(mc, word, sc)
        except AlreadyMappedError:
            pass
        return self


class RobustKB:
    """Belief-scored mapping with incremental learn-and-forget updates.

    Each (main-concept, word) entry keeps a probability distribution over
    the sibling sub-concepts plus the number of updates l it has seen.
    One observation moves mass 1/l to the chosen sub-concept and scales
    every belief by (l-1)/l, so the distribution stays normalized.
    """

    variant = "rkb"

    def __init__(self, ontology: Ontology | None = None):
        self.ontology = ontology if ontology is not None else default_ontology()
        self.beliefs: dict[tuple[str, str], tuple[dict[str, float], int]] = {}

    def infer(self, mc: str, word: str):
        subs = self.ontology.subs(mc)
        entry = self.beliefs.get((mc, word))
        if entry is None:
            return NOT_FOUND
        dist, _ = entry
        best, best_b = None, -1.0
        for sc in subs:  # ontology order breaks ties deterministically
            b = dist.get(sc, 0.0)
            if b > best_b:
                best, best_b = sc, b
        return best

    def observe(self, mc: str, word: str, chosen_sc: str) -> "RobustKB":
        self.ontology.check_sub(mc, chosen_sc)
        subs = self.ontology.subs(mc)
        dist, l = self.beliefs.get((mc, word), ({}, 0))
        l += 1
        scale = (l - 1) / l
        new_dist = {sc: dist.get(sc, 0.0) * scale for sc in subs}
        new_dist[chosen_sc] += 1.0 / l
        self.beliefs[(mc, word)] = (new_dist, l)
        return self

    # adding a word is just its first observation
    add = observe
    learn = observe


KnowledgeBase = NaiveKB | RobustKB


def kb_save(kb: KnowledgeBase) -> str:
    entries = []
    if isinstance(kb, NaiveKB):
        for (mc, word), sc in sorted(kb.word_map.items()):
            entries.append({"mc": mc, "word": word, "dist": {sc: 1.0}, "l": 1})
    else:
        for (mc, word), (dist, l) in sorted(kb.beliefs.items()):
            entries.append({"mc": mc, "word": word, "dist": dict(sorted(dist.items())), "l": l})
    doc = {
        "version": KB_SCHEMA_VERSION,
        "variant": kb.variant,
        "ontology": {mc: list(subs) for mc, subs in kb.ontology.sub_concepts.items()},
        "entries": entries,
    }
    return json.dumps(doc, indent=2)


def kb_load(text: str, expect_variant: str | None = None) -> KnowledgeBase:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"malformed KB-JSON: {exc}") from exc
    version = doc.get("version")
    if version != KB_SCHEMA_VERSION:
        raise FormatError(f"cannot migrate KB schema version {version!r}")
    variant = doc.get("variant")
    if expect_variant is not None and variant != expect_variant:
        raise VariantMismatchError(f"expected {expect_variant!r} KB file, got {variant!r}")
    ontology = Ontology({mc: tuple(subs) for mc, subs in doc["ontology"].items()})
    if variant == "nkb":
        nkb = NaiveKB(ontology)
        for e in doc["entries"]:
            (sc,) = e["dist"].keys()
            nkb.word_map[(e["mc"], e["word"])] = sc
        return nkb
    if variant == "rkb":
        rkb = RobustKB(ontology)
        for e in doc["entries"]:
            rkb.beliefs[(e["mc"], e["word"])] = (
                {sc: float(b) for sc, b in e["dist"].items()},
                int(e["l"]),
            )
        return rkb
    raise FormatError(f"unknown KB variant {variant!r}")
