"""Ranked neighbor-word lists per sub-concept, synthetic or loaded from TSV.

Stands in for embedding-derived nearest neighbors: rank 0 is the word a
user is most likely to reach for. Lists are duplicate-free across the
whole lexicon so every word has exactly one gold sub-concept.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import ConfigError, FormatError

MIN_VOCAB = 5
MAX_VOCAB = 1000

_SYNONYMS: dict[str, list[str]] = {
    "piechart": ["pie", "piegraph", "pizzachart", "wedgechart", "circlegraph", "piefigure", "pieviz", "donutchart"],
    "barchart": ["histogram", "barplot", "bargraph", "columnchart", "barfigure", "barviz", "stickchart", "colplot"],
    "linechart": ["linegraph", "lineplot", "trendline", "curvechart", "linefigure", "lineviz", "timeplot", "trendchart"],
    "table": ["grid", "matrix", "sheet", "tabulation", "datatable", "tableau", "listing", "crosstab"],
    "company_briefing_deck": ["briefingdeck", "companydeck", "briefingpack", "companybrief", "pitchdeck", "briefdeck", "companypack", "briefingset"],
}


@dataclass(frozen=True)
class NeighborLexicon:
    """rank-ordered candidate words per sub-concept; rank 0 is closest."""

    lists: dict[str, tuple[str, ...]]

    def __post_init__(self) -> None:
        owners: dict[str, str] = {}
        for sc, words in self.lists.items():
            for w in words:
                if w in owners:
                    raise ConfigError(f"word {w!r} in both {owners[w]!r} and {sc!r} lists")
                owners[w] = sc

    def words(self, sc: str) -> tuple[str, ...]:
        if sc not in self.lists:
            raise ConfigError(f"no neighbor list for sub-concept {sc!r}")
        return self.lists[sc]

    def gold(self, word: str) -> str | None:
        for sc, words in self.lists.items():
            if word in words:
                return sc
        return None

    def truncated(self, n: int) -> "NeighborLexicon":
        if not (MIN_VOCAB <= n <= MAX_VOCAB):
            raise ConfigError(f"vocabulary size {n} outside [{MIN_VOCAB}, {MAX_VOCAB}]")
        short = min(len(w) for w in self.lists.values())
        if short < n:
            raise ConfigError(f"lexicon holds only {short} words per list, need {n}")
        return NeighborLexicon({sc: words[:n] for sc, words in self.lists.items()})


def generate_lexicon(sub_concepts: tuple[str, ...] | list[str], n: int = MAX_VOCAB) -> NeighborLexicon:
    """Synthetic lexicon: curated synonyms first, then deterministic variants."""
    lists = {}
    for sc in sub_concepts:
        seeds = _SYNONYMS.get(sc, [f"{sc}word"])
        words = list(seeds[:n])
        i = 0
        while len(words) < n:
            seed = seeds[i % len(seeds)]
            words.append(f"{seed}_{sc}_{i}")  # sc infix keeps lists globally disjoint
            i += 1
        lists[sc] = tuple(words)
    return NeighborLexicon(lists)


def save_lexicon_tsv(lexicon: NeighborLexicon, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sc in sorted(lexicon.lists):
            for word in lexicon.lists[sc]:
                fh.write(f"{sc}\t{word}\n")


def load_lexicon_tsv(path: str) -> NeighborLexicon:
    """TSV loader: `sub_concept<TAB>word` per line, rank order within each concept."""
    lists: dict[str, list[str]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise FormatError(f"line {lineno}: expected sub_concept<TAB>word")
            sc, word = parts
            lists.setdefault(sc, []).append(word)
    return NeighborLexicon({sc: tuple(ws) for sc, ws in lists.items()})
