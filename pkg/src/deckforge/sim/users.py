"""Simulated users: rank distributions over neighbor words, honest or polluting."""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from random import Random

from ..errors import ConfigError
from .lexicon import NeighborLexicon

PDF_SHAPES = ("inv_log", "inv_n", "inv_n2")


def _raw_weight(shape: str, n: int) -> float:
    # ranks are offset so the weight is finite at n=0
    if shape == "inv_log":
        return 1.0 / math.log(n + 2)
    if shape == "inv_n":
        return 1.0 / (n + 1)
    if shape == "inv_n2":
        return 1.0 / (n + 1) ** 2
    raise ConfigError(f"unknown pdf shape {shape!r}")


@dataclass(frozen=True)
class VocabularyPdf:
    """Normalized rank distribution over [0, n) for one pdf shape."""

    shape: str
    n: int
    weights: tuple[float, ...] = field(init=False)
    cumulative: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError("vocabulary size must be positive")
        raw = [_raw_weight(self.shape, k) for k in range(self.n)]
        total = sum(raw)
        weights = tuple(w / total for w in raw)
        running, cum = 0.0, []
        for w in weights:
            running += w
            cum.append(running)
        cum[-1] = 1.0
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "cumulative", tuple(cum))

    def sample_rank(self, rng: Random) -> int:
        return bisect_right(self.cumulative, rng.random())


@dataclass
class SimulatedUser:
    collaborative: bool
    pdf: VocabularyPdf
    vocab_size: int
    rng_seed: int
    rng: Random = field(init=False)

    def __post_init__(self) -> None:
        if self.pdf.n != self.vocab_size:
            raise ConfigError("pdf support must equal the vocabulary size")
        self.rng = Random(self.rng_seed)


def sample_word(
    user: SimulatedUser,
    gold_sc: str,
    lexicon: NeighborLexicon,
    rng: Random | None = None,
) -> tuple[str, str]:
    """(word, claimed sub-concept) for one slide request.

    Collaborative users draw from the gold list; non-collaborative users
    draw from another sub-concept's list while still claiming the gold one.
    """
    rng = rng if rng is not None else user.rng
    if user.collaborative:
        source_sc = gold_sc
    else:
        others = [sc for sc in lexicon.lists if sc != gold_sc]
        if not others:
            raise ConfigError("non-collaborative sampling needs at least two sub-concepts")
        source_sc = others[rng.randrange(len(others))]
    words = lexicon.words(source_sc)
    if len(words) < user.vocab_size:
        raise ConfigError(f"lexicon list for {source_sc!r} shorter than vocabulary size")
    rank = user.pdf.sample_rank(rng)
    return words[rank], gold_sc
