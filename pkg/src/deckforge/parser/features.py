"""Per-token feature extraction for the concept tagger.

Feature set: POS of the token and its neighbors, first/last letters,
the token with first/last letter truncated, and all contiguous 2- and
3-letter subwords of the lowercased token.
"""

from __future__ import annotations

from dataclasses import dataclass

BOUNDARY = "BOUNDARY"  # reserved neighbor tag at sentence edges, not a POS tag


@dataclass(frozen=True)
class TokenFeatures:
    pos: str
    prev_pos: str
    next_pos: str
    first_letter: str
    last_letter: str
    trunc_first: str
    trunc_last: str
    char_ngrams: tuple[str, ...]


def _ngrams(word: str) -> tuple[str, ...]:
    grams = {word[i : i + n] for n in (2, 3) for i in range(len(word) - n + 1)}
    return tuple(sorted(grams))


def featurize(tokens_with_pos: list[tuple[str, str]]) -> list[TokenFeatures]:
    """One TokenFeatures per (token, pos) pair; neighbors get BOUNDARY at edges."""
    feats = []
    for i, (token, pos) in enumerate(tokens_with_pos):
        lower = token.lower()
        feats.append(
            TokenFeatures(
                pos=pos,
                prev_pos=tokens_with_pos[i - 1][1] if i > 0 else BOUNDARY,
                next_pos=tokens_with_pos[i + 1][1] if i + 1 < len(tokens_with_pos) else BOUNDARY,
                first_letter=lower[:1],
                last_letter=lower[-1:],
                trunc_first=lower[1:],
                trunc_last=lower[:-1],
                char_ngrams=_ngrams(lower),
            )
        )
    return feats


def feature_strings(tf: TokenFeatures) -> list[str]:
    """Flatten a TokenFeatures into the string keys used by the CRF weight table."""
    out = [
        f"pos={tf.pos}",
        f"prev_pos={tf.prev_pos}",
        f"next_pos={tf.next_pos}",
        f"first={tf.first_letter}",
        f"last={tf.last_letter}",
        f"tfirst={tf.trunc_first}",
        f"tlast={tf.trunc_last}",
    ]
    out.extend(f"ng={g}" for g in tf.char_ngrams)
    return out
