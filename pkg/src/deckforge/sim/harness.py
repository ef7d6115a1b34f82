"""Two-phase knowledge-base experiments with paired user streams.

Each repetition draws one learning stream (collaborative with probability
alpha) and one all-collaborative evaluation stream, then replays the same
streams against a fresh naive KB and a fresh belief KB so the comparison
is paired slide for slide.
"""

from __future__ import annotations

import csv
import statistics
from bisect import bisect_right
from dataclasses import dataclass, field
from random import Random

from ..errors import ConfigError, DimensionError
from ..kb import NOT_FOUND, NaiveKB, Ontology, RobustKB
from .lexicon import MAX_VOCAB, MIN_VOCAB, NeighborLexicon, generate_lexicon
from .users import PDF_SHAPES, VocabularyPdf

MAIN_CONCEPT = "object"
KB_VARIANTS = ("nkb", "rkb")


@dataclass(frozen=True)
class ExperimentConfig:
    alpha: float
    vocab_size: int
    pdf_shape: str
    repetitions: int = 10
    slides_per_phase: int = 3000
    episode_size: int = 10
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.4 <= self.alpha <= 1.0:
            raise ConfigError("alpha must lie in [0.4, 1]")
        if not MIN_VOCAB <= self.vocab_size <= MAX_VOCAB:
            raise ConfigError(f"vocab_size must lie in [{MIN_VOCAB}, {MAX_VOCAB}]")
        if self.pdf_shape not in PDF_SHAPES:
            raise ConfigError(f"unknown pdf shape {self.pdf_shape!r}")
        if self.repetitions < 1 or self.slides_per_phase < 1 or self.episode_size < 1:
            raise ConfigError("repetitions, slides_per_phase, episode_size must be >= 1")


@dataclass(frozen=True)
class SlideRecord:
    word: str
    gold: str
    predicted: str | None  # None encodes NOT_FOUND
    clarified: bool


@dataclass(frozen=True)
class EpisodeLog:
    score: int
    records: tuple[SlideRecord, ...] = ()


def matching_score(predicted: list, gold: list) -> int:
    """Count of agreeing positions; NOT_FOUND entries never match."""
    if len(predicted) != len(gold):
        raise DimensionError(f"length mismatch: {len(predicted)} vs {len(gold)}")
    return sum(1 for p, g in zip(predicted, gold) if p is not NOT_FOUND and p == g)


def _make_stream(
    rng: Random,
    subs: tuple[str, ...],
    lexicon: NeighborLexicon,
    pdf: VocabularyPdf,
    slides: int,
    alpha: float,
    collaborative_only: bool,
) -> list[tuple[str, str, str]]:
    """(gold sc, word, claimed sc) per slide; claimed is always the gold sc."""
    nsub = len(subs)
    if nsub < 2:
        raise ConfigError("need at least two sub-concepts to model non-collaborative users")
    lists = [lexicon.words(sc) for sc in subs]
    cum = pdf.cumulative
    stream = []
    for _ in range(slides):
        gi = rng.randrange(nsub)
        if collaborative_only or rng.random() < alpha:
            si = gi
        else:
            si = rng.randrange(nsub - 1)
            if si >= gi:
                si += 1
        rank = bisect_right(cum, rng.random())
        stream.append((subs[gi], lists[si][rank], subs[gi]))
    return stream


def _run_stream(kb, stream: list[tuple[str, str, str]], learn: bool) -> list[int]:
    """Per-slide hit flags (prediction made before any learning on that slide)."""
    infer = kb.infer
    teach = kb.learn
    hits = []
    append = hits.append
    for gold, word, claimed in stream:
        pred = infer(MAIN_CONCEPT, word)
        append(1 if pred == gold else 0)
        # every interaction teaches toward the claimed sub-concept: a mismatch
        # triggers a clarification, agreement reinforces the existing belief
        # (a no-op for the naive KB, which never overwrites)
        if learn:
            teach(MAIN_CONCEPT, word, claimed)
    return hits


def _episodes(hits: list[int], episode_size: int) -> list[int]:
    return [
        sum(hits[i : i + episode_size])
        for i in range(0, len(hits) - episode_size + 1, episode_size)
    ]


def _fresh_kb(variant: str, subs: tuple[str, ...]):
    ontology = Ontology({MAIN_CONCEPT: subs})
    return NaiveKB(ontology) if variant == "nkb" else RobustKB(ontology)


def _ensure_lexicon(config: ExperimentConfig, lexicon: NeighborLexicon | None) -> tuple:
    if lexicon is None:
        subs = ("piechart", "barchart", "linechart", "table", "company_briefing_deck")
        lexicon = generate_lexicon(subs, config.vocab_size)
    else:
        lexicon = lexicon.truncated(config.vocab_size)
    return tuple(sorted(lexicon.lists)), lexicon


def run_phase(
    kb,
    config: ExperimentConfig,
    lexicon: NeighborLexicon | None = None,
    phase: str = "learning",
    seed: int | None = None,
) -> list[EpisodeLog]:
    """One phase against one live KB, with full per-slide records."""
    if phase not in ("learning", "evaluation"):
        raise ConfigError(f"unknown phase {phase!r}")
    subs, lexicon = _ensure_lexicon(config, lexicon)
    rng = Random(config.seed if seed is None else seed)
    stream = _make_stream(
        rng, subs, lexicon, VocabularyPdf(config.pdf_shape, config.vocab_size),
        config.slides_per_phase, config.alpha, collaborative_only=phase == "evaluation",
    )
    learn = phase == "learning"
    records: list[SlideRecord] = []
    for gold, word, claimed in stream:
        pred = kb.infer(MAIN_CONCEPT, word)
        clarified = pred != claimed
        records.append(
            SlideRecord(word, gold, None if pred is NOT_FOUND else pred, learn and clarified)
        )
        if learn:
            kb.learn(MAIN_CONCEPT, word, claimed)
    logs = []
    es = config.episode_size
    for i in range(0, len(records) - es + 1, es):
        chunk = records[i : i + es]
        logs.append(EpisodeLog(sum(1 for r in chunk if r.predicted == r.gold), tuple(chunk)))
    return logs


def rolling_smooth(values: list[float], window: int = 20) -> list[float]:
    """Trailing rolling mean, shrinking the window at the start."""
    out = []
    acc = 0.0
    for i, v in enumerate(values):
        acc += v
        if i >= window:
            acc -= values[i - window]
        out.append(acc / min(i + 1, window))
    return out


def time_to_plateau_fraction(
    curve: list[float], fraction: float = 0.9, tail: float = 0.1, sustain: int = 50
) -> int:
    """First index where the curve stays at/above fraction*plateau for sustain slides.

    The plateau is the mean of the trailing tail share of the curve. Returns
    len(curve) when the level is never sustained.
    """
    if not curve:
        raise ConfigError("empty curve")
    tail_n = max(1, int(len(curve) * tail))
    threshold = fraction * statistics.fmean(curve[-tail_n:])
    run = 0
    for i, v in enumerate(curve):
        run = run + 1 if v >= threshold else 0
        if run >= min(sustain, len(curve) - 0):
            return i - run + 1
    return len(curve)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    learning_curves: dict[str, list[float]]  # kb variant -> smoothed score per slide index
    evaluation_curves: dict[str, list[float]]
    eval_rep_means: dict[str, list[float]]  # kb variant -> mean episode score per repetition

    def mean_eval_score(self, variant: str) -> float:
        return statistics.fmean(self.eval_rep_means[variant])


def _rep_seed(seed: int, rep: int, phase: int) -> int:
    return seed * 1_000_003 + rep * 7919 + phase


def run_experiment(config: ExperimentConfig, lexicon: NeighborLexicon | None = None) -> ExperimentResult:
    """E paired repetitions with fresh KBs per repetition."""
    subs, lexicon = _ensure_lexicon(config, lexicon)
    pdf = VocabularyPdf(config.pdf_shape, config.vocab_size)
    S, es = config.slides_per_phase, config.episode_size
    learn_sums = {v: [0.0] * S for v in KB_VARIANTS}
    eval_sums = {v: [0.0] * S for v in KB_VARIANTS}
    eval_rep_means: dict[str, list[float]] = {v: [] for v in KB_VARIANTS}

    for rep in range(config.repetitions):
        learn_stream = _make_stream(
            Random(_rep_seed(config.seed, rep, 0)), subs, lexicon, pdf, S, config.alpha, False
        )
        eval_stream = _make_stream(
            Random(_rep_seed(config.seed, rep, 1)), subs, lexicon, pdf, S, config.alpha, True
        )
        for variant in KB_VARIANTS:
            kb = _fresh_kb(variant, subs)
            learn_hits = _run_stream(kb, learn_stream, learn=True)
            eval_hits = _run_stream(kb, eval_stream, learn=False)
            for i, h in enumerate(learn_hits):
                learn_sums[variant][i] += h
            for i, h in enumerate(eval_hits):
                eval_sums[variant][i] += h
            episodes = _episodes(eval_hits, es)
            eval_rep_means[variant].append(statistics.fmean(episodes))

    E = config.repetitions
    # per-slide mean hit scaled to episode-score units, then smoothed (window 20)
    learning_curves = {
        v: rolling_smooth([s / E * es for s in learn_sums[v]]) for v in KB_VARIANTS
    }
    evaluation_curves = {
        v: rolling_smooth([s / E * es for s in eval_sums[v]]) for v in KB_VARIANTS
    }
    return ExperimentResult(config, learning_curves, evaluation_curves, eval_rep_means)


@dataclass(frozen=True)
class GridCell:
    alpha: float
    vocab_size: int
    pdf_shape: str
    mean_diff: float
    stddev: float
    rkb_rep_means: tuple[float, ...]
    nkb_rep_means: tuple[float, ...]


def run_grid(
    alphas: list[float],
    vocab_sizes: list[int],
    pdf_shapes: list[str],
    repetitions: int = 10,
    slides_per_phase: int = 3000,
    episode_size: int = 10,
    seed: int = 0,
    lexicon: NeighborLexicon | None = None,
) -> list[GridCell]:
    """RKB-minus-NKB mean evaluation score over the alpha x N x pdf grid."""
    cells = []
    for pdf_shape in pdf_shapes:
        for alpha in alphas:
            for n in vocab_sizes:
                config = ExperimentConfig(
                    alpha=alpha,
                    vocab_size=n,
                    pdf_shape=pdf_shape,
                    repetitions=repetitions,
                    slides_per_phase=slides_per_phase,
                    episode_size=episode_size,
                    seed=seed,
                )
                result = run_experiment(config, lexicon)
                diffs = [
                    r - k
                    for r, k in zip(result.eval_rep_means["rkb"], result.eval_rep_means["nkb"])
                ]
                cells.append(
                    GridCell(
                        alpha=alpha,
                        vocab_size=n,
                        pdf_shape=pdf_shape,
                        mean_diff=statistics.fmean(diffs),
                        stddev=statistics.stdev(diffs) if len(diffs) > 1 else 0.0,
                        rkb_rep_means=tuple(result.eval_rep_means["rkb"]),
                        nkb_rep_means=tuple(result.eval_rep_means["nkb"]),
                    )
                )
    return cells


def write_curves_csv(result: ExperimentResult, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["phase", "kb_variant", "slide_index", "score"])
        for phase, curves in (
            ("learning", result.learning_curves),
            ("evaluation", result.evaluation_curves),
        ):
            for variant, curve in curves.items():
                for i, score in enumerate(curve):
                    writer.writerow([phase, variant, i, f"{score:.6f}"])


def write_grid_csv(cells: list[GridCell], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["alpha", "N", "pdf", "mean_diff", "stddev"])
        for c in cells:
            writer.writerow(
                [c.alpha, c.vocab_size, c.pdf_shape, f"{c.mean_diff:.6f}", f"{c.stddev:.6f}"]
            )


def nkb_user_study(
    n_users: int = 18,
    slides_per_user: int = 5,
    vocab_size: int = 15,
    pdf_shape: str = "inv_n2",
    seed: int = 0,
    lexicon: NeighborLexicon | None = None,
) -> list[int]:
    """Clarification counts per sequential collaborative user on one shared NKB."""
    config = ExperimentConfig(
        alpha=1.0, vocab_size=vocab_size, pdf_shape=pdf_shape,
        repetitions=1, slides_per_phase=slides_per_user, episode_size=1, seed=seed,
    )
    subs, lexicon = _ensure_lexicon(config, lexicon)
    pdf = VocabularyPdf(pdf_shape, vocab_size)
    kb = _fresh_kb("nkb", subs)
    rng = Random(seed)
    counts = []
    for _ in range(n_users):
        stream = _make_stream(rng, subs, lexicon, pdf, slides_per_user, 1.0, True)
        clarifications = 0
        for gold, word, claimed in stream:
            pred = kb.infer(MAIN_CONCEPT, word)
            if pred != claimed:
                clarifications += 1
                kb.learn(MAIN_CONCEPT, word, claimed)
        counts.append(clarifications)
    return counts
